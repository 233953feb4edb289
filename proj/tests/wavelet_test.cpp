#include "oracles.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace windpart;

namespace {

TimeSeries cosine_series(std::size_t n, double period_samples, double mean = 0.0, double amp = 1.0,
                         std::int64_t dt = 600)
{
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t)
        v[t] = mean + amp * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / period_samples);
    return TimeSeries(v, dt);
}

std::size_t argmax(const std::vector<double>& v)
{
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

} // namespace

TEST(Morlet, Values)
{
    const auto z = morlet_value(0.0);
    EXPECT_NEAR(z.real(), 0.75113, 5e-6);
    EXPECT_EQ(z.imag(), 0.0);
    EXPECT_NEAR(std::abs(morlet_value(1.0)), 0.45558, 5e-6);
    for (double t : {0.3, 1.7, 4.2})
        EXPECT_DOUBLE_EQ(std::abs(morlet_value(t)), std::abs(morlet_value(-t)));
}

TEST(Morlet, AdmissibilityOverride)
{
    EXPECT_ERRC(MorletWavelet{4.0}.validate(), Errc::InvalidArgument);
    EXPECT_NO_THROW((MorletWavelet{4.0, 1.0, true}.validate()));
    EXPECT_ERRC((MorletWavelet{0.0, 1.0, true}.validate()), Errc::InvalidArgument);
    EXPECT_ERRC((MorletWavelet{6.0, -1.0}.validate()), Errc::InvalidArgument);
}

TEST(ScaleGrid, Examples)
{
    const auto s = scale_grid({2.0, 0.125, 4});
    const std::vector<double> expected{2.0, 2.1810, 2.3784, 2.5937};
    for (std::size_t j = 0; j < 4; ++j)
        EXPECT_NEAR(s[j], expected[j], 5e-5);
    EXPECT_EQ(scale_grid({3.5, 0.125, 1}), std::vector<double>{3.5});
    EXPECT_EQ(scale_grid({1.0, 1.0, 4}), (std::vector<double>{1, 2, 4, 8}));
    EXPECT_ERRC(scale_grid({0.0, 0.125, 4}), Errc::InvalidArgument);
    EXPECT_ERRC(scale_grid({1.0, 0.0, 4}), Errc::InvalidArgument);
    EXPECT_ERRC(scale_grid({1.0, 0.1, 0}), Errc::InvalidArgument);
}

TEST(ScaleGrid, DefaultsReachFourDays)
{
    const MorletWavelet w;
    const auto g = CwtGrid::defaults(600, w);
    EXPECT_EQ(g.s0, 1200.0);
    const auto s = scale_grid(g);
    EXPECT_GE(s.back() * w.fourier_factor(), 4.0 * 86400.0);
    EXPECT_LT(s[s.size() - 2] * w.fourier_factor(), 4.0 * 86400.0);
}

TEST(Cwt, ShapeAndZeroSeries)
{
    const std::vector<double> zero(200, 0.0);
    const auto r = cwt(zero, 600.0, {}, {1200.0, 0.25, 10});
    EXPECT_EQ(r.length, 200u);
    EXPECT_EQ(r.coefficients.size(), 200u * 10u);
    for (auto c : r.coefficients)
        EXPECT_EQ(c, cplx{});
    for (double c : r.coi)
        EXPECT_GE(c, 0.0);
    EXPECT_ERRC(cwt(std::vector<double>{1, 2, 3}, 600.0), Errc::SeriesTooShort);
}

TEST(Cwt, MatchesDirectSummation)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto x = white_noise(300, seed);
        const MorletWavelet w;
        const auto r = cwt(x, 600.0, w, CwtGrid::defaults(600, w));
        const auto ref = oracle::direct_cwt(x, 600.0, w.omega0, r.scales);
        EXPECT_LT(oracle::max_relative_error_outside_coi(r, ref, 600.0), 1e-6);
    }
}

TEST(Cwt, LinearityOnDemeanedInputs)
{
    auto x = white_noise(256, 10);
    auto y = white_noise(256, 11);
    for (auto* v : {&x, &y}) {
        const double mu = oracle::mean(*v);
        for (auto& e : *v)
            e -= mu;
    }
    const double a = 2.5, b = -0.75;
    std::vector<double> z(256);
    for (std::size_t t = 0; t < 256; ++t)
        z[t] = a * x[t] + b * y[t];
    const CwtGrid g{1200.0, 0.25, 24};
    const auto wx = cwt(x, 600.0, {}, g), wy = cwt(y, 600.0, {}, g), wz = cwt(z, 600.0, {}, g);
    double scale = 0.0, err = 0.0;
    for (std::size_t k = 0; k < wz.coefficients.size(); ++k) {
        scale = std::max(scale, std::abs(wz.coefficients[k]));
        err = std::max(err, std::abs(wz.coefficients[k] - (a * wx.coefficients[k] + b * wy.coefficients[k])));
    }
    EXPECT_LT(err / scale, 1e-9);

    // A power-of-two gain is exact in floating point.
    std::vector<double> x4(x);
    for (auto& e : x4)
        e *= 4.0;
    const auto w4 = cwt(x4, 600.0, {}, g);
    for (std::size_t k = 0; k < w4.coefficients.size(); ++k)
        ASSERT_EQ(w4.coefficients[k], 4.0 * wx.coefficients[k]);
}

TEST(Cwt, CosinePeakNearItsPeriod)
{
    const auto x = cosine_series(1024, 64.0, 0.0, 1.0, 1);
    const MorletWavelet w;
    const CwtGrid g{2.0, 0.125, 56};
    const auto r = cwt(x, w, g);
    const auto ref = oracle::direct_cwt(x.values(), 1.0, w.omega0, r.scales);

    std::vector<double> avg(r.num_scales()), ref_avg(r.num_scales());
    for (std::size_t j = 0; j < r.num_scales(); ++j) {
        for (std::size_t t = 0; t < r.length; ++t) {
            avg[j] += std::norm(r.at(t, j));
            ref_avg[j] += std::norm(ref[j][t]);
        }
    }
    const auto jmax = argmax(avg);
    EXPECT_EQ(jmax, argmax(ref_avg));
    EXPECT_NEAR(r.scales[jmax] * w.fourier_factor(), 64.0, 0.05 * 64.0);

    const auto global = global_spectrum(power_spectrum(r), true);
    std::vector<double> ref_global(r.num_scales());
    for (std::size_t j = 0; j < r.num_scales(); ++j) {
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t t = 0; t < r.length; ++t)
            if (!r.in_coi(t, j)) {
                acc += std::norm(ref[j][t]) / r.scales[j];
                ++count;
            }
        ref_global[j] = acc / static_cast<double>(count);
    }
    EXPECT_EQ(argmax(global), argmax(ref_global));
}

TEST(PowerSpectrum, Formula)
{
    CwtResult r;
    r.length = 1;
    r.scales = {5.0};
    r.coefficients = {cplx(3.0, 4.0)};
    r.coi = {0.0};
    const auto p = power_spectrum(r);
    EXPECT_DOUBLE_EQ(p.power[0], 5.0);

    EXPECT_NEAR(MorletWavelet{}.fourier_factor(), 1.0330, 5e-5);
    EXPECT_DOUBLE_EQ(MorletWavelet{}.fourier_factor(), 4.0 * std::numbers::pi / (6.0 + std::sqrt(38.0)));
}

TEST(PowerSpectrum, PositiveAndExactRelation)
{
    const auto x = white_noise(400, 4);
    const auto r = cwt(x, 600.0, {}, {1200.0, 0.25, 20});
    const auto p = power_spectrum(r);
    for (std::size_t j = 0; j < p.num_scales(); ++j) {
        if (j > 0) {
            EXPECT_GT(p.periods[j], p.periods[j - 1]);
        }
        for (std::size_t t = 0; t < p.length; ++t) {
            EXPECT_GE(p.at(t, j), 0.0);
            EXPECT_EQ(p.at(t, j), std::norm(r.at(t, j)) / r.scales[j]);
        }
    }
    const auto zero = power_spectrum(cwt(std::vector<double>(64, 2.0), 600.0, {}, {1200.0, 0.5, 4}));
    for (double v : zero.power)
        EXPECT_EQ(v, 0.0);
}

TEST(GlobalSpectrum, ConstantPowerAndMasking)
{
    PowerSpectrum p;
    p.length = 10;
    p.scales = {600.0, 1200.0, 1.0e6};
    p.periods = p.scales;
    p.power.assign(30, 2.5);
    p.coi = detail::cone_of_influence(10, 600.0);
    const auto g = global_spectrum(p, false);
    for (double v : g)
        EXPECT_DOUBLE_EQ(v, 2.5);
    EXPECT_ERRC(global_spectrum(p, true), Errc::AllMasked);
}

TEST(FindPeak, Rules)
{
    EXPECT_EQ(find_peak(std::vector<double>{1, 1, 5, 1, 1}), 2u);
    EXPECT_FALSE(find_peak(std::vector<double>{1, 1, 1.5, 1, 1}).has_value());
    EXPECT_FALSE(find_peak(std::vector<double>{9, 1, 1, 1, 1}).has_value());
    EXPECT_FALSE(find_peak(std::vector<double>{1, 1, 1, 1, 9}).has_value());
    EXPECT_FALSE(find_peak(std::vector<double>{0, 0, 0, 0}).has_value());
}

TEST(DominantPeriod, DiurnalSignal)
{
    const auto x = cosine_series(30 * 144, 144.0, 5.0, 2.0);
    EXPECT_NEAR(static_cast<double>(dominant_period(x)), 144.0, 7.0);
}

TEST(DominantPeriod, SyntheticCorpus)
{
    for (std::size_t days : {30u, 60u, 120u}) {
        SynthParams sp;
        sp.days = days;
        EXPECT_NEAR(static_cast<double>(dominant_period(synth_diurnal(sp))), 144.0, 7.0) << days << " days";
    }
}

TEST(DominantPeriod, WhiteNoiseHasNone)
{
    const TimeSeries x(white_noise(30 * 144, 77));
    EXPECT_ERRC(dominant_period(x), Errc::NoDominantPeriod);
    EXPECT_ERRC(dominant_period(TimeSeries(std::vector<double>(30 * 144, 0.0))), Errc::NoDominantPeriod);
}

TEST(DominantPeriod, ShortPeriodCosine)
{
    const auto x = cosine_series(30 * 144, 12.0);
    EXPECT_NEAR(static_cast<double>(dominant_period(x)), 12.0, 1.0);
}

TEST(DominantPeriod, AffineInvariance)
{
    SynthParams sp;
    sp.days = 40;
    sp.seed = 9;
    const auto x = synth_diurnal(sp);
    const MorletWavelet w;
    const auto g = CwtGrid::defaults(600, w);
    const auto base = estimate_period(x.values(), 600.0, w, g);
    for (auto [a, b] : {std::pair{3.0, 10.0}, std::pair{-0.5, 2.0}, std::pair{1e-3, -7.0}}) {
        std::vector<double> y(x.values().begin(), x.values().end());
        for (auto& v : y)
            v = a * v + b;
        const auto est = estimate_period(y, 600.0, w, g);
        EXPECT_EQ(est.scale_index, base.scale_index);
        EXPECT_EQ(est.samples, base.samples);
    }
}

TEST(DominantPeriod, GlobalPrefactorCannotMovePeak)
{
    SynthParams sp;
    sp.days = 40;
    const auto x = synth_diurnal(sp);
    MorletWavelet w;
    const auto g = CwtGrid::defaults(600, w);
    const auto base = dominant_period(x, w, g);
    for (double c : {0.01, 0.3989, 7.0, 1e4}) {
        w.normalization = c;
        EXPECT_EQ(dominant_period(x, w, g), base);
    }
}

TEST(DominantPeriod, TooShort)
{
    EXPECT_ERRC(dominant_period(TimeSeries(std::vector<double>{1, 2, 3})), Errc::SeriesTooShort);
    EXPECT_ERRC(dominant_period(TimeSeries(white_noise(6, 1))), Errc::SeriesTooShort);
}
