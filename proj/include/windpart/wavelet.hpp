#pragma once

#include "windpart/error.hpp"
#include "windpart/fft.hpp"
#include "windpart/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace windpart {

using cplx = std::complex<double>;

/// Morlet mother wavelet psi(t) = pi^(-1/4) exp(i omega0 t) exp(-t^2 / 2).
///
/// `normalization` multiplies every coefficient. It stands in for the
/// 1/sqrt(c_psi) admissibility prefactor of the continuous transform, which
/// is a positive global constant and so cannot move any peak over scales;
/// it defaults to 1 and is not computed.
struct MorletWavelet {
    double omega0 = 6.0;
    double normalization = 1.0;
    bool allow_low_omega = false;  ///< permit omega0 < 5, where admissibility degrades

    void validate() const
    {
        if (!std::isfinite(omega0) || omega0 <= 0.0)
            throw Error(Errc::InvalidArgument, "omega0 must be positive");
        if (omega0 < 5.0 && !allow_low_omega)
            throw Error(Errc::InvalidArgument, "omega0 below 5 is not admissible without override");
        if (!(normalization > 0.0) || !std::isfinite(normalization))
            throw Error(Errc::InvalidArgument, "normalization must be a positive finite constant");
    }

    /// Equivalent Fourier period per unit scale, 4 pi / (omega0 + sqrt(2 + omega0^2)).
    [[nodiscard]] double fourier_factor() const noexcept
    {
        return 4.0 * std::numbers::pi / (omega0 + std::sqrt(2.0 + omega0 * omega0));
    }
};

inline cplx morlet_value(double t, const MorletWavelet& w = {})
{
    static const double norm = std::pow(std::numbers::pi, -0.25);
    return norm * std::exp(-0.5 * t * t) * std::polar(1.0, w.omega0 * t);
}

/// Scales s_j = s0 * 2^(j * dj), j = 0..num_scales-1, in seconds.
struct CwtGrid {
    double s0 = 1200.0;
    double dj = 0.125;
    std::size_t num_scales = 66;

    void validate() const
    {
        if (!(s0 > 0.0) || !std::isfinite(s0))
            throw Error(Errc::InvalidArgument, "s0 must be positive");
        if (!(dj > 0.0) || !std::isfinite(dj))
            throw Error(Errc::InvalidArgument, "dj must be positive");
        if (num_scales < 1)
            throw Error(Errc::InvalidArgument, "grid needs at least one scale");
    }

    /// s0 = 2 dt, dj = 1/8, and enough scales that the largest equivalent
    /// period reaches `min_top_period` seconds (four days by default).
    static CwtGrid defaults(std::int64_t dt, const MorletWavelet& w = {}, double min_top_period = 4.0 * 86400.0)
    {
        CwtGrid g;
        g.s0 = 2.0 * static_cast<double>(dt);
        g.dj = 0.125;
        const double octaves = std::log2(min_top_period / (w.fourier_factor() * g.s0));
        g.num_scales = octaves > 0.0 ? static_cast<std::size_t>(std::ceil(octaves / g.dj)) + 1 : 1;
        return g;
    }
};

inline std::vector<double> scale_grid(const CwtGrid& g)
{
    g.validate();
    std::vector<double> s(g.num_scales);
    for (std::size_t j = 0; j < g.num_scales; ++j)
        s[j] = g.s0 * std::exp2(static_cast<double>(j) * g.dj);
    return s;
}

/// Wavelet coefficients W(tau, s_j). Storage is scale-major; use `at`.
/// `coi[tau]` is the largest scale (seconds) whose e-folding window
/// sqrt(2) * s still fits between tau and the nearer end of the series.
struct CwtResult {
    std::size_t length = 0;
    std::vector<double> scales;
    std::vector<cplx> coefficients;
    std::vector<double> coi;
    double dt = 600.0;
    double omega0 = 6.0;

    [[nodiscard]] std::size_t num_scales() const noexcept { return scales.size(); }
    [[nodiscard]] cplx at(std::size_t tau, std::size_t j) const noexcept { return coefficients[j * length + tau]; }
    [[nodiscard]] std::span<const cplx> scale_row(std::size_t j) const noexcept
    {
        return std::span<const cplx>(coefficients).subspan(j * length, length);
    }
    [[nodiscard]] bool in_coi(std::size_t tau, std::size_t j) const noexcept { return scales[j] > coi[tau]; }
};

/// Power(tau, s) = |W(tau, s)|^2 / s, with per-scale equivalent Fourier periods.
struct PowerSpectrum {
    std::size_t length = 0;
    std::vector<double> scales;
    std::vector<double> periods;
    std::vector<double> power;
    std::vector<double> coi;
    double dt = 600.0;

    [[nodiscard]] std::size_t num_scales() const noexcept { return scales.size(); }
    [[nodiscard]] double at(std::size_t tau, std::size_t j) const noexcept { return power[j * length + tau]; }
    [[nodiscard]] std::span<const double> scale_row(std::size_t j) const noexcept
    {
        return std::span<const double>(power).subspan(j * length, length);
    }
    [[nodiscard]] bool in_coi(std::size_t tau, std::size_t j) const noexcept { return scales[j] > coi[tau]; }
};

namespace detail {

/// Gaussian envelope cutoff in dimensionless time; exp(-50) is far below
/// double resolution relative to the wavelet's peak.
inline constexpr double kSupportCutoff = 10.0;

inline std::vector<double> cone_of_influence(std::size_t n, double dt)
{
    std::vector<double> coi(n);
    for (std::size_t t = 0; t < n; ++t)
        coi[t] = dt * static_cast<double>(std::min(t, n - 1 - t)) / std::numbers::sqrt2;
    return coi;
}

/// Runs the transform scale by scale, handing each row of N coefficients to
/// `sink(j, row)`. The daughter wavelet is sampled in the time domain and
/// the series is padded far enough that the circular FFT product equals the
/// linear correlation sum over all samples.
inline void cwt_rows(std::span<const double> x, double dt, const MorletWavelet& w, std::span<const double> scales,
                     const std::function<void(std::size_t, std::span<const cplx>)>& sink)
{
    const std::size_t n = x.size();
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);

    std::size_t max_support = 0;
    for (double s : scales)
        max_support = std::max(max_support,
                               std::min(n - 1, static_cast<std::size_t>(std::ceil(kSupportCutoff * s / dt))));
    const std::size_t m = fft::next_pow2(n + max_support);

    std::vector<cplx> xf(m, cplx{});
    for (std::size_t t = 0; t < n; ++t)
        xf[t] = (x[t] - mean) * w.normalization;
    fft::transform(xf);

    std::vector<cplx> kernel(m);
    for (std::size_t j = 0; j < scales.size(); ++j) {
        const double a = scales[j] / dt;  // scale in samples
        const double amp = 1.0 / std::sqrt(a);
        const auto support = std::min(n - 1, static_cast<std::size_t>(std::ceil(kSupportCutoff * a)));

        // W_n = sum_m x_m g(m - n) with g(L) = conj(psi(L / a)) / sqrt(a);
        // as a convolution the kernel is r(L) = g(-L), stored circularly.
        std::fill(kernel.begin(), kernel.end(), cplx{});
        kernel[0] = amp * std::conj(morlet_value(0.0, w));
        for (std::size_t l = 1; l <= support; ++l) {
            const double u = static_cast<double>(l) / a;
            kernel[l] = amp * std::conj(morlet_value(-u, w));
            kernel[m - l] = amp * std::conj(morlet_value(u, w));
        }
        fft::transform(kernel);
        for (std::size_t k = 0; k < m; ++k)
            kernel[k] *= xf[k];
        fft::transform(kernel, true);
        sink(j, std::span<const cplx>(kernel).first(n));
    }
}

/// Time average of one scale's power row, skipping COI samples when asked.
/// NaN when every sample is masked.
inline double time_average(std::span<const double> row, std::span<const double> coi, double scale, bool mask)
{
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < row.size(); ++t) {
        if (mask && scale > coi[t])
            continue;
        acc += row[t];
        ++count;
    }
    return count ? acc / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

inline void check_series(std::span<const double> x)
{
    if (x.size() < 4)
        throw Error(Errc::SeriesTooShort, "wavelet transform needs at least 4 samples");
}

} // namespace detail

/// Morlet CWT of the demeaned series on grid `g`.
inline CwtResult cwt(std::span<const double> x, double dt, const MorletWavelet& w = {}, const CwtGrid& g = {})
{
    w.validate();
    detail::check_series(x);
    if (!(dt > 0.0))
        throw Error(Errc::InvalidArgument, "sampling interval must be positive");
    CwtResult r;
    r.length = x.size();
    r.scales = scale_grid(g);
    r.dt = dt;
    r.omega0 = w.omega0;
    r.coi = detail::cone_of_influence(x.size(), dt);
    r.coefficients.resize(r.length * r.scales.size());
    detail::cwt_rows(x, dt, w, r.scales, [&](std::size_t j, std::span<const cplx> row) {
        std::copy(row.begin(), row.end(), r.coefficients.begin() + static_cast<std::ptrdiff_t>(j * r.length));
    });
    return r;
}

inline CwtResult cwt(const TimeSeries& x, const MorletWavelet& w = {}, const CwtGrid& g = {})
{
    return cwt(x.values(), static_cast<double>(x.dt()), w, g);
}

inline PowerSpectrum power_spectrum(const CwtResult& r)
{
    PowerSpectrum p;
    p.length = r.length;
    p.scales = r.scales;
    p.coi = r.coi;
    p.dt = r.dt;
    const double factor = MorletWavelet{r.omega0, 1.0, true}.fourier_factor();
    p.periods.reserve(r.scales.size());
    for (double s : r.scales)
        p.periods.push_back(s * factor);
    p.power.resize(r.coefficients.size());
    for (std::size_t j = 0; j < r.scales.size(); ++j) {
        const double s = r.scales[j];
        for (std::size_t t = 0; t < r.length; ++t)
            p.power[j * r.length + t] = std::norm(r.coefficients[j * r.length + t]) / s;
    }
    return p;
}

/// Per-scale time-averaged power. With `mask_coi`, samples inside the cone
/// of influence are left out; a scale with nothing left raises AllMasked.
inline std::vector<double> global_spectrum(const PowerSpectrum& p, bool mask_coi)
{
    std::vector<double> g(p.num_scales());
    for (std::size_t j = 0; j < p.num_scales(); ++j) {
        g[j] = detail::time_average(p.scale_row(j), p.coi, p.scales[j], mask_coi);
        if (std::isnan(g[j]))
            throw Error(Errc::AllMasked, "every sample at scale " + std::to_string(j) +
                                             " lies inside the cone of influence");
    }
    return g;
}

/// Argmax of a global spectrum, accepted only if it exceeds `threshold`
/// times the spectrum's median and is not on the edge of the scale grid.
/// An edge maximum is the signature of a trend across scales (white noise
/// under |W|^2/s falls as 1/s), not of a periodicity.
inline std::optional<std::size_t> find_peak(std::span<const double> global, double threshold = 2.0)
{
    if (global.size() < 3)
        return std::nullopt;
    std::vector<double> sorted(global.begin(), global.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    const double median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);

    const auto best = static_cast<std::size_t>(std::max_element(global.begin(), global.end()) - global.begin());
    if (best == 0 || best + 1 == global.size() || !(global[best] > threshold * median))
        return std::nullopt;
    return best;
}

struct PeriodEstimate {
    std::int64_t samples = 0;
    double seconds = 0.0;
    std::size_t scale_index = 0;
    std::vector<double> global;  ///< COI-masked global spectrum over the scales used
    std::vector<double> periods;
};

/// Dominant period of `x`: the COI-masked global wavelet spectrum's peak,
/// restricted to scales with at least one sample outside the cone.
inline PeriodEstimate estimate_period(std::span<const double> x, double dt, const MorletWavelet& w, CwtGrid g,
                                      double threshold = 2.0)
{
    w.validate();
    detail::check_series(x);
    const auto coi = detail::cone_of_influence(x.size(), dt);
    const double max_coi = *std::max_element(coi.begin(), coi.end());
    auto scales = scale_grid(g);
    const auto usable = static_cast<std::size_t>(
        std::count_if(scales.begin(), scales.end(), [&](double s) { return s <= max_coi; }));
    if (usable < 3)
        throw Error(Errc::SeriesTooShort, "fewer than 3 scales lie outside the cone of influence");
    scales.resize(usable);

    PeriodEstimate est;
    est.global.resize(usable);
    std::vector<double> row(x.size());
    detail::cwt_rows(x, dt, w, scales, [&](std::size_t j, std::span<const cplx> coef) {
        for (std::size_t t = 0; t < coef.size(); ++t)
            row[t] = std::norm(coef[t]) / scales[j];
        est.global[j] = detail::time_average(row, coi, scales[j], true);
    });
    const double factor = w.fourier_factor();
    for (double s : scales)
        est.periods.push_back(s * factor);

    const auto peak = find_peak(est.global, threshold);
    if (!peak)
        throw Error(Errc::NoDominantPeriod, "global wavelet spectrum has no significant interior peak");
    est.scale_index = *peak;
    est.seconds = est.periods[*peak];
    est.samples = std::llround(est.seconds / dt);
    return est;
}

/// Dominant period in samples (see estimate_period).
inline std::int64_t dominant_period(const TimeSeries& x, const MorletWavelet& w, const CwtGrid& g,
                                    double threshold = 2.0)
{
    return estimate_period(x.values(), static_cast<double>(x.dt()), w, g, threshold).samples;
}

inline std::int64_t dominant_period(const TimeSeries& x)
{
    MorletWavelet w;
    return dominant_period(x, w, CwtGrid::defaults(x.dt(), w));
}

} // namespace windpart
