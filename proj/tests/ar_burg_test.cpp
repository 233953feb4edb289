#include "oracles.hpp"
#include "test_support.hpp"

#include <cmath>
#include <limits>

using namespace windpart;

namespace {

ArModel make_model(std::vector<double> a, double mean = 0.0)
{
    ArModel m;
    m.coefficients = std::move(a);
    m.mean = mean;
    return m;
}

/// Random stable AR(p) coefficients via random reflection coefficients
/// pushed through the Levinson step-up recursion.
std::vector<double> random_stable(Rng& rng, std::size_t p, double kmax = 0.95)
{
    std::vector<double> a;
    for (std::size_t m = 0; m < p; ++m) {
        const double k = kmax * (2.0 * rng.uniform() - 1.0);
        std::vector<double> next(m + 1);
        for (std::size_t i = 0; i < m; ++i)
            next[i] = a[i] - k * a[m - 1 - i];
        next[m] = k;
        a = std::move(next);
    }
    return a;
}

} // namespace

TEST(FitBurg, AlternatingSeriesIsPerfectlyPredicted)
{
    const std::vector<double> x{1, -1, 1, -1, 1, -1, 1, -1};
    const auto m = fit_burg(x, 1);
    ASSERT_EQ(m.order(), 1u);
    EXPECT_EQ(m.mean, 0.0);
    EXPECT_DOUBLE_EQ(m.coefficients[0], -1.0);
    EXPECT_DOUBLE_EQ(m.reflection[0], -1.0);
    EXPECT_NEAR(m.noise_variance, 0.0, 1e-15);
}

TEST(FitBurg, ConstantInputIsDegenerate)
{
    const std::vector<double> x{5, 5, 5, 5};
    for (std::size_t p : {1u, 2u, 3u}) {
        const auto m = fit_burg(x, p);
        EXPECT_TRUE(m.degenerate());
        EXPECT_EQ(m.order(), 0u);
        EXPECT_EQ(m.mean, 5.0);
        EXPECT_EQ(m.noise_variance, 0.0);
        EXPECT_EQ(predict_multi(m, {}, 20), std::vector<double>(20, 5.0));
    }
}

TEST(FitBurg, Ar2AgreesWithTruthAndLeastSquares)
{
    const std::vector<double> truth{0.75, -0.5};
    const auto x = simulate_ar(truth, 10000, 2024);
    const auto m = fit_burg(x, 2);
    const auto ols = oracle::ols_ar(x, 2);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(m.coefficients[i], truth[i], 0.05);
        EXPECT_NEAR(m.coefficients[i], ols.coefficients[i], 0.01);
    }
    EXPECT_NEAR(m.noise_variance, 1.0, 0.05);
}

TEST(FitBurg, Errors)
{
    const std::vector<double> x{1, 2, 3};
    EXPECT_ERRC(fit_burg(x, 3), Errc::TooShort);
    const std::vector<double> bad{1, NAN, 3, 4};
    EXPECT_ERRC(fit_burg(bad, 1), Errc::NonFiniteInput);
}

TEST(FitBurg, ReflectionCoefficientsBoundedProperty)
{
    Rng rng(99);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto n = 4 + static_cast<std::size_t>(rng.uniform() * 60.0);
        const auto p = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - 1));
        std::vector<double> x(n);
        const int kind = trial % 4;
        for (std::size_t t = 0; t < n; ++t) {
            const double z = rng.normal();
            x[t] = kind == 0 ? z : kind == 1 ? std::round(z) : kind == 2 ? 1e6 * z : (t % 2 ? 1.0 : -1.0) + 1e-9 * z;
        }
        const auto m = fit_burg(x, p);
        for (double k : m.reflection)
            ASSERT_LE(std::abs(k), 1.0);
        EXPECT_TRUE(m.degenerate() || is_stable(m) ||
                    std::any_of(m.reflection.begin(), m.reflection.end(), [](double k) { return std::abs(k) == 1.0; }));
    }
}

TEST(FitBurg, NoiseVarianceNonIncreasingInOrder)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto x = simulate_ar(std::vector<double>{0.5, 0.2, -0.3}, 400, seed);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t p = 1; p <= 10; ++p) {
            const double s2 = fit_burg(x, p).noise_variance;
            EXPECT_LE(s2, prev * (1.0 + 1e-12));
            prev = s2;
        }
    }
}

TEST(FitBurg, ShiftInvariance)
{
    const auto x = simulate_ar(std::vector<double>{0.6, -0.2}, 2000, 17);
    std::vector<double> y(x);
    for (auto& v : y)
        v += 12.5;
    const auto a = fit_burg(x, 4);
    const auto b = fit_burg(y, 4);
    EXPECT_NEAR(b.mean, a.mean + 12.5, 1e-10);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_NEAR(a.coefficients[i], b.coefficients[i], 1e-10);
}

TEST(SelectOrder, FixedPassesThrough)
{
    const auto x = white_noise(200, 1);
    EXPECT_EQ(select_order(x, OrderCriterion::fixed(3)), 3u);
}

TEST(SelectOrder, Ar1PicksOrderOneByAic)
{
    const auto x = simulate_ar(std::vector<double>{0.9}, 5000, 1);
    // Brute-force table from the least-squares oracle.
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p <= 10; ++p) {
        const double score = aic(oracle::ols_ar(x, p).residual_variance, x.size(), p);
        if (score < best_score) {
            best_score = score;
            best = p;
        }
    }
    EXPECT_EQ(best, 1u);
    EXPECT_EQ(select_order(x, OrderCriterion::aic(10)), 1u);
}

TEST(SelectOrder, SingleFitMatchesSeparateFits)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = simulate_ar(std::vector<double>{0.5, -0.3, 0.2}, 600, seed);
        for (auto c : {OrderCriterion::aic(10), OrderCriterion::fpe(10)}) {
            std::size_t best = 0;
            double best_score = std::numeric_limits<double>::infinity();
            for (std::size_t p = 1; p <= 10; ++p) {
                const double s2 = fit_burg(x, p).noise_variance;
                const double score = c.kind == OrderCriterion::Kind::aic ? aic(s2, x.size(), p) : fpe(s2, x.size(), p);
                if (score < best_score) {
                    best_score = score;
                    best = p;
                }
            }
            EXPECT_EQ(select_order(x, c), best);
        }
    }
}

TEST(SelectOrder, WhiteNoiseHasNoMaterialPreference)
{
    const auto x = white_noise(5000, 7);
    const auto p = select_order(x, OrderCriterion::fpe(10));
    const double s1 = fit_burg(x, 1).noise_variance;
    const double sp = fit_burg(x, p).noise_variance;
    EXPECT_LT((s1 - sp) / s1, 0.02);
    EXPECT_LT((fpe(s1, x.size(), 1) - fpe(sp, x.size(), p)) / fpe(s1, x.size(), 1), 0.02);
}

TEST(SelectOrder, Errors)
{
    const std::vector<double> tiny{1, 2};
    EXPECT_ERRC(select_order(tiny, OrderCriterion::aic(1)), Errc::TooShort);
    const auto x = white_noise(20, 1);
    EXPECT_ERRC(select_order(x, OrderCriterion::aic(10)), Errc::TooShort);
    EXPECT_ERRC(select_order(x, OrderCriterion{OrderCriterion::Kind::fixed, 5, 2}), Errc::InvalidArgument);
}

TEST(SelectOrder, EffectiveCapIsThirdOfLength)
{
    const auto c = effective_criterion(OrderCriterion::aic(20), 30);
    EXPECT_EQ(c.max_order, 10u);
    EXPECT_EQ(effective_criterion(OrderCriterion::aic(20), 300).max_order, 20u);
    EXPECT_EQ(effective_criterion(OrderCriterion::aic(20), 4).max_order, 1u);
}

TEST(Predict, OneStepExamples)
{
    EXPECT_DOUBLE_EQ(predict_one(make_model({0.5}), std::vector<double>{2.0}), 1.0);
    EXPECT_DOUBLE_EQ(predict_one(make_model({}, 5.0), {}), 5.0);
    EXPECT_DOUBLE_EQ(predict_one(make_model({0.75, -0.5}), std::vector<double>{1.0, 2.0}), -0.25);
    EXPECT_ERRC(predict_one(make_model({0.75, -0.5}), std::vector<double>{1.0}), Errc::InsufficientHistory);
}

TEST(Predict, MultiStepExamples)
{
    const auto m = make_model({0.5});
    EXPECT_EQ(predict_multi(m, std::vector<double>{2.0}, 3), (std::vector<double>{1.0, 0.5, 0.25}));
    EXPECT_NEAR(predict_multi(m, std::vector<double>{2.0}, 50).back(), 0.0, 1e-10);
    EXPECT_EQ(predict_multi(make_model({}, 3.0), {}, 4), std::vector<double>(4, 3.0));
    EXPECT_ERRC(predict_multi(m, std::vector<double>{2.0}, 0), Errc::InvalidArgument);
}

TEST(Predict, MultiStepMatchesRepeatedOneStep)
{
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = 1 + static_cast<std::size_t>(rng.uniform() * 6.0);
        const auto m = make_model(random_stable(rng, p), rng.normal());
        std::vector<double> hist(p);
        for (auto& v : hist)
            v = rng.normal();
        const auto multi = predict_multi(m, hist, 20);
        for (double v : multi) {
            EXPECT_NEAR(predict_one(m, hist), v, 1e-12);
            hist.insert(hist.begin(), v);
        }
    }
}

TEST(Predict, MeanReversionProperty)
{
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const double u[3] = {rng.uniform(), rng.uniform(), rng.uniform()};
        const auto m = make_model(oracle::stable_from_roots(1 + trial % 2, u), 10.0 * rng.normal());
        ASSERT_LE(oracle::spectral_radius(m.coefficients), 0.95 + 1e-12);
        std::vector<double> hist{m.mean + 5.0 * rng.normal(), m.mean + 5.0 * rng.normal()};
        EXPECT_NEAR(predict_multi(m, hist, 1000).back(), m.mean, 1e-8);
    }
}

TEST(IsStable, Examples)
{
    EXPECT_TRUE(is_stable(make_model({0.99})));
    EXPECT_FALSE(is_stable(make_model({1.0})));
    EXPECT_TRUE(is_stable(make_model({0.5, 0.4})));
    EXPECT_TRUE(is_stable(make_model({})));
    // Inside the text's literal bounds but with a root outside the unit circle.
    EXPECT_FALSE(is_stable(make_model({-0.5, 0.6})));
    EXPECT_GT(oracle::spectral_radius(std::vector<double>{-0.5, 0.6}), 1.0);
}

TEST(IsStable, AgreesWithCompanionEigenvalues)
{
    Rng rng(21);
    for (int trial = 0; trial < 3000; ++trial) {
        const auto p = 1 + static_cast<std::size_t>(trial % 6);
        std::vector<double> a(p);
        for (auto& v : a)
            v = 2.4 * rng.uniform() - 1.2;
        const double r = oracle::spectral_radius(a);
        if (std::abs(r - 1.0) < 1e-9)
            continue;
        EXPECT_EQ(is_stable(make_model(a)), r < 1.0) << "p=" << p << " radius=" << r;
    }
}

TEST(StepDown, InvertsStepUp)
{
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> k(1 + trial % 8);
        std::vector<double> a;
        for (std::size_t m = 0; m < k.size(); ++m) {
            k[m] = 1.8 * rng.uniform() - 0.9;
            std::vector<double> next(m + 1);
            for (std::size_t i = 0; i < m; ++i)
                next[i] = a[i] - k[m] * a[m - 1 - i];
            next[m] = k[m];
            a = std::move(next);
        }
        bool ok = false;
        const auto back = step_down(a, &ok);
        EXPECT_TRUE(ok);
        for (std::size_t m = 0; m < k.size(); ++m)
            EXPECT_NEAR(back[m], k[m], 1e-9);
    }
}
