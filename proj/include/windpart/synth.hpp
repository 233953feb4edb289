#pragma once

#include "windpart/error.hpp"
#include "windpart/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace windpart {

/// Seeded normal generator with output fixed by the seed alone.
/// std::normal_distribution is implementation-defined, so the Gaussian
/// transform is done here on top of mt19937_64, whose sequence is specified.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1).
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Diurnal corpus: slot j of day i is
///   mean + amplitude * cos(2 pi j / P) + e_ij,
/// with e_.j an AR(1) process across days (coefficient `alpha`, innovation
/// s.d. `sigma`) that is independent between slots. Values are floored at 0.
struct SynthParams {
    std::size_t days = 120;
    std::size_t period_len = 144;
    std::int64_t dt = 600;
    std::int64_t start = 1072915200;  // 2004-01-01T00:00:00Z
    double mean = 6.0;
    double amplitude = 2.0;
    double alpha = 0.6;
    double sigma = 0.5;
    std::uint64_t seed = 42;
};

inline TimeSeries synth_diurnal(const SynthParams& sp)
{
    if (sp.days < 1 || sp.period_len < 2 || sp.dt <= 0)
        throw Error(Errc::InvalidArgument, "synthetic corpus needs days >= 1, period >= 2, dt > 0");
    if (!(std::abs(sp.alpha) < 1.0) || sp.sigma < 0.0)
        throw Error(Errc::InvalidArgument, "noise must be a stationary AR(1) with sigma >= 0");
    Rng rng(sp.seed);
    const std::size_t p = sp.period_len;
    std::vector<double> noise(p);
    const double stationary_sd = sp.sigma / std::sqrt(1.0 - sp.alpha * sp.alpha);
    for (auto& e : noise)
        e = stationary_sd * rng.normal();

    std::vector<double> values;
    values.reserve(sp.days * p);
    for (std::size_t i = 0; i < sp.days; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (i > 0)
                noise[j] = sp.alpha * noise[j] + sp.sigma * rng.normal();
            const double level =
                sp.mean + sp.amplitude * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(p));
            values.push_back(std::max(0.0, level + noise[j]));
        }
    }
    return TimeSeries(std::move(values), sp.dt, sp.start);
}

/// Gaussian white noise with standard deviation `sigma`.
inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sigma = 1.0)
{
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v)
        x = sigma * rng.normal();
    return v;
}

/// Draw of X_t = sum_i coefficients[i] X_{t-i} + sigma * z_t after a burn-in.
inline std::vector<double> simulate_ar(std::span<const double> coefficients, std::size_t n, std::uint64_t seed,
                                       double sigma = 1.0, std::size_t burn_in = 1000)
{
    Rng rng(seed);
    const std::size_t p = coefficients.size();
    std::vector<double> x(n + burn_in + p, 0.0);
    for (std::size_t t = p; t < x.size(); ++t) {
        double acc = sigma * rng.normal();
        for (std::size_t i = 0; i < p; ++i)
            acc += coefficients[i] * x[t - 1 - i];
        x[t] = acc;
    }
    return {x.end() - static_cast<std::ptrdiff_t>(n), x.end()};
}

} // namespace windpart
