#pragma once

#include "windpart/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace windpart {

/// Fitted AR(p) model in the convention
///   X_t - mean = sum_i coefficients[i-1] * (X_{t-i} - mean) + e_t.
/// An empty coefficient vector is the degenerate model that always
/// predicts `mean`. `reflection` is empty for models built from raw
/// coefficients.
struct ArModel {
    std::vector<double> coefficients;
    double mean = 0.0;
    double noise_variance = 0.0;
    std::vector<double> reflection;

    [[nodiscard]] std::size_t order() const noexcept { return coefficients.size(); }
    [[nodiscard]] bool degenerate() const noexcept { return coefficients.empty(); }
};

struct OrderCriterion {
    enum class Kind { fixed, aic, fpe };

    Kind kind = Kind::aic;
    std::size_t order = 0;  ///< used by Kind::fixed
    std::size_t max_order = 20;

    static OrderCriterion fixed(std::size_t p) { return {Kind::fixed, p, std::max<std::size_t>(p, 1)}; }
    static OrderCriterion aic(std::size_t max_order = 20) { return {Kind::aic, 0, max_order}; }
    static OrderCriterion fpe(std::size_t max_order = 20) { return {Kind::fpe, 0, max_order}; }

    void validate() const
    {
        if (max_order < 1)
            throw Error(Errc::InvalidArgument, "max_order must be at least 1");
        if (kind == Kind::fixed && order > max_order)
            throw Error(Errc::InvalidArgument, "fixed order exceeds max_order");
    }
};

namespace detail {

/// Output of the order-recursive Burg estimator: coefficients of the
/// final stage plus the prediction-error power after every stage
/// (`error_power[0]` is the demeaned sample variance).
struct BurgStages {
    double mean = 0.0;
    bool constant = false;
    std::vector<double> coefficients;
    std::vector<double> reflection;
    std::vector<double> error_power;
};

inline void check_fit_input(std::span<const double> x, std::size_t p)
{
    if (x.size() <= p)
        throw Error(Errc::TooShort, "need more than " + std::to_string(p) + " samples, got " +
                                        std::to_string(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw Error(Errc::NonFiniteInput, "sample " + std::to_string(i) + " is not finite");
}

inline BurgStages burg_stages(std::span<const double> x, std::size_t p)
{
    check_fit_input(x, p);
    const std::size_t n = x.size();
    BurgStages out;

    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
        out.mean = x.front();
        out.constant = true;
        out.error_power.assign(p + 1, 0.0);
        return out;
    }

    out.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    std::vector<double> f(n);
    for (std::size_t t = 0; t < n; ++t)
        f[t] = x[t] - out.mean;
    std::vector<double> b = f;

    double power = 0.0;
    for (double v : f)
        power += v * v;
    power /= static_cast<double>(n);
    out.error_power.push_back(power);

    // a[i] holds alpha_{i+1} for the current stage (X_t = sum alpha_i X_{t-i} + e_t).
    std::vector<double> a;
    a.reserve(p);
    std::vector<double> prev;
    for (std::size_t m = 1; m <= p; ++m) {
        // Stage m pairs forward error f[t] with backward error b[t-1], t = m..n-1.
        double num = 0.0;
        double den = 0.0;
        for (std::size_t t = m; t < n; ++t) {
            num += f[t] * b[t - 1];
            den += f[t] * f[t] + b[t - 1] * b[t - 1];
        }
        double k = den > 0.0 ? 2.0 * num / den : 0.0;
        k = std::clamp(k, -1.0, 1.0);

        prev = a;
        a.push_back(k);
        for (std::size_t i = 0; i + 1 < m; ++i)
            a[i] = prev[i] - k * prev[m - 2 - i];

        // Walk downward so b[t-1] is still the previous stage's value.
        for (std::size_t t = n - 1; t >= m; --t) {
            const double ft = f[t];
            const double bt = b[t - 1];
            f[t] = ft - k * bt;
            b[t] = bt - k * ft;
        }
        power *= (1.0 - k) * (1.0 + k);
        out.reflection.push_back(k);
        out.error_power.push_back(power);
    }
    out.coefficients = std::move(a);
    return out;
}

} // namespace detail

/// Burg estimate of an AR(p) model on the demeaned series. A constant
/// input yields the degenerate order-0 model with zero noise variance.
inline ArModel fit_burg(std::span<const double> x, std::size_t p)
{
    auto st = detail::burg_stages(x, p);
    ArModel m;
    m.mean = st.mean;
    if (st.constant)
        return m;
    m.coefficients = std::move(st.coefficients);
    m.reflection = std::move(st.reflection);
    m.noise_variance = st.error_power.back();
    return m;
}

/// Information criteria on prediction-error power `sigma2` of an order-p
/// fit to n samples.
inline double aic(double sigma2, std::size_t n, std::size_t p)
{
    return static_cast<double>(n) * std::log(sigma2) + 2.0 * static_cast<double>(p);
}

inline double fpe(double sigma2, std::size_t n, std::size_t p)
{
    const auto nn = static_cast<double>(n);
    const auto pp = static_cast<double>(p);
    return sigma2 * (nn + pp + 1.0) / (nn - pp - 1.0);
}

/// Chooses p in 1..max_order by AIC or FPE (smaller p on ties). Burg is
/// order-recursive, so one fit at max_order yields every candidate's
/// error power.
inline std::size_t select_order(std::span<const double> x, const OrderCriterion& c)
{
    c.validate();
    if (x.size() < 3)
        throw Error(Errc::TooShort, "order selection needs at least 3 samples");
    if (c.kind == OrderCriterion::Kind::fixed)
        return c.order;
    if (2 * c.max_order >= x.size())
        throw Error(Errc::TooShort, "max_order " + std::to_string(c.max_order) + " must be below n/2 = " +
                                        std::to_string(x.size() / 2));

    const auto st = detail::burg_stages(x, c.max_order);
    const std::size_t n = x.size();
    std::size_t best = 1;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p <= c.max_order; ++p) {
        const double s2 = st.error_power[p];
        const double score = c.kind == OrderCriterion::Kind::aic ? aic(s2, n, p) : fpe(s2, n, p);
        if (score < best_score) {
            best_score = score;
            best = p;
        }
    }
    return best;
}

/// Default criterion for a series of length n: the configured criterion
/// with its cap lowered to floor(n/3) so short per-slot series stay well posed.
inline OrderCriterion effective_criterion(const OrderCriterion& c, std::size_t n)
{
    OrderCriterion out = c;
    const std::size_t cap = std::max<std::size_t>(1, n / 3);
    out.max_order = std::min(c.max_order, cap);
    if (out.kind == OrderCriterion::Kind::fixed) {
        out.order = std::min(out.order, n > 0 ? n - 1 : 0);
        out.max_order = std::max<std::size_t>(out.order, 1);
    }
    return out;
}

/// One-step prediction; `history` is most-recent-first.
inline double predict_one(const ArModel& m, std::span<const double> history)
{
    if (history.size() < m.order())
        throw Error(Errc::InsufficientHistory, "need " + std::to_string(m.order()) + " past values, got " +
                                                   std::to_string(history.size()));
    double acc = m.mean;
    for (std::size_t i = 0; i < m.order(); ++i)
        acc += m.coefficients[i] * (history[i] - m.mean);
    return acc;
}

/// Iterated h-step forecast, feeding each prediction back as the newest value.
inline std::vector<double> predict_multi(const ArModel& m, std::span<const double> history, std::size_t h)
{
    if (h < 1)
        throw Error(Errc::InvalidArgument, "horizon must be at least 1");
    if (history.size() < m.order())
        throw Error(Errc::InsufficientHistory, "need " + std::to_string(m.order()) + " past values, got " +
                                                   std::to_string(history.size()));
    const std::size_t p = m.order();
    // Ring buffer of the p most recent values, newest at `head`.
    std::vector<double> ring(history.begin(), history.begin() + static_cast<std::ptrdiff_t>(p));
    std::size_t head = 0;
    std::vector<double> out;
    out.reserve(h);
    for (std::size_t step = 0; step < h; ++step) {
        double acc = m.mean;
        for (std::size_t i = 0; i < p; ++i)
            acc += m.coefficients[i] * (ring[(head + i) % p] - m.mean);
        out.push_back(acc);
        if (p > 0) {
            head = (head + p - 1) % p;
            ring[head] = acc;
        }
    }
    return out;
}

/// Reflection coefficients recovered from AR coefficients by the step-down
/// (inverse Levinson) recursion. Returns nothing if a stage has |k| >= 1,
/// in which case the polynomial has a root on or outside the unit circle.
inline std::vector<double> step_down(std::span<const double> coefficients, bool* ok = nullptr)
{
    std::vector<double> a(coefficients.begin(), coefficients.end());
    std::vector<double> k(a.size());
    if (ok)
        *ok = true;
    for (std::size_t m = a.size(); m > 0; --m) {
        const double km = a[m - 1];
        k[m - 1] = km;
        if (!(std::abs(km) < 1.0)) {
            if (ok)
                *ok = false;
            return k;
        }
        const double denom = 1.0 - km * km;
        std::vector<double> lower(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i)
            lower[i] = (a[i] + km * a[m - 2 - i]) / denom;
        a = std::move(lower);
    }
    return k;
}

/// True iff the model is a stable (stationary) filter. Uses the reflection
/// coefficients when present, the closed-form triangle for p <= 2, and the
/// step-down root test otherwise.
inline bool is_stable(const ArModel& m)
{
    const auto& a = m.coefficients;
    for (double v : a)
        if (!std::isfinite(v))
            return false;
    if (!m.reflection.empty() && m.reflection.size() == a.size())
        return std::all_of(m.reflection.begin(), m.reflection.end(), [](double k) { return std::abs(k) < 1.0; });
    switch (a.size()) {
    case 0: return true;
    case 1: return std::abs(a[0]) < 1.0;
    case 2: return std::abs(a[1]) < 1.0 && a[0] + a[1] < 1.0 && a[1] - a[0] < 1.0;
    default: {
        bool ok = true;
        step_down(a, &ok);
        return ok;
    }
    }
}

} // namespace windpart
