#pragma once

#include "windpart/ar_burg.hpp"
#include "windpart/error.hpp"
#include "windpart/timeseries.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace windpart {

enum class Method { partitioned_ar, simple_ar, persistence };

inline constexpr std::array<Method, 3> kAllMethods = {Method::partitioned_ar, Method::simple_ar, Method::persistence};

constexpr std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::partitioned_ar: return "partitioned-ar";
    case Method::simple_ar: return "simple-ar";
    case Method::persistence: return "persistence";
    }
    return "unknown";
}

inline Method parse_method(std::string_view name)
{
    for (Method m : kAllMethods)
        if (to_string(m) == name)
            return m;
    throw Error(Errc::UnknownMethod, "unknown forecast method '" + std::string(name) + "'");
}

struct DayForecast {
    std::vector<double> values;
    Method method = Method::partitioned_ar;
    std::int64_t target_day_origin = 0;
    std::optional<std::vector<std::size_t>> per_slot_order;
};

struct ForecastConfig {
    std::size_t period_len = 144;
    OrderCriterion order_criterion = OrderCriterion::aic(20);
    std::optional<std::size_t> training_days;  ///< per-column window; all rows when unset
    std::size_t simple_ar_training_samples = 30 * 144;
    bool clamp_negative = true;

    void validate() const
    {
        if (period_len < 2)
            throw Error(Errc::InvalidPeriod, "period_len must be at least 2");
        if (training_days && *training_days < 3)
            throw Error(Errc::InvalidArgument, "training_days must be at least 3");
        if (simple_ar_training_samples < period_len)
            throw Error(Errc::InvalidArgument, "simple-AR window must cover at least one period");
        order_criterion.validate();
    }
};

namespace detail {

inline void clamp_if(std::vector<double>& v, bool clamp)
{
    if (clamp)
        for (auto& x : v)
            x = std::max(x, 0.0);
}

/// Selects an order, fits Burg and returns the model for a series of any
/// admissible length.
inline ArModel fit_with_criterion(std::span<const double> series, const OrderCriterion& c)
{
    const auto eff = effective_criterion(c, series.size());
    const std::size_t p = select_order(series, eff);
    return fit_burg(series, p);
}

inline std::vector<double> reversed_tail(std::span<const double> s, std::size_t p)
{
    std::vector<double> h(p);
    for (std::size_t i = 0; i < p; ++i)
        h[i] = s[s.size() - 1 - i];
    return h;
}

} // namespace detail

/// Day-ahead forecast from a days x slots matrix: each column gets its own
/// Burg AR fit and a single one-step prediction.
inline DayForecast forecast_day_partitioned(const PartitionMatrix& m, const ForecastConfig& cfg)
{
    cfg.validate();
    if (m.rows() < 3)
        throw Error(Errc::NotEnoughDays, "partitioned forecast needs at least 3 days, got " +
                                             std::to_string(m.rows()));
    const std::size_t window = std::min(m.rows(), cfg.training_days.value_or(m.rows()));
    const std::size_t first = m.rows() - window;

    DayForecast out;
    out.method = Method::partitioned_ar;
    out.target_day_origin = m.origin() + static_cast<std::int64_t>(m.rows() * m.cols()) * m.dt();
    out.values.resize(m.cols());
    std::vector<std::size_t> orders(m.cols());
    std::vector<double> series(window);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < window; ++i)
            series[i] = m.at(first + i, j);
        const ArModel model = detail::fit_with_criterion(series, cfg.order_criterion);
        out.values[j] = predict_one(model, detail::reversed_tail(series, model.order()));
        orders[j] = model.order();
    }
    detail::clamp_if(out.values, cfg.clamp_negative);
    out.per_slot_order = std::move(orders);
    return out;
}

/// Baseline: one Burg AR fit to the trailing window of the raw series,
/// iterated P steps ahead.
inline DayForecast forecast_day_simple_ar(const TimeSeries& x, const ForecastConfig& cfg)
{
    cfg.validate();
    const std::size_t window = cfg.simple_ar_training_samples;
    if (x.size() < window)
        throw Error(Errc::SeriesTooShort, "simple AR needs " + std::to_string(window) + " samples, got " +
                                              std::to_string(x.size()));
    const auto series = x.values().last(window);
    const ArModel model = detail::fit_with_criterion(series, cfg.order_criterion);

    DayForecast out;
    out.method = Method::simple_ar;
    out.target_day_origin = x.time_at(x.size() - 1) + x.dt();
    out.values = predict_multi(model, detail::reversed_tail(series, model.order()), cfg.period_len);
    detail::clamp_if(out.values, cfg.clamp_negative);
    return out;
}

inline DayForecast forecast_persistence(const TimeSeries& x, std::size_t period_len)
{
    if (x.size() == 0)
        throw Error(Errc::EmptySeries, "persistence needs at least one observation");
    DayForecast out;
    out.method = Method::persistence;
    out.target_day_origin = x.time_at(x.size() - 1) + x.dt();
    out.values.assign(period_len, x.values().back());
    return out;
}

/// Forecast of the day that follows `history` by one method. The
/// partitioned method uses the trailing whole periods of `history`, so
/// rows end exactly where the target day begins.
inline DayForecast forecast_next_day(const TimeSeries& history, Method method, const ForecastConfig& cfg)
{
    const std::size_t p = cfg.period_len;
    DayForecast f;
    switch (method) {
    case Method::partitioned_ar: {
        const std::size_t rows = history.size() / p;
        if (rows < 3)
            throw Error(Errc::NotEnoughDays, "partitioned forecast needs at least 3 full days of history");
        f = forecast_day_partitioned(partition(history.slice(history.size() - rows * p, history.size()), p), cfg);
        break;
    }
    case Method::simple_ar: f = forecast_day_simple_ar(history, cfg); break;
    case Method::persistence: f = forecast_persistence(history, p); break;
    }
    f.target_day_origin = history.time_at(history.size() - 1) + history.dt();
    return f;
}

/// RMSE within each block of `samples_per_hour` consecutive slots.
inline std::vector<double> hourly_rmse(std::span<const double> pred, std::span<const double> actual,
                                       std::size_t samples_per_hour = 6)
{
    if (pred.size() != actual.size())
        throw Error(Errc::LengthMismatch, "forecast has " + std::to_string(pred.size()) +
                                              " slots, actual has " + std::to_string(actual.size()));
    if (samples_per_hour == 0 || pred.size() % samples_per_hour != 0)
        throw Error(Errc::NotDivisible, std::to_string(pred.size()) + " slots do not split into hours of " +
                                            std::to_string(samples_per_hour));
    for (double a : actual)
        if (!std::isfinite(a))
            throw Error(Errc::NonFiniteInput, "actual values must be finite");
    std::vector<double> out(pred.size() / samples_per_hour);
    for (std::size_t h = 0; h < out.size(); ++h) {
        double sse = 0.0;
        for (std::size_t k = h * samples_per_hour; k < (h + 1) * samples_per_hour; ++k)
            sse += (pred[k] - actual[k]) * (pred[k] - actual[k]);
        out[h] = std::sqrt(sse / static_cast<double>(samples_per_hour));
    }
    return out;
}

inline std::vector<double> hourly_rmse(const DayForecast& pred, std::span<const double> actual,
                                       std::size_t samples_per_hour = 6)
{
    return hourly_rmse(pred.values, actual, samples_per_hour);
}

/// Elementwise mean of per-day hourly RMSE vectors.
inline std::vector<double> averaged_rmse(std::span<const std::vector<double>> reports)
{
    if (reports.empty())
        throw Error(Errc::EmptyList, "no hourly RMSE vectors to average");
    std::vector<double> out(reports.front().size(), 0.0);
    for (const auto& r : reports) {
        if (r.size() != out.size())
            throw Error(Errc::LengthMismatch, "hourly RMSE vectors differ in length");
        for (std::size_t h = 0; h < r.size(); ++h)
            out[h] += r[h];
    }
    for (auto& v : out)
        v /= static_cast<double>(reports.size());
    return out;
}

// ---------------------------------------------------------------------------
// Backtesting

struct MethodScore {
    std::vector<double> per_hour_rmse;                ///< averaged across days
    double overall_rmse = 0.0;                        ///< pooled over every slot of every day
    std::vector<std::vector<double>> per_day_hourly;  ///< in days_evaluated order
};

struct DayResult {
    std::int64_t day = 0;
    std::vector<double> actual;
    std::map<Method, DayForecast> forecasts;
};

struct EvalReport {
    std::map<Method, MethodScore> per_method;
    std::vector<std::int64_t> days_evaluated;
    std::vector<DayResult> days;
    ForecastConfig config;
    std::size_t samples_per_hour = 6;
};

/// Runs each method once per target day (a timestamp of the day's first
/// slot), using only samples stamped strictly before that day, and scores
/// the forecasts hour by hour against the day's observations.
inline EvalReport backtest(const TimeSeries& x, std::span<const std::int64_t> target_days, const ForecastConfig& cfg,
                           std::span<const Method> methods)
{
    cfg.validate();
    if (target_days.empty())
        throw Error(Errc::EmptyList, "no target days given");
    if (methods.empty())
        throw Error(Errc::EmptyList, "no methods given");
    std::vector<Method> unique_methods(methods.begin(), methods.end());
    std::sort(unique_methods.begin(), unique_methods.end());
    unique_methods.erase(std::unique(unique_methods.begin(), unique_methods.end()), unique_methods.end());
    const std::size_t p = cfg.period_len;
    if (3600 % x.dt() != 0)
        throw Error(Errc::NotDivisible, "sampling interval does not divide an hour");
    const auto sph = static_cast<std::size_t>(3600 / x.dt());

    EvalReport report;
    report.config = cfg;
    report.samples_per_hour = sph;
    std::map<Method, std::pair<double, std::size_t>> pooled;

    for (const std::int64_t day : target_days) {
        const auto start = x.index_of(day);
        if (!start || *start == 0)
            throw Error(Errc::MissingHistory, "no history before target day starting at " + std::to_string(day));
        const std::size_t i0 = *start;
        if (i0 + p > x.size() || x.time_at(i0 + p - 1) != day + static_cast<std::int64_t>(p - 1) * x.dt())
            throw Error(Errc::MissingHistory, "target day starting at " + std::to_string(day) + " is incomplete");

        DayResult res;
        res.day = day;
        auto actual = x.values().subspan(i0, p);
        res.actual.assign(actual.begin(), actual.end());
        const TimeSeries history = x.slice(0, i0);

        for (const Method method : unique_methods) {
            if (method == Method::partitioned_ar && i0 / p < 3)
                throw Error(Errc::MissingHistory, "partitioned AR needs 3 full days before " + std::to_string(day));
            if (method == Method::simple_ar && i0 < cfg.simple_ar_training_samples)
                throw Error(Errc::MissingHistory, "simple AR window exceeds history before " + std::to_string(day));
            DayForecast f = forecast_next_day(history, method, cfg);
            f.target_day_origin = day;

            auto& score = report.per_method[method];
            score.per_day_hourly.push_back(hourly_rmse(f, res.actual, sph));
            auto& [sse, count] = pooled[method];
            for (std::size_t k = 0; k < p; ++k)
                sse += (f.values[k] - res.actual[k]) * (f.values[k] - res.actual[k]);
            count += p;
            res.forecasts.emplace(method, std::move(f));
        }
        report.days_evaluated.push_back(day);
        report.days.push_back(std::move(res));
    }

    for (auto& [method, score] : report.per_method) {
        score.per_hour_rmse = averaged_rmse(score.per_day_hourly);
        const auto [sse, count] = pooled[method];
        score.overall_rmse = std::sqrt(sse / static_cast<double>(count));
    }
    return report;
}

} // namespace windpart
