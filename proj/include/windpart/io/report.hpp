#pragma once

#include "windpart/error.hpp"
#include "windpart/forecast.hpp"
#include "windpart/io/calendar.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>

namespace windpart::io {

/// Six significant digits, as used in every report table.
inline std::string sig6(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// "slot,timestamp[,actual],<method>..." with one row per slot.
inline void write_forecast_csv(std::ostream& out, std::int64_t day_origin, std::int64_t dt,
                               const std::map<Method, DayForecast>& forecasts,
                               std::optional<std::span<const double>> actual = std::nullopt)
{
    if (forecasts.empty())
        throw Error(Errc::EmptyList, "no forecasts to write");
    const std::size_t p = forecasts.begin()->second.values.size();
    for (const auto& [m, f] : forecasts)
        if (f.values.size() != p)
            throw Error(Errc::LengthMismatch, "forecasts differ in length");
    if (actual && actual->size() != p)
        throw Error(Errc::LengthMismatch, "actual day differs in length from the forecasts");

    out << "slot,timestamp";
    if (actual)
        out << ",actual";
    for (const auto& [m, f] : forecasts)
        out << ',' << to_string(m);
    out << '\n';
    for (std::size_t k = 0; k < p; ++k) {
        out << k << ',' << format_iso8601(day_origin + static_cast<std::int64_t>(k) * dt);
        if (actual)
            out << ',' << sig6((*actual)[k]);
        for (const auto& [m, f] : forecasts)
            out << ',' << sig6(f.values[k]);
        out << '\n';
    }
}

/// "method,day,hour,rmse": one row per method, day and hour (1-based),
/// followed by rows with day "average" holding the across-day means.
inline void write_report_csv(std::ostream& out, const EvalReport& r)
{
    out << "method,day,hour,rmse\n";
    for (const auto& [m, score] : r.per_method) {
        for (std::size_t d = 0; d < r.days_evaluated.size(); ++d) {
            const auto day = format_date(r.days_evaluated[d]);
            for (std::size_t h = 0; h < score.per_day_hourly[d].size(); ++h)
                out << to_string(m) << ',' << day << ',' << h + 1 << ',' << sig6(score.per_day_hourly[d][h]) << '\n';
        }
        for (std::size_t h = 0; h < score.per_hour_rmse.size(); ++h)
            out << to_string(m) << ",average," << h + 1 << ',' << sig6(score.per_hour_rmse[h]) << '\n';
    }
}

inline nlohmann::json config_to_json(const ForecastConfig& c)
{
    nlohmann::json j;
    j["period_len"] = c.period_len;
    const char* kind = c.order_criterion.kind == OrderCriterion::Kind::fixed ? "fixed"
                       : c.order_criterion.kind == OrderCriterion::Kind::aic ? "aic"
                                                                              : "fpe";
    j["order_criterion"] = {{"kind", kind}, {"max_order", c.order_criterion.max_order}};
    if (c.order_criterion.kind == OrderCriterion::Kind::fixed)
        j["order_criterion"]["order"] = c.order_criterion.order;
    j["training_days"] = c.training_days ? nlohmann::json(*c.training_days) : nlohmann::json(nullptr);
    j["simple_ar_training_samples"] = c.simple_ar_training_samples;
    j["clamp_negative"] = c.clamp_negative;
    return j;
}

inline nlohmann::json report_to_json(const EvalReport& r)
{
    nlohmann::json j;
    j["config"] = config_to_json(r.config);
    j["samples_per_hour"] = r.samples_per_hour;
    j["days_evaluated"] = nlohmann::json::array();
    for (auto d : r.days_evaluated)
        j["days_evaluated"].push_back(format_date(d));
    j["methods"] = nlohmann::json::object();
    for (const auto& [m, score] : r.per_method) {
        auto& jm = j["methods"][std::string(to_string(m))];
        jm["per_hour_rmse"] = score.per_hour_rmse;
        jm["overall_rmse"] = score.overall_rmse;
        jm["per_day"] = nlohmann::json::array();
        for (std::size_t d = 0; d < r.days_evaluated.size(); ++d)
            jm["per_day"].push_back({{"day", format_date(r.days_evaluated[d])}, {"hourly_rmse", score.per_day_hourly[d]}});
    }
    for (const auto& day : r.days) {
        for (const auto& [m, f] : day.forecasts)
            if (f.per_slot_order) {
                j["per_slot_order"][format_date(day.day)] = *f.per_slot_order;
            }
    }
    return j;
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::WriteError, "cannot write '" + path.string() + "'");
    writer(out);
    if (!out.flush())
        throw Error(Errc::WriteError, "failed writing '" + path.string() + "'");
}

} // namespace windpart::io
