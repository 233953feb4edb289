#pragma once

#include "windpart/error.hpp"
#include "windpart/forecast.hpp"
#include "windpart/io/calendar.hpp"
#include "windpart/io/report.hpp"
#include "windpart/wavelet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

// SVG output is assembled with fixed-precision printf formatting only, so
// identical inputs always give identical bytes.

namespace windpart::io {

namespace svg {

inline std::string num(double v)
{
    if (std::abs(v) < 0.005)
        v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string method_color(Method m)
{
    switch (m) {
    case Method::partitioned_ar: return "#d62728";
    case Method::simple_ar: return "#1f77b4";
    case Method::persistence: return "#7f7f7f";
    }
    return "#000000";
}

/// Piecewise-linear approximation of the viridis colour map, t in [0, 1].
inline std::string viridis(double t)
{
    static constexpr std::array<std::array<double, 3>, 5> anchors{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const auto i = std::min<std::size_t>(3, static_cast<std::size_t>(t));
    const double f = t - static_cast<double>(i);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(std::lround(anchors[i][0] + f * (anchors[i + 1][0] - anchors[i][0]))),
                  static_cast<int>(std::lround(anchors[i][1] + f * (anchors[i + 1][1] - anchors[i][1]))),
                  static_cast<int>(std::lround(anchors[i][2] + f * (anchors[i + 1][2] - anchors[i][2]))));
    return buf;
}

inline double nice_ceiling(double v)
{
    if (!(v > 0.0))
        return 1.0;
    const double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (double step : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (step * mag >= v)
            return step * mag;
    return 10.0 * mag;
}

inline std::string header(int width, int height)
{
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n<rect x=\"0\" y=\"0\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" fill=\"#ffffff\"/>\n";
}

struct Line {
    std::string label;
    std::string color;
    std::vector<double> values;
    bool dashed = false;
};

struct ChartSpec {
    std::string title;
    std::string y_label;
    std::vector<std::pair<std::size_t, std::string>> x_ticks;  ///< (point index, label)
};

/// Line chart with one polyline per series and a legend built from
/// rect/text elements.
inline std::string line_chart(const ChartSpec& spec, const std::vector<Line>& lines)
{
    constexpr double left = 60, top = 40, width = 560, height = 320;
    const std::size_t n = lines.front().values.size();
    double vmax = 0.0;
    for (const auto& l : lines)
        for (double v : l.values)
            vmax = std::max(vmax, v);
    const double ymax = nice_ceiling(vmax);
    auto xpos = [&](std::size_t k) { return left + width * (n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.5); };
    auto ypos = [&](double v) { return top + height * (1.0 - std::clamp(v, 0.0, ymax) / ymax); };

    std::ostringstream o;
    o << header(800, 420);
    o << "<text x=\"" << num(left + width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(spec.title) << "</text>\n";
    o << "<g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n";
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + height) << "\" x2=\"" << num(left + width) << "\" y2=\""
      << num(top + height) << "\"/>\n";
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\"" << num(top + height)
      << "\"/>\n</g>\n";

    o << "<g class=\"y-ticks\" text-anchor=\"end\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = ymax * i / 5.0;
        const double y = ypos(v);
        o << "<line x1=\"" << num(left - 4) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left) << "\" y2=\"" << num(y)
          << "\" stroke=\"#000000\"/><text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4) << "\">" << num(v)
          << "</text>\n";
    }
    o << "</g>\n<g class=\"x-ticks\" text-anchor=\"middle\">\n";
    for (const auto& [k, label] : spec.x_ticks) {
        const double x = xpos(k);
        o << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + height) << "\" x2=\"" << num(x) << "\" y2=\""
          << num(top + height + 4) << "\" stroke=\"#000000\"/><text x=\"" << num(x) << "\" y=\"" << num(top + height + 16)
          << "\">" << escape(label) << "</text>\n";
    }
    o << "</g>\n";
    o << "<text transform=\"translate(16," << num(top + height / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(spec.y_label) << "</text>\n";

    for (const auto& l : lines) {
        o << "<polyline class=\"series\" data-label=\"" << escape(l.label) << "\" fill=\"none\" stroke=\"" << l.color
          << "\" stroke-width=\"1.5\"" << (l.dashed ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
        for (std::size_t k = 0; k < l.values.size(); ++k)
            o << (k ? " " : "") << num(xpos(k)) << ',' << num(ypos(l.values[k]));
        o << "\"/>\n";
    }

    o << "<g class=\"legend\">\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const double y = top + 10 + 20.0 * static_cast<double>(i);
        o << "<rect x=\"640.00\" y=\"" << num(y - 6) << "\" width=\"18.00\" height=\"3.00\" fill=\"" << lines[i].color
          << "\"/><text x=\"664.00\" y=\"" << num(y) << "\">" << escape(lines[i].label) << "</text>\n";
    }
    o << "</g>\n</svg>\n";
    return o.str();
}

inline void write(const std::filesystem::path& path, const std::string& content)
{
    write_file(path, [&](std::ostream& out) { out << content; });
}

inline std::string hhmm(std::int64_t seconds)
{
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d:%02d", static_cast<int>(seconds / 3600 % 24), static_cast<int>(seconds / 60 % 60));
    return buf;
}

} // namespace svg

/// Day-ahead comparison chart: observed day (when given) plus one line per
/// method over the time of day.
inline std::string render_forecast_svg(std::span<const double> actual, const std::map<Method, DayForecast>& forecasts,
                                       std::int64_t dt = 600, std::optional<std::int64_t> day_origin = std::nullopt)
{
    if (forecasts.empty())
        throw Error(Errc::EmptyList, "nothing to plot");
    const std::size_t p = forecasts.begin()->second.values.size();
    if (p < 2)
        throw Error(Errc::InvalidPeriod, "a day needs at least two slots");
    if (!actual.empty() && actual.size() != p)
        throw Error(Errc::LengthMismatch, "actual has " + std::to_string(actual.size()) + " slots, forecasts have " +
                                              std::to_string(p));
    std::vector<svg::Line> lines;
    if (!actual.empty())
        lines.push_back({"actual", "#000000", {actual.begin(), actual.end()}});
    for (const auto& [m, f] : forecasts) {
        if (f.values.size() != p)
            throw Error(Errc::LengthMismatch, "forecasts differ in length");
        lines.push_back({std::string(to_string(m)), svg::method_color(m), f.values, m == Method::persistence});
    }
    svg::ChartSpec spec;
    spec.title = day_origin ? "Day-ahead forecast " + format_date(*day_origin) : "Day-ahead forecast";
    spec.y_label = "wind speed (m/s)";
    const std::size_t step = std::max<std::size_t>(1, p / 8);
    for (std::size_t k = 0; k + step / 2 < p - 1; k += step)
        spec.x_ticks.emplace_back(k, svg::hhmm(static_cast<std::int64_t>(k) * dt));
    spec.x_ticks.emplace_back(p - 1, svg::hhmm(static_cast<std::int64_t>(p - 1) * dt));
    return svg::line_chart(spec, lines);
}

inline void emit_forecast_plot(std::span<const double> actual, const std::map<Method, DayForecast>& forecasts,
                               const std::filesystem::path& out_path, std::int64_t dt = 600,
                               std::optional<std::int64_t> day_origin = std::nullopt)
{
    svg::write(out_path, render_forecast_svg(actual, forecasts, dt, day_origin));
}

/// Averaged hourly RMSE per method.
inline std::string render_rmse_svg(const EvalReport& r)
{
    if (r.per_method.empty())
        throw Error(Errc::EmptyList, "report has no methods");
    std::vector<svg::Line> lines;
    for (const auto& [m, score] : r.per_method)
        lines.push_back({std::string(to_string(m)), svg::method_color(m), score.per_hour_rmse, m == Method::persistence});
    svg::ChartSpec spec;
    spec.title = "Hourly RMSE averaged over " + std::to_string(r.days_evaluated.size()) + " day(s)";
    spec.y_label = "RMSE (m/s)";
    const std::size_t hours = lines.front().values.size();
    for (std::size_t h = 0; h < hours; h += std::max<std::size_t>(1, hours / 8))
        spec.x_ticks.emplace_back(h, std::to_string(h + 1));
    if (spec.x_ticks.back().first != hours - 1)
        spec.x_ticks.emplace_back(hours - 1, std::to_string(hours));
    return svg::line_chart(spec, lines);
}

inline void emit_rmse_plot(const EvalReport& r, const std::filesystem::path& out_path)
{
    svg::write(out_path, render_rmse_svg(r));
}

/// Time-period scalogram (log2 period axis growing downward) with the cone
/// of influence shaded, and a side panel with the COI-masked global
/// spectrum and its detected peak.
inline std::string render_spectrum_svg(const PowerSpectrum& p, double threshold = 2.0)
{
    if (p.length == 0 || p.num_scales() == 0)
        throw Error(Errc::EmptyInput, "empty power spectrum");
    constexpr double left = 70, top = 40, width = 560, height = 380;
    constexpr double side_left = 670, side_width = 190;
    const std::size_t nj = p.num_scales();
    const std::size_t nb = std::min<std::size_t>(p.length, 200);
    const double row_h = height / static_cast<double>(nj);
    const double col_w = width / static_cast<double>(nb);

    std::vector<double> cell(nb * nj);
    double vmax = 0.0;
    for (std::size_t j = 0; j < nj; ++j) {
        const auto row = p.scale_row(j);
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t lo = b * p.length / nb, hi = (b + 1) * p.length / nb;
            double acc = 0.0;
            for (std::size_t t = lo; t < hi; ++t)
                acc += row[t];
            cell[j * nb + b] = acc / static_cast<double>(hi - lo);
            vmax = std::max(vmax, cell[j * nb + b]);
        }
    }
    auto shade = [&](double v) {
        if (!(vmax > 0.0) || !(v > 0.0))
            return 0.0;
        constexpr double decades = 4.0;
        return (std::log10(v) - std::log10(vmax) + decades) / decades;
    };

    // Fractional row index of a scale in seconds (rows are log-spaced).
    const double s0 = p.scales.front();
    const double dj = nj > 1 ? std::log2(p.scales[1] / s0) : 1.0;
    auto row_y = [&](double jf) { return std::clamp(top + row_h * (jf + 0.5), top, top + height); };

    std::ostringstream o;
    o << svg::header(900, 480);
    o << "<text x=\"" << svg::num(left + width / 2)
      << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">Wavelet power spectrum</text>\n";
    o << "<g class=\"heatmap\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t j = 0; j < nj; ++j)
        for (std::size_t b = 0; b < nb; ++b)
            o << "<rect x=\"" << svg::num(left + col_w * static_cast<double>(b)) << "\" y=\""
              << svg::num(top + row_h * static_cast<double>(j)) << "\" width=\"" << svg::num(col_w + 0.01) << "\" height=\""
              << svg::num(row_h + 0.01) << "\" fill=\"" << svg::viridis(shade(cell[j * nb + b])) << "\"/>\n";
    o << "</g>\n";

    o << "<polygon class=\"coi\" fill=\"#ffffff\" fill-opacity=\"0.55\" stroke=\"#ffffff\" points=\"";
    for (std::size_t b = 0; b < nb; ++b) {
        const double c = p.coi[(2 * b + 1) * p.length / (2 * nb)];
        const double jf = c > 0.0 ? std::log2(c / s0) / dj : -1.0;
        o << svg::num(left + col_w * (static_cast<double>(b) + 0.5)) << ',' << svg::num(row_y(jf)) << ' ';
    }
    o << svg::num(left + width) << ',' << svg::num(top + height) << ' ' << svg::num(left) << ',' << svg::num(top + height)
      << "\"/>\n";

    // Period ticks at powers of two, in samples.
    o << "<g class=\"period-ticks\" text-anchor=\"end\">\n";
    const double factor = p.periods.front() / s0;
    for (int k = 0; k < 40; ++k) {
        const double period_samples = std::exp2(k);
        const double jf = std::log2(period_samples * p.dt / factor / s0) / dj;
        if (jf < -0.5 || jf > static_cast<double>(nj) - 0.5)
            continue;
        const double y = row_y(jf);
        o << "<line x1=\"" << svg::num(left - 4) << "\" y1=\"" << svg::num(y) << "\" x2=\"" << svg::num(left)
          << "\" y2=\"" << svg::num(y) << "\" stroke=\"#000000\"/><text x=\"" << svg::num(left - 6) << "\" y=\""
          << svg::num(y + 4) << "\">" << static_cast<long long>(period_samples) << "</text>\n";
    }
    o << "</g>\n";
    o << "<text transform=\"translate(18," << svg::num(top + height / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">period (samples)</text>\n";
    o << "<text x=\"" << svg::num(left + width / 2) << "\" y=\"" << svg::num(top + height + 20)
      << "\" text-anchor=\"middle\">time (" << p.length << " samples)</text>\n";

    // Side panel: the global spectrum over scales that have any sample
    // outside the cone of influence.
    std::vector<double> global;
    for (std::size_t j = 0; j < nj; ++j) {
        const double g = windpart::detail::time_average(p.scale_row(j), p.coi, p.scales[j], true);
        if (std::isnan(g))
            break;
        global.push_back(g);
    }
    const double gmax = global.empty() ? 0.0 : *std::max_element(global.begin(), global.end());
    auto gx = [&](double g) { return side_left + (gmax > 0.0 ? side_width * g / gmax : 0.0); };
    o << "<g class=\"global-spectrum\">\n";
    o << "<rect x=\"" << svg::num(side_left) << "\" y=\"" << svg::num(top) << "\" width=\"" << svg::num(side_width)
      << "\" height=\"" << svg::num(height) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    o << "<text x=\"" << svg::num(side_left + side_width / 2) << "\" y=\"" << svg::num(top - 6)
      << "\" text-anchor=\"middle\">global spectrum</text>\n";
    if (!global.empty()) {
        o << "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < global.size(); ++j)
            o << (j ? " " : "") << svg::num(gx(global[j])) << ',' << svg::num(row_y(static_cast<double>(j)));
        o << "\"/>\n";
    }
    if (const auto peak = find_peak(global, threshold)) {
        const auto samples = std::llround(p.periods[*peak] / p.dt);
        o << "<circle class=\"peak\" data-scale-index=\"" << *peak << "\" data-period-samples=\"" << samples
          << "\" cx=\"" << svg::num(gx(global[*peak])) << "\" cy=\"" << svg::num(row_y(static_cast<double>(*peak)))
          << "\" r=\"4.00\" fill=\"#d62728\"/>\n";
        o << "<text x=\"" << svg::num(side_left + 6) << "\" y=\"" << svg::num(top + height + 20) << "\">peak: " << samples
          << " samples</text>\n";
    } else {
        o << "<text class=\"no-peak\" x=\"" << svg::num(side_left + 6) << "\" y=\"" << svg::num(top + height + 20)
          << "\">NoDominantPeriod</text>\n";
    }
    o << "</g>\n</svg>\n";
    return o.str();
}

inline void emit_spectrum_plot(const PowerSpectrum& p, const std::filesystem::path& out_path, double threshold = 2.0)
{
    svg::write(out_path, render_spectrum_svg(p, threshold));
}

} // namespace windpart::io
