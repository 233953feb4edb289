#pragma once

// Command-line front end. Kept in a header so the test suites can drive
// `windpart::cli::run` in-process.

#include "windpart/windpart.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace windpart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Raised for option values that parse but make no sense together.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // ingestion
    std::string input;
    std::string time_col = "0";
    std::string value_col = "1";
    std::string time_format = "epoch";
    std::string time_pattern;
    char delimiter = ',';
    int utc_offset = 0;
    bool no_header = false;
    std::int64_t dt = 600;
    std::string gap_policy = "interpolate";
    std::size_t max_gap = 6;

    // forecasting
    std::size_t period = 144;
    std::string order = "aic";
    std::size_t max_order = 20;
    std::size_t training_days = 0;
    std::size_t simple_window_days = 30;
    bool no_clamp = false;
    std::vector<std::string> methods = {"partitioned-ar", "simple-ar", "persistence"};

    // wavelet
    double omega0 = 6.0;
    double s0 = 0.0;
    double dj = 0.125;
    std::size_t num_scales = 0;
    double threshold = 2.0;

    // output
    std::string out_dir = ".";
    bool no_plots = false;

    // subcommands
    std::string date;
    std::string from;
    std::string to;
    std::vector<std::string> days;
    std::size_t synth_days = 120;
    std::optional<std::uint64_t> seed;
    std::string synth_out;
    std::string synth_start = "2004-01-01";
    double synth_mean = 6.0;
    double synth_amplitude = 2.0;
    double synth_alpha = 0.6;
    double synth_sigma = 0.5;
};

namespace detail {

inline io::ColumnRef column_ref(const std::string& s)
{
    std::size_t idx = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), idx);
    if (ec == std::errc{} && p == s.data() + s.size())
        return idx;
    return s;
}

inline io::IngestSchema schema(const Options& o)
{
    io::IngestSchema s;
    s.timestamp_column = column_ref(o.time_col);
    s.value_column = column_ref(o.value_col);
    s.delimiter = o.delimiter;
    s.utc_offset_minutes = o.utc_offset;
    s.has_header = !o.no_header;
    if (o.time_format == "epoch") {
        s.timestamp_format = io::TimestampFormat::epoch_seconds;
    } else if (o.time_format == "iso8601") {
        s.timestamp_format = io::TimestampFormat::iso8601;
    } else if (o.time_format == "pattern") {
        s.timestamp_format = io::TimestampFormat::custom;
        s.custom_pattern = o.time_pattern;
    } else {
        throw UsageError("--time-format must be epoch, iso8601 or pattern");
    }
    return s;
}

inline io::IngestOptions ingest_options(const Options& o)
{
    io::IngestOptions opt;
    opt.dt = o.dt;
    opt.gaps.max_run = o.max_gap;
    if (o.gap_policy == "interpolate")
        opt.gaps.policy = GapPolicy::linear_interpolate;
    else if (o.gap_policy == "drop-day")
        opt.gaps.policy = GapPolicy::drop_day;
    else
        throw UsageError("--gap-policy must be interpolate or drop-day");
    return opt;
}

inline ForecastConfig forecast_config(const Options& o)
{
    ForecastConfig c;
    c.period_len = o.period;
    if (o.order == "aic") {
        c.order_criterion = OrderCriterion::aic(o.max_order);
    } else if (o.order == "fpe") {
        c.order_criterion = OrderCriterion::fpe(o.max_order);
    } else {
        std::size_t p = 0;
        auto [ptr, ec] = std::from_chars(o.order.data(), o.order.data() + o.order.size(), p);
        if (ec != std::errc{} || ptr != o.order.data() + o.order.size())
            throw UsageError("--order must be aic, fpe or a non-negative integer");
        c.order_criterion = OrderCriterion::fixed(p);
    }
    if (o.training_days > 0)
        c.training_days = o.training_days;
    c.simple_ar_training_samples = o.simple_window_days * o.period;
    c.clamp_negative = !o.no_clamp;
    try {
        c.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return c;
}

inline std::vector<Method> methods(const Options& o)
{
    std::vector<Method> out;
    for (const auto& m : o.methods)
        out.push_back(parse_method(m));
    return out;
}

inline TimeSeries load(const Options& o)
{
    if (o.input.empty())
        throw UsageError("--input is required");
    return io::load_csv(o.input, schema(o), ingest_options(o));
}

inline std::filesystem::path out_path(const Options& o, const std::string& name)
{
    std::filesystem::create_directories(o.out_dir);
    return std::filesystem::path(o.out_dir) / name;
}

inline int detect_period(const Options& o, std::ostream& out, std::ostream& err)
{
    const TimeSeries x = load(o);
    MorletWavelet w;
    w.omega0 = o.omega0;
    CwtGrid g = CwtGrid::defaults(o.dt, w);
    if (o.s0 > 0.0)
        g.s0 = o.s0;
    g.dj = o.dj;
    if (o.num_scales > 0)
        g.num_scales = o.num_scales;
    else if (o.s0 > 0.0 || o.dj != 0.125)
        g.num_scales = static_cast<std::size_t>(std::ceil(std::log2(4.0 * 86400.0 / (w.fourier_factor() * g.s0)) / g.dj)) + 1;

    if (!o.no_plots) {
        const auto spectrum = power_spectrum(cwt(x, w, g));
        io::emit_spectrum_plot(spectrum, out_path(o, "spectrum.svg"), o.threshold);
    }
    const auto est = estimate_period(x.values(), static_cast<double>(x.dt()), w, g, o.threshold);
    err << "dominant period: " << est.samples << " samples (" << est.seconds / 3600.0 << " h)\n";
    out << est.samples << '\n';
    return kExitOk;
}

inline int forecast(const Options& o, std::ostream& out, std::ostream& err)
{
    const TimeSeries x = load(o);
    const ForecastConfig cfg = forecast_config(o);
    const auto ms = methods(o);
    const std::size_t p = cfg.period_len;

    std::int64_t day = 0;
    std::size_t cut = x.size();
    std::vector<double> actual;
    if (o.date.empty()) {
        day = x.time_at(x.size() - 1) + x.dt();
    } else {
        day = io::parse_date(o.date);
        if (const auto i0 = x.index_of(day)) {
            cut = *i0;
            if (cut + p <= x.size() && x.time_at(cut + p - 1) == day + static_cast<std::int64_t>(p - 1) * x.dt()) {
                auto v = x.values().subspan(cut, p);
                actual.assign(v.begin(), v.end());
            }
        } else if (x.time_at(x.size() - 1) + x.dt() != day) {
            throw Error(Errc::MissingHistory, "target day " + o.date + " is neither in the data nor right after it");
        }
    }
    if (cut == 0)
        throw Error(Errc::MissingHistory, "no history before " + io::format_date(day));
    const TimeSeries history = x.slice(0, cut);

    std::map<Method, DayForecast> forecasts;
    for (const Method m : ms) {
        DayForecast f = forecast_next_day(history, m, cfg);
        f.target_day_origin = day;
        forecasts.emplace(m, std::move(f));
    }
    std::optional<std::span<const double>> act;
    if (!actual.empty())
        act = std::span<const double>(actual);
    const auto csv_path = out_path(o, "forecast_" + io::format_date(day) + ".csv");
    io::write_file(csv_path, [&](std::ostream& os) { io::write_forecast_csv(os, day, x.dt(), forecasts, act); });
    if (!o.no_plots)
        io::emit_forecast_plot(actual, forecasts, out_path(o, "forecast_" + io::format_date(day) + ".svg"), x.dt(), day);
    err << "wrote " << csv_path.string() << '\n';
    out << csv_path.string() << '\n';
    return kExitOk;
}

inline std::vector<std::int64_t> target_days(const Options& o)
{
    std::vector<std::int64_t> days;
    for (const auto& d : o.days)
        days.push_back(io::parse_date(d));
    if (!o.from.empty() || !o.to.empty()) {
        if (o.from.empty() || o.to.empty())
            throw UsageError("--from and --to must be given together");
        const auto a = io::parse_date(o.from);
        const auto b = io::parse_date(o.to);
        if (b < a)
            throw UsageError("--to is before --from");
        for (auto d = a; d <= b; d += io::kSecondsPerDay)
            days.push_back(d);
    }
    if (days.empty())
        throw UsageError("backtest needs --days or --from/--to");
    return days;
}

inline int backtest(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto days = target_days(o);
    const auto ms = methods(o);
    const ForecastConfig cfg = forecast_config(o);
    const TimeSeries x = load(o);
    const EvalReport report = windpart::backtest(x, days, cfg, ms);

    io::write_file(out_path(o, "report.csv"), [&](std::ostream& os) { io::write_report_csv(os, report); });
    io::write_file(out_path(o, "report.json"), [&](std::ostream& os) { os << io::report_to_json(report).dump(2) << '\n'; });
    if (!o.no_plots) {
        io::emit_rmse_plot(report, out_path(o, "rmse.svg"));
        for (const auto& d : report.days)
            io::emit_forecast_plot(d.actual, d.forecasts, out_path(o, "forecast_" + io::format_date(d.day) + ".svg"),
                                   x.dt(), d.day);
    }
    for (const auto& [m, score] : report.per_method) {
        err << to_string(m) << ": overall RMSE " << io::sig6(score.overall_rmse) << " m/s\n";
        out << to_string(m) << ',' << io::sig6(score.overall_rmse) << '\n';
    }
    return kExitOk;
}

inline int synth(const Options& o, std::ostream& out, std::ostream& err)
{
    SynthParams sp;
    sp.days = o.synth_days;
    sp.period_len = o.period;
    sp.dt = o.dt;
    sp.start = io::parse_date(o.synth_start);
    sp.mean = o.synth_mean;
    sp.amplitude = o.synth_amplitude;
    sp.alpha = o.synth_alpha;
    sp.sigma = o.synth_sigma;
    sp.seed = *o.seed;
    const TimeSeries x = synth_diurnal(sp);
    const std::filesystem::path path = o.synth_out.empty() ? out_path(o, "synth.csv") : std::filesystem::path(o.synth_out);
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    io::save_series_csv(path, x);
    err << "wrote " << x.size() << " samples to " << path.string() << '\n';
    out << path.string() << '\n';
    return kExitOk;
}

} // namespace detail

inline void add_options(CLI::App& app, Options& o)
{
    app.set_config("--config", "", "key = value configuration file (flags override it)")->envname("WINDPART_CONFIG");

    app.add_option("-i,--input", o.input, "delimited wind-speed file")->group("Input");
    app.add_option("--time-col", o.time_col, "timestamp column (index or header name)")->capture_default_str()->group("Input");
    app.add_option("--value-col", o.value_col, "wind-speed column (index or header name)")->capture_default_str()->group("Input");
    app.add_option("--time-format", o.time_format, "epoch | iso8601 | pattern")->capture_default_str()->group("Input");
    app.add_option("--time-pattern", o.time_pattern, "std::get_time pattern when --time-format=pattern")->group("Input");
    app.add_option("--delimiter", o.delimiter, "field delimiter")->capture_default_str()->group("Input");
    app.add_option("--utc-offset", o.utc_offset, "minutes added to UTC timestamps")->capture_default_str()->group("Input");
    app.add_flag("--no-header", o.no_header, "input has no header row")->group("Input");
    app.add_option("--dt", o.dt, "sampling interval in seconds")->capture_default_str()->check(CLI::PositiveNumber)->group("Input");
    app.add_option("--gap-policy", o.gap_policy, "interpolate | drop-day")->capture_default_str()->group("Input");
    app.add_option("--max-gap", o.max_gap, "longest run of missing samples to interpolate")->capture_default_str()->group("Input");

    app.add_option("--period", o.period, "slots per day (partition width)")->capture_default_str()->group("Forecast");
    app.add_option("--order", o.order, "aic | fpe | fixed order N")->capture_default_str()->group("Forecast");
    app.add_option("--max-order", o.max_order, "cap for order selection")->capture_default_str()->group("Forecast");
    app.add_option("--training-days", o.training_days, "days of history per slot model (0 = all)")->capture_default_str()->group("Forecast");
    app.add_option("--simple-window-days", o.simple_window_days, "training window of the simple AR baseline")->capture_default_str()->group("Forecast");
    app.add_flag("--no-clamp", o.no_clamp, "keep negative forecasts")->group("Forecast");
    app.add_option("--methods", o.methods, "partitioned-ar, simple-ar, persistence")->delimiter(',')->group("Forecast");

    app.add_option("--omega0", o.omega0, "Morlet centre frequency")->capture_default_str()->group("Wavelet");
    app.add_option("--s0", o.s0, "smallest scale in seconds (default 2*dt)")->group("Wavelet");
    app.add_option("--dj", o.dj, "scale spacing in octaves")->capture_default_str()->group("Wavelet");
    app.add_option("--num-scales", o.num_scales, "number of scales (default: reach a 4-day period)")->group("Wavelet");
    app.add_option("--threshold", o.threshold, "peak must exceed this multiple of the median")->capture_default_str()->group("Wavelet");

    app.add_option("-o,--out-dir", o.out_dir, "directory for output files")->capture_default_str()->group("Output");
    app.add_flag("--no-plots", o.no_plots, "skip SVG output")->group("Output");
}

/// Runs the command line; returns 0 on success, 1 on usage errors and 2
/// on data errors. Machine-readable results go to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Day-ahead wind-speed forecasting with per-slot Burg AR models", "windpart"};
    app.fallthrough();
    app.require_subcommand(1);
    Options o;
    add_options(app, o);

    auto* detect = app.add_subcommand("detect-period", "print the dominant period (samples) of the input");
    auto* fc = app.add_subcommand("forecast", "forecast one day with every configured method");
    fc->add_option("--date", o.date, "target day YYYY-MM-DD (default: the day after the data)");
    auto* bt = app.add_subcommand("backtest", "score the methods on held-out days");
    bt->add_option("--days", o.days, "target days YYYY-MM-DD")->delimiter(',');
    bt->add_option("--from", o.from, "first target day YYYY-MM-DD");
    bt->add_option("--to", o.to, "last target day YYYY-MM-DD");
    auto* sy = app.add_subcommand("synth", "write a seeded synthetic diurnal corpus");
    sy->add_option("--days", o.synth_days, "number of days")->capture_default_str();
    sy->add_option("--seed", o.seed, "random seed")->required();
    sy->add_option("--out", o.synth_out, "output CSV (default <out-dir>/synth.csv)");
    sy->add_option("--start", o.synth_start, "first day YYYY-MM-DD")->capture_default_str();
    sy->add_option("--mean", o.synth_mean, "mean wind speed")->capture_default_str();
    sy->add_option("--amplitude", o.synth_amplitude, "diurnal amplitude")->capture_default_str();
    sy->add_option("--alpha", o.synth_alpha, "day-to-day AR(1) coefficient per slot")->capture_default_str();
    sy->add_option("--sigma", o.synth_sigma, "innovation standard deviation")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (detect->parsed())
            return detail::detect_period(o, out, err);
        if (fc->parsed())
            return detail::forecast(o, out, err);
        if (bt->parsed())
            return detail::backtest(o, out, err);
        if (sy->parsed())
            return detail::synth(o, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        const bool usage = e.code() == Errc::UnknownMethod || e.code() == Errc::InvalidArgument ||
                           e.code() == Errc::InvalidPeriod;
        return usage ? kExitUsage : kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

} // namespace windpart::cli
