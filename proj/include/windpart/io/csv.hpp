#pragma once

#include "windpart/error.hpp"
#include "windpart/io/calendar.hpp"
#include "windpart/log.hpp"
#include "windpart/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace windpart::io {

/// A column addressed by zero-based index or by header name.
using ColumnRef = std::variant<std::size_t, std::string>;

enum class TimestampFormat { epoch_seconds, iso8601, custom };

struct IngestSchema {
    ColumnRef timestamp_column = std::size_t{0};
    ColumnRef value_column = std::size_t{1};
    std::optional<ColumnRef> quality_column;  ///< "observed"/"interpolated" flags, as written by write_series_csv
    TimestampFormat timestamp_format = TimestampFormat::epoch_seconds;
    std::string custom_pattern;  ///< std::get_time pattern for TimestampFormat::custom
    char delimiter = ',';
    int utc_offset_minutes = 0;  ///< added to every parsed UTC timestamp
    bool has_header = true;

    void validate() const
    {
        if (timestamp_column == value_column || (quality_column && (*quality_column == timestamp_column ||
                                                                    *quality_column == value_column)))
            throw Error(Errc::InvalidArgument, "schema columns must be distinct");
        if (delimiter < 0x20 || delimiter == 0x7f || delimiter == '"')
            throw Error(Errc::InvalidArgument, "delimiter must be a printable character other than '\"'");
        if (timestamp_format == TimestampFormat::custom && custom_pattern.empty())
            throw Error(Errc::InvalidArgument, "custom timestamp format needs a pattern");
        if (!has_header && (std::holds_alternative<std::string>(timestamp_column) ||
                            std::holds_alternative<std::string>(value_column)))
            throw Error(Errc::InvalidArgument, "columns can only be named when the file has a header");
    }
};

struct IngestOptions {
    std::int64_t dt = 600;
    GapOptions gaps;
    bool align_to_midnight = true;  ///< drop rows before the first 00:00 sample
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delim)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == delim) {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

inline bool is_missing(std::string_view s)
{
    return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null" || s == "NULL";
}

inline std::size_t resolve(const ColumnRef& ref, const std::vector<std::string>& header)
{
    if (const auto* idx = std::get_if<std::size_t>(&ref))
        return *idx;
    const auto& name = std::get<std::string>(ref);
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw Error(Errc::ParseError, "row 1: column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
}

inline Error parse_error(std::size_t row, std::size_t col, const std::string& reason)
{
    return Error(Errc::ParseError, "row " + std::to_string(row) + ", column " + std::to_string(col + 1) + ": " + reason);
}

} // namespace detail

/// Raw rows of a delimited file: timestamp (shifted by the schema's UTC
/// offset) and value, with missing markers kept as empty optionals.
struct ParsedRows {
    std::vector<RawSample> samples;
    std::vector<std::size_t> line;  ///< 1-based file line of each sample
    std::vector<Quality> quality;
};

inline ParsedRows parse_rows(std::istream& in, const IngestSchema& schema)
{
    schema.validate();
    ParsedRows out;
    std::vector<std::string> header;
    std::string text;
    std::size_t line_no = 0;
    std::size_t ts_col = 0, val_col = 0;
    std::optional<std::size_t> q_col;
    bool resolved = false;

    auto resolve_columns = [&] {
        ts_col = detail::resolve(schema.timestamp_column, header);
        val_col = detail::resolve(schema.value_column, header);
        if (schema.quality_column)
            q_col = detail::resolve(*schema.quality_column, header);
        resolved = true;
    };

    while (std::getline(in, text)) {
        ++line_no;
        if (detail::trim(text).empty())
            continue;
        const auto fields = detail::split(text, schema.delimiter);
        if (schema.has_header && header.empty()) {
            for (auto f : fields)
                header.emplace_back(f);
            resolve_columns();
            continue;
        }
        if (!resolved)
            resolve_columns();

        const std::size_t need = std::max({ts_col, val_col, q_col.value_or(0)});
        if (fields.size() <= need)
            throw detail::parse_error(line_no, need, "row has only " + std::to_string(fields.size()) + " field(s)");

        const auto ts_field = fields[ts_col];
        std::int64_t ts = 0;
        try {
            switch (schema.timestamp_format) {
            case TimestampFormat::epoch_seconds: {
                double v = 0;
                auto [p, ec] = std::from_chars(ts_field.data(), ts_field.data() + ts_field.size(), v);
                if (ec != std::errc{} || p != ts_field.data() + ts_field.size() || !std::isfinite(v) ||
                    v != std::floor(v))
                    throw Error(Errc::ParseError, "not an integer epoch timestamp");
                ts = static_cast<std::int64_t>(v);
                break;
            }
            case TimestampFormat::iso8601: ts = parse_iso8601(ts_field); break;
            case TimestampFormat::custom: ts = parse_with_pattern(ts_field, schema.custom_pattern); break;
            }
        } catch (const Error& e) {
            throw detail::parse_error(line_no, ts_col, "bad timestamp '" + std::string(ts_field) + "' (" + e.what() + ")");
        }
        ts += static_cast<std::int64_t>(schema.utc_offset_minutes) * 60;

        RawSample s{ts, std::nullopt};
        const auto val_field = fields[val_col];
        if (!detail::is_missing(val_field)) {
            double v = 0;
            auto [p, ec] = std::from_chars(val_field.data(), val_field.data() + val_field.size(), v);
            if (ec != std::errc{} || p != val_field.data() + val_field.size() || !std::isfinite(v))
                throw detail::parse_error(line_no, val_col, "bad value '" + std::string(val_field) + "'");
            if (v < 0.0)
                throw Error(Errc::NegativeSpeed, "row " + std::to_string(line_no) + ": negative wind speed " +
                                                     std::string(val_field));
            s.value = v;
        }
        Quality q = Quality::observed;
        if (q_col) {
            const auto qf = fields[*q_col];
            if (qf == "interpolated")
                q = Quality::interpolated;
            else if (qf != "observed" && !qf.empty())
                throw detail::parse_error(line_no, *q_col, "bad quality flag '" + std::string(qf) + "'");
        }
        out.samples.push_back(s);
        out.line.push_back(line_no);
        out.quality.push_back(q);
    }
    return out;
}

/// Most frequent spacing between consecutive timestamps; ties go to the
/// smaller spacing.
inline std::optional<std::int64_t> modal_interval(std::span<const RawSample> rows)
{
    std::map<std::int64_t, std::size_t> counts;
    for (std::size_t i = 1; i < rows.size(); ++i)
        ++counts[rows[i].timestamp - rows[i - 1].timestamp];
    std::optional<std::int64_t> best;
    std::size_t best_count = 0;
    for (const auto& [delta, n] : counts)
        if (n > best_count) {
            best = delta;
            best_count = n;
        }
    return best;
}

/// Parses a delimited stream into a gap-filled series on the configured
/// grid. The spacing that occurs most often must equal `opts.dt`; other
/// spacings must be multiples of it and become gaps. Rows before the first
/// 00:00 sample are dropped when `opts.align_to_midnight`.
inline TimeSeries read_csv(std::istream& in, const IngestSchema& schema, const IngestOptions& opts = {})
{
    if (opts.dt <= 0)
        throw Error(Errc::InvalidArgument, "dt must be positive");
    auto rows = parse_rows(in, schema);
    if (rows.samples.empty())
        throw Error(Errc::EmptyInput, "no data rows");
    for (std::size_t i = 1; i < rows.samples.size(); ++i)
        if (rows.samples[i].timestamp <= rows.samples[i - 1].timestamp)
            throw Error(Errc::NonMonotonicTimestamps, "row " + std::to_string(rows.line[i]) +
                                                          ": timestamp does not increase");
    if (const auto mode = modal_interval(rows.samples); mode && *mode != opts.dt)
        throw Error(Errc::InconsistentSamplingInterval, "most common spacing is " + std::to_string(*mode) +
                                                            " s, configured dt is " + std::to_string(opts.dt) + " s");
    for (std::size_t i = 1; i < rows.samples.size(); ++i)
        if ((rows.samples[i].timestamp - rows.samples[i - 1].timestamp) % opts.dt != 0)
            throw Error(Errc::InconsistentSamplingInterval,
                        "row " + std::to_string(rows.line[i]) + ": spacing is not a multiple of dt");

    std::size_t first = 0;
    if (opts.align_to_midnight) {
        while (first < rows.samples.size() &&
               windpart::detail::floor_div(rows.samples[first].timestamp, opts.gaps.day_seconds) *
                       opts.gaps.day_seconds !=
                   rows.samples[first].timestamp)
            ++first;
        if (first == rows.samples.size())
            throw Error(Errc::SeriesTooShort, "no sample falls on a day boundary");
        if (first > 0)
            log::warn("ingest: skipped " + std::to_string(first) + " row(s) before the first day boundary");
    }
    std::span<const RawSample> kept(rows.samples.begin() + static_cast<std::ptrdiff_t>(first), rows.samples.end());
    TimeSeries ts = fill_gaps(kept, opts.dt, opts.gaps);
    if (!schema.quality_column)
        return ts;

    // Carry explicit flags over onto the samples that survived gap handling.
    std::vector<Quality> q(ts.quality().begin(), ts.quality().end());
    std::size_t r = first;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::int64_t t = ts.time_at(i);
        while (r < rows.samples.size() && rows.samples[r].timestamp < t)
            ++r;
        if (r < rows.samples.size() && rows.samples[r].timestamp == t && rows.quality[r] == Quality::interpolated)
            q[i] = Quality::interpolated;
    }
    auto v = ts.values();
    return TimeSeries({v.begin(), v.end()}, ts.dt(), ts.origin(), std::move(q),
                      {ts.excisions().begin(), ts.excisions().end()});
}

inline TimeSeries load_csv(const std::filesystem::path& path, const IngestSchema& schema, const IngestOptions& opts = {})
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::FileNotFound, "cannot open '" + path.string() + "'");
    return read_csv(in, schema, opts);
}

/// Writes "timestamp,value,quality" rows with epoch-second timestamps and
/// shortest round-trip values, so read_csv with a quality column restores
/// the series exactly.
inline void write_series_csv(std::ostream& out, const TimeSeries& ts)
{
    out << "timestamp,value,quality\n";
    char buf[64];
    for (std::size_t i = 0; i < ts.size(); ++i) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, ts[i]);
        out << ts.time_at(i) << ',' << std::string_view(buf, static_cast<std::size_t>(p - buf)) << ','
            << (ts.quality()[i] == Quality::observed ? "observed" : "interpolated") << '\n';
    }
}

inline void save_series_csv(const std::filesystem::path& path, const TimeSeries& ts)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::WriteError, "cannot write '" + path.string() + "'");
    write_series_csv(out, ts);
    if (!out.flush())
        throw Error(Errc::WriteError, "failed writing '" + path.string() + "'");
}

/// Schema matching write_series_csv output.
inline IngestSchema series_csv_schema()
{
    IngestSchema s;
    s.timestamp_column = std::string("timestamp");
    s.value_column = std::string("value");
    s.quality_column = ColumnRef{std::string("quality")};
    return s;
}

} // namespace windpart::io
