#pragma once

#include "windpart/error.hpp"
#include "windpart/log.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace windpart {

enum class Quality : std::uint8_t { observed, interpolated };

/// Marks whole days removed from the middle of a series: the sample at
/// index `at` is `seconds` later than the uniform grid would place it.
struct Excision {
    std::size_t at = 0;
    std::int64_t seconds = 0;

    friend bool operator==(const Excision&, const Excision&) = default;
};

/// Uniformly sampled scalar record. Times are epoch seconds in the frame
/// chosen at ingestion (UTC shifted by a fixed offset); `dt` is in seconds.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, std::int64_t dt = 600, std::int64_t origin = 0,
                        std::vector<Quality> quality = {}, std::vector<Excision> excisions = {})
        : values_(std::move(values)), quality_(std::move(quality)), excisions_(std::move(excisions)),
          dt_(dt), origin_(origin)
    {
        if (values_.empty())
            throw Error(Errc::EmptyInput, "time series must contain at least one sample");
        if (dt_ <= 0)
            throw Error(Errc::InvalidArgument, "sampling interval must be positive");
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!std::isfinite(values_[i]))
                throw Error(Errc::NonFiniteInput, "sample " + std::to_string(i) + " is not finite");
        if (quality_.empty())
            quality_.assign(values_.size(), Quality::observed);
        if (quality_.size() != values_.size())
            throw Error(Errc::LengthMismatch, "quality flags must match the sample count");
        std::size_t prev = 0;
        for (const auto& e : excisions_) {
            if (e.at <= prev || e.at >= values_.size() || e.seconds <= 0)
                throw Error(Errc::InvalidArgument, "excisions must be interior, increasing, positive");
            prev = e.at;
        }
    }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<const Quality> quality() const noexcept { return quality_; }
    [[nodiscard]] std::span<const Excision> excisions() const noexcept { return excisions_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::int64_t dt() const noexcept { return dt_; }
    [[nodiscard]] std::int64_t origin() const noexcept { return origin_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    [[nodiscard]] std::int64_t time_at(std::size_t i) const noexcept
    {
        std::int64_t t = origin_ + static_cast<std::int64_t>(i) * dt_;
        for (const auto& e : excisions_) {
            if (e.at > i)
                break;
            t += e.seconds;
        }
        return t;
    }

    /// Index of the sample stamped exactly `t`, if any.
    [[nodiscard]] std::optional<std::size_t> index_of(std::int64_t t) const noexcept
    {
        std::int64_t seg_origin = origin_;
        std::size_t seg_begin = 0;
        for (std::size_t k = 0; k <= excisions_.size(); ++k) {
            const std::size_t seg_end = k < excisions_.size() ? excisions_[k].at : values_.size();
            const std::int64_t off = t - seg_origin;
            if (off >= 0 && off % dt_ == 0) {
                const auto idx = seg_begin + static_cast<std::size_t>(off / dt_);
                if (idx < seg_end)
                    return idx;
            }
            if (k < excisions_.size()) {
                seg_origin += static_cast<std::int64_t>(seg_end - seg_begin) * dt_ + excisions_[k].seconds;
                seg_begin = seg_end;
            }
        }
        return std::nullopt;
    }

    [[nodiscard]] std::size_t count(Quality q) const noexcept
    {
        return static_cast<std::size_t>(std::count(quality_.begin(), quality_.end(), q));
    }

    /// Samples [begin, end) with timestamps preserved.
    [[nodiscard]] TimeSeries slice(std::size_t begin, std::size_t end) const
    {
        if (begin >= end || end > values_.size())
            throw Error(Errc::IndexOutOfRange, "invalid slice bounds");
        std::vector<Excision> ex;
        for (const auto& e : excisions_)
            if (e.at > begin && e.at < end)
                ex.push_back({e.at - begin, e.seconds});
        return TimeSeries({values_.begin() + begin, values_.begin() + end}, dt_, time_at(begin),
                          {quality_.begin() + begin, quality_.begin() + end}, std::move(ex));
    }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
    std::vector<Quality> quality_;
    std::vector<Excision> excisions_;
    std::int64_t dt_;
    std::int64_t origin_;
};

// ---------------------------------------------------------------------------
// Gap filling

enum class GapPolicy { linear_interpolate, drop_day };

struct RawSample {
    std::int64_t timestamp = 0;
    std::optional<double> value;
};

struct GapOptions {
    GapPolicy policy = GapPolicy::linear_interpolate;
    std::size_t max_run = 6;           ///< longest interior run filled by interpolation
    std::int64_t day_seconds = 86400;  ///< granularity of drop-day exclusion
};

namespace detail {
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept
{
    const std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}
} // namespace detail

/// Places `raw` on a uniform `dt` grid starting at its first timestamp.
/// Interior runs of at most `max_run` missing samples are filled linearly
/// under linear-interpolate; every other missing sample removes its whole
/// day. Non-finite values count as missing.
inline TimeSeries fill_gaps(std::span<const RawSample> raw, std::int64_t dt, const GapOptions& opts = {})
{
    if (raw.empty())
        throw Error(Errc::EmptyInput, "no samples to ingest");
    if (dt <= 0)
        throw Error(Errc::InvalidArgument, "sampling interval must be positive");
    if (opts.day_seconds <= 0)
        throw Error(Errc::InvalidArgument, "day length must be positive");
    for (std::size_t i = 1; i < raw.size(); ++i)
        if (raw[i].timestamp <= raw[i - 1].timestamp)
            throw Error(Errc::NonMonotonicTimestamps, "timestamp at row " + std::to_string(i) +
                                                          " does not increase");

    const std::int64_t t0 = raw.front().timestamp;
    for (const auto& r : raw)
        if ((r.timestamp - t0) % dt != 0)
            throw Error(Errc::InconsistentSamplingInterval,
                        "timestamp " + std::to_string(r.timestamp) + " is off the sampling grid");

    const auto grid_len = static_cast<std::size_t>((raw.back().timestamp - t0) / dt) + 1;
    std::vector<double> vals(grid_len, std::numeric_limits<double>::quiet_NaN());
    for (const auto& r : raw)
        if (r.value && std::isfinite(*r.value))
            vals[static_cast<std::size_t>((r.timestamp - t0) / dt)] = *r.value;

    std::vector<Quality> qual(grid_len, Quality::observed);
    auto day_of = [&](std::size_t k) {
        return detail::floor_div(t0 + static_cast<std::int64_t>(k) * dt, opts.day_seconds);
    };
    std::vector<std::int64_t> dropped_days;

    for (std::size_t k = 0; k < grid_len;) {
        if (!std::isnan(vals[k])) {
            ++k;
            continue;
        }
        const std::size_t a = k;
        while (k < grid_len && std::isnan(vals[k]))
            ++k;
        const std::size_t b = k;
        const bool interior = a > 0 && b < grid_len;
        if (opts.policy == GapPolicy::linear_interpolate && interior && b - a <= opts.max_run) {
            const double lo = vals[a - 1];
            const double hi = vals[b];
            const auto span = static_cast<double>(b - a + 1);
            for (std::size_t m = a; m < b; ++m) {
                vals[m] = lo + (hi - lo) * static_cast<double>(m - a + 1) / span;
                qual[m] = Quality::interpolated;
            }
        } else {
            for (auto d = day_of(a); d <= day_of(b - 1); ++d)
                dropped_days.push_back(d);
        }
    }

    std::sort(dropped_days.begin(), dropped_days.end());
    auto is_dropped = [&](std::size_t k) {
        return std::binary_search(dropped_days.begin(), dropped_days.end(), day_of(k));
    };

    std::vector<double> out;
    std::vector<Quality> out_q;
    std::vector<Excision> excisions;
    out.reserve(grid_len);
    out_q.reserve(grid_len);
    std::int64_t origin = 0;
    std::size_t skipped = 0;
    for (std::size_t k = 0; k < grid_len; ++k) {
        if (is_dropped(k)) {
            ++skipped;
            continue;
        }
        if (out.empty())
            origin = t0 + static_cast<std::int64_t>(k) * dt;
        else if (skipped > 0)
            excisions.push_back({out.size(), static_cast<std::int64_t>(skipped) * dt});
        skipped = 0;
        out.push_back(vals[k]);
        out_q.push_back(qual[k]);
    }
    if (out.empty())
        throw Error(Errc::AllDaysDropped, "every day contains an unfillable gap");
    if (!dropped_days.empty()) {
        dropped_days.erase(std::unique(dropped_days.begin(), dropped_days.end()), dropped_days.end());
        log::warn("dropped " + std::to_string(dropped_days.size()) + " day(s) containing unfillable gaps");
    }
    return TimeSeries(std::move(out), dt, origin, std::move(out_q), std::move(excisions));
}

// ---------------------------------------------------------------------------
// Partitioning

/// Days x slots view of a series: row i holds day i, column j holds slot j.
class PartitionMatrix {
public:
    PartitionMatrix(std::size_t rows, std::size_t cols, std::vector<double> data, std::int64_t dt = 600,
                    std::int64_t origin = 0)
        : data_(std::move(data)), rows_(rows), cols_(cols), dt_(dt), origin_(origin)
    {
        if (rows_ < 1)
            throw Error(Errc::SeriesTooShort, "partition matrix needs at least one row");
        if (cols_ < 2)
            throw Error(Errc::InvalidPeriod, "partition matrix needs at least two columns");
        if (data_.size() != rows_ * cols_)
            throw Error(Errc::LengthMismatch, "data size does not equal rows * cols");
        if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); }))
            throw Error(Errc::NonFiniteInput, "partition matrix entries must be finite");
    }

    /// Builds a matrix from nested rows, all of equal length.
    static PartitionMatrix from_rows(const std::vector<std::vector<double>>& rows, std::int64_t dt = 600,
                                     std::int64_t origin = 0)
    {
        if (rows.empty())
            throw Error(Errc::SeriesTooShort, "partition matrix needs at least one row");
        std::vector<double> flat;
        for (const auto& r : rows) {
            if (r.size() != rows.front().size())
                throw Error(Errc::LengthMismatch, "ragged rows");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return {rows.size(), rows.front().size(), std::move(flat), dt, origin};
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::int64_t dt() const noexcept { return dt_; }
    [[nodiscard]] std::int64_t origin() const noexcept { return origin_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept
    {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }

    friend bool operator==(const PartitionMatrix&, const PartitionMatrix&) = default;

private:
    std::vector<double> data_;
    std::size_t rows_;
    std::size_t cols_;
    std::int64_t dt_;
    std::int64_t origin_;
};

/// Reshapes `x` into floor(len / period_len) rows of `period_len` slots.
/// A trailing partial period is discarded with a warning.
inline PartitionMatrix partition(const TimeSeries& x, std::size_t period_len)
{
    if (period_len < 2)
        throw Error(Errc::InvalidPeriod, "period length must be at least 2");
    if (x.size() < period_len)
        throw Error(Errc::SeriesTooShort, "series of " + std::to_string(x.size()) +
                                              " samples is shorter than one period of " +
                                              std::to_string(period_len));
    const std::size_t rows = x.size() / period_len;
    const std::size_t used = rows * period_len;
    if (used < x.size())
        log::warn("partition: dropped " + std::to_string(x.size() - used) + " trailing sample(s)");
    auto v = x.values();
    return {rows, period_len, std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(used)),
            x.dt(), x.origin()};
}

/// Slot `j` across all days, oldest first.
inline std::vector<double> column(const PartitionMatrix& m, std::size_t j)
{
    if (j >= m.cols())
        throw Error(Errc::IndexOutOfRange, "column " + std::to_string(j) + " of " + std::to_string(m.cols()));
    std::vector<double> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        out[i] = m.at(i, j);
    return out;
}

inline TimeSeries flatten(const PartitionMatrix& m)
{
    auto d = m.data();
    return TimeSeries(std::vector<double>(d.begin(), d.end()), m.dt(), m.origin());
}

} // namespace windpart
