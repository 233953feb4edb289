#pragma once

#include "windpart/error.hpp"

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace windpart::io {

inline constexpr std::int64_t kSecondsPerDay = 86400;

inline std::int64_t days_from_civil(int y, unsigned m, unsigned d)
{
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{m}, day{d}};
    if (!ymd.ok())
        throw Error(Errc::ParseError, "invalid calendar date");
    return sys_days{ymd}.time_since_epoch().count();
}

namespace detail {

inline bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out)
{
    if (pos + len > s.size())
        return false;
    const char* b = s.data() + pos;
    auto [ptr, ec] = std::from_chars(b, b + len, out);
    return ec == std::errc{} && ptr == b + len;
}

} // namespace detail

/// "YYYY-MM-DD" to epoch seconds of that day's 00:00.
inline std::int64_t parse_date(std::string_view s)
{
    int y = 0, m = 0, d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !detail::read_int(s, 0, 4, y) ||
        !detail::read_int(s, 5, 2, m) || !detail::read_int(s, 8, 2, d) || m < 1 || d < 1)
        throw Error(Errc::ParseError, "expected a YYYY-MM-DD date, got '" + std::string(s) + "'");
    return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d)) * kSecondsPerDay;
}

/// ISO-8601 date-time: "YYYY-MM-DD[T| ]HH:MM[:SS[.fff]][Z|(+|-)HH[:]MM]".
/// A missing zone designator is taken as UTC.
inline std::int64_t parse_iso8601(std::string_view s)
{
    auto fail = [&] { return Error(Errc::ParseError, "not an ISO-8601 timestamp: '" + std::string(s) + "'"); };
    if (s.size() < 16 || (s[10] != 'T' && s[10] != ' '))
        throw fail();
    const std::int64_t day = parse_date(s.substr(0, 10));
    int hh = 0, mm = 0, ss = 0;
    if (!detail::read_int(s, 11, 2, hh) || s[13] != ':' || !detail::read_int(s, 14, 2, mm))
        throw fail();
    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        if (!detail::read_int(s, pos + 1, 2, ss))
            throw fail();
        pos += 3;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9')
                ++pos;
        }
    }
    if (hh > 23 || mm > 59 || ss > 60)
        throw fail();
    std::int64_t offset = 0;
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            pos = s.size();
        } else if (s[pos] == '+' || s[pos] == '-') {
            const int sign = s[pos] == '-' ? -1 : 1;
            int oh = 0, om = 0;
            if (!detail::read_int(s, pos + 1, 2, oh))
                throw fail();
            std::size_t mpos = pos + 3;
            if (mpos < s.size() && s[mpos] == ':')
                ++mpos;
            if (mpos < s.size() && !detail::read_int(s, mpos, 2, om))
                throw fail();
            if (mpos < s.size() && mpos + 2 != s.size())
                throw fail();
            offset = sign * (oh * 3600 + om * 60);
            pos = s.size();
        } else {
            throw fail();
        }
    }
    return day + hh * 3600 + mm * 60 + ss - offset;
}

/// Parses with a strftime-style pattern (std::get_time), interpreting the
/// broken-down time as UTC.
inline std::int64_t parse_with_pattern(std::string_view s, const std::string& pattern)
{
    std::tm tm{};
    std::istringstream in{std::string(s)};
    in.imbue(std::locale::classic());
    in >> std::get_time(&tm, pattern.c_str());
    if (in.fail())
        throw Error(Errc::ParseError, "'" + std::string(s) + "' does not match pattern '" + pattern + "'");
    const std::int64_t day =
        days_from_civil(tm.tm_year + 1900, static_cast<unsigned>(tm.tm_mon + 1), static_cast<unsigned>(tm.tm_mday));
    return day * kSecondsPerDay + tm.tm_hour * 3600 + tm.tm_min * 60 + tm.tm_sec;
}

inline std::string format_date(std::int64_t t)
{
    using namespace std::chrono;
    const auto days = sys_days{std::chrono::days{t >= 0 ? t / kSecondsPerDay : (t - kSecondsPerDay + 1) / kSecondsPerDay}};
    const year_month_day ymd{days};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

inline std::string format_iso8601(std::int64_t t)
{
    std::int64_t sod = t % kSecondsPerDay;
    if (sod < 0)
        sod += kSecondsPerDay;
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d", static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60),
                  static_cast<int>(sod % 60));
    return format_date(t) + buf;
}

} // namespace windpart::io
