#pragma once

#include <functional>
#include <iostream>
#include <string_view>
#include <utility>

namespace windpart::log {

using Sink = std::function<void(std::string_view)>;

namespace detail {
inline Sink& warning_sink()
{
    static Sink sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}
} // namespace detail

/// Replaces the warning sink and returns the previous one. Not thread-safe;
/// install sinks before starting concurrent work.
inline Sink set_warning_sink(Sink sink)
{
    return std::exchange(detail::warning_sink(), std::move(sink));
}

inline void warn(std::string_view msg)
{
    if (auto& sink = detail::warning_sink())
        sink(msg);
}

} // namespace windpart::log
