#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace hlem {

using Duration = std::chrono::milliseconds;
/// UTC instant with millisecond resolution.
using Timestamp = std::chrono::sys_time<Duration>;

inline constexpr Duration kTick{1};

/// Parses "YYYY-MM-DD[T| ]HH:MM[:SS[.fff...]][Z|(+|-)HH[:]MM]" and bare
/// "YYYY-MM-DD". Inputs without an offset are taken as UTC; fractional digits
/// past milliseconds are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// ISO-8601 UTC rendering with milliseconds, e.g. "2016-01-01T09:51:15.304Z".
std::string format_timestamp(Timestamp t);

/// Parses "<number><unit>" sequences such as "1d", "4h", "1h30m", "250ms".
/// Units: w, d, h, m, s, ms. A bare integer is read as seconds.
std::optional<Duration> parse_duration(std::string_view text);

/// Shortest exact rendering accepted by parse_duration ("1d", "90m", "1500ms").
std::string format_duration(Duration d);

/// Midnight UTC of the day containing `t`.
Timestamp floor_to_day(Timestamp t);

}  // namespace hlem
