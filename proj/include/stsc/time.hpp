#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stsc {

using Instant = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

// Civil-calendar conversions (proleptic Gregorian), valid far beyond any
// timestamp this tool will ever see.
int64_t days_from_civil(int y, unsigned m, unsigned d);
void civil_from_days(int64_t z, int& y, unsigned& m, unsigned& d);

// RFC 3339 timestamp, e.g. "2006-10-02T09:15:00Z" or "2006-10-02T11:15:00+02:00".
// Fractional seconds are accepted and truncated. Returns nullopt on any
// syntactic or calendar violation.
std::optional<Instant> parse_rfc3339(std::string_view s);

// Always UTC, second precision, 'Z' suffix.
std::string format_rfc3339(Instant t);

// Compact form safe for file names: 20061002T091500Z.
std::string format_compact(Instant t);

// "<n>d" | "<n>h" | "<n>m" | "<n>s", n a positive integer.
std::optional<Duration> parse_duration(std::string_view s);

// ISO 8601 week label "2006-W41" -> Monday 00:00:00 UTC of that week.
std::optional<Instant> parse_iso_week(std::string_view s);

// Midnight UTC of the calendar day containing t.
Instant floor_to_day(Instant t);

}  // namespace stsc
