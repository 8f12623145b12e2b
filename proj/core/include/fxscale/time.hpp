#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fxscale {

// All times are UTC, in milliseconds since the Unix epoch, with civil-day
// arithmetic (86,400-second days, no leap seconds).
struct UtcMillis {
  std::int64_t ms = 0;

  auto operator<=>(const UtcMillis&) const = default;
};

constexpr std::int64_t kMillisPerSecond = 1000;
constexpr std::int64_t kMillisPerMinute = 60 * kMillisPerSecond;
constexpr std::int64_t kMillisPerDay = 24 * 60 * kMillisPerMinute;
constexpr std::int64_t kMinutesPerWeek = 7 * 24 * 60;  // 10,080

constexpr UtcMillis operator+(UtcMillis t, std::int64_t delta_ms) {
  return UtcMillis{t.ms + delta_ms};
}
constexpr std::int64_t operator-(UtcMillis a, UtcMillis b) {
  return a.ms - b.ms;
}

inline UtcMillis add_minutes(UtcMillis t, std::int64_t minutes) {
  return UtcMillis{t.ms + minutes * kMillisPerMinute};
}

// Half-open [begin, end).
struct Interval {
  UtcMillis begin;
  UtcMillis end;

  bool operator==(const Interval&) const = default;
  std::int64_t length_ms() const { return end.ms - begin.ms; }
  std::int64_t length_minutes() const { return length_ms() / kMillisPerMinute; }
  bool contains(UtcMillis t) const { return begin <= t && t < end; }
  bool covers(const Interval& other) const {
    return begin <= other.begin && other.end <= end;
  }
};

struct CivilDate {
  int year;
  int month;  // 1..12
  int day;    // 1..31
};

// Days since 1970-01-01 for a proleptic-Gregorian civil date, and back.
std::int64_t days_from_civil(CivilDate d);
CivilDate civil_from_days(std::int64_t days);

// 0 = Sunday .. 6 = Saturday.
int weekday_of(UtcMillis t);

enum class Weekday : int {
  Sunday = 0,
  Monday,
  Tuesday,
  Wednesday,
  Thursday,
  Friday,
  Saturday
};

// Strict ISO 8601 UTC: "YYYY-MM-DDTHH:MM:SS[.fff]Z". Fractional seconds may
// carry 1..9 digits; precision beyond milliseconds is truncated.
// Returns false on any malformed field.
bool parse_iso8601(std::string_view text, UtcMillis& out);

// Canonical form with exactly three fractional digits:
// "YYYY-MM-DDTHH:MM:SS.fffZ".
std::string format_iso8601(UtcMillis t);

// Accepts the strict form above or a bare "YYYY-MM-DD" (midnight UTC).
// Throws Error(Domain) on failure; used for CLI flags and config files.
UtcMillis parse_time_arg(std::string_view text);

}  // namespace fxscale
