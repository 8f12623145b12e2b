#include "fxscale/time.hpp"

#include <charconv>
#include <cstdio>

#include "fxscale/errors.hpp"

namespace fxscale {

std::int64_t days_from_civil(CivilDate d) {
  // Proleptic Gregorian, era-based (400-year cycles of 146,097 days).
  std::int64_t y = d.year;
  y -= d.month <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153 * (static_cast<unsigned>(d.month) + (d.month > 2 ? -3 : 9)) + 2) / 5 +
      static_cast<unsigned>(d.day) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                   static_cast<int>(d)};
}

int weekday_of(UtcMillis t) {
  std::int64_t days = t.ms / kMillisPerDay;
  if (t.ms < 0 && t.ms % kMillisPerDay != 0) --days;
  // 1970-01-01 was a Thursday.
  return static_cast<int>(((days % 7) + 7 + 4) % 7);
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool parse_uint_fixed(std::string_view s, size_t pos, size_t len, int& out) {
  int value = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size() || !is_digit(s[i])) return false;
    value = value * 10 + (s[i] - '0');
  }
  out = value;
  return true;
}

int days_in_month(int year, int month) {
  static const int table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return table[month - 1];
}

}  // namespace

bool parse_iso8601(std::string_view s, UtcMillis& out) {
  // YYYY-MM-DDTHH:MM:SS[.f{1,9}]Z — minimum length 20.
  if (s.size() < 20) return false;
  int year, month, day, hour, minute, second;
  if (!parse_uint_fixed(s, 0, 4, year) || s[4] != '-' ||
      !parse_uint_fixed(s, 5, 2, month) || s[7] != '-' ||
      !parse_uint_fixed(s, 8, 2, day) || s[10] != 'T' ||
      !parse_uint_fixed(s, 11, 2, hour) || s[13] != ':' ||
      !parse_uint_fixed(s, 14, 2, minute) || s[16] != ':' ||
      !parse_uint_fixed(s, 17, 2, second)) {
    return false;
  }
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
      hour > 23 || minute > 59 || second > 59) {
    return false;
  }

  std::int64_t millis = 0;
  size_t pos = 19;
  if (s[pos] == '.') {
    ++pos;
    size_t digits = 0;
    std::int64_t frac = 0;
    while (pos < s.size() && is_digit(s[pos])) {
      if (digits < 3) frac = frac * 10 + (s[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits < 1 || digits > 9) return false;
    while (digits < 3) {
      frac *= 10;
      ++digits;
    }
    millis = frac;
  }
  if (pos + 1 != s.size() || s[pos] != 'Z') return false;

  const std::int64_t days = days_from_civil(CivilDate{year, month, day});
  out.ms = days * kMillisPerDay +
           ((hour * 60 + minute) * 60 + second) * kMillisPerSecond + millis;
  return true;
}

std::string format_iso8601(UtcMillis t) {
  std::int64_t days = t.ms / kMillisPerDay;
  std::int64_t rem = t.ms % kMillisPerDay;
  if (rem < 0) {
    rem += kMillisPerDay;
    --days;
  }
  const CivilDate d = civil_from_days(days);
  const int ms = static_cast<int>(rem % 1000);
  const int sec = static_cast<int>(rem / 1000 % 60);
  const int min = static_cast<int>(rem / 60000 % 60);
  const int hour = static_cast<int>(rem / 3600000);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                d.year, d.month, d.day, hour, min, sec, ms);
  return buf;
}

UtcMillis parse_time_arg(std::string_view text) {
  UtcMillis t;
  if (parse_iso8601(text, t)) return t;
  // Bare date: midnight UTC.
  if (text.size() == 10) {
    std::string full(text);
    full += "T00:00:00.000Z";
    if (parse_iso8601(full, t)) return t;
  }
  throw Error(ErrorCode::Domain,
              "invalid time '" + std::string(text) +
                  "' (expected YYYY-MM-DDTHH:MM:SS[.fff]Z or YYYY-MM-DD)");
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Ordering: return "ordering";
    case ErrorCode::EmptyStream: return "empty_stream";
    case ErrorCode::EmptySelection: return "empty_selection";
    case ErrorCode::Geometry: return "geometry";
    case ErrorCode::Coverage: return "coverage";
    case ErrorCode::LagDomain: return "lag_domain";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::InsufficientData: return "insufficient_data";
    case ErrorCode::BootstrapDegeneracy: return "bootstrap_degeneracy";
    case ErrorCode::Spec: return "spec";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace fxscale
