#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fxscale/time.hpp"

namespace fxscale {

enum class EventKind : std::uint8_t { Quote, Trade };

inline char event_kind_char(EventKind k) {
  return k == EventKind::Quote ? 'Q' : 'T';
}

// One quotation or transaction record. `pair` is a currency-pair code of the
// form AAA/BBB where each side is three uppercase alphanumeric characters.
struct TickEvent {
  UtcMillis timestamp;
  std::string pair;
  EventKind kind;

  bool operator==(const TickEvent&) const = default;
};

bool is_valid_pair_code(std::string_view code);

struct Reject {
  std::size_t line_number;  // 1-based
  std::string reason;
};

enum class OrderPolicy { Strict, SortLenient };

// Immutable after construction; safe to share read-only across threads.
// Events are non-decreasing in timestamp and every timestamp lies in `span`.
struct TickStream {
  std::vector<TickEvent> events;
  Interval span;                          // half-open [t_start, t_end)
  std::vector<std::string> pair_universe;  // distinct codes, sorted
  std::vector<Reject> rejects;            // from parsing, if any

  // Validates ordering and span membership; throws Error(Domain) otherwise.
  static TickStream from_events(std::vector<TickEvent> events, Interval span);

  // Grow the span (never shrinks; shrinking could orphan events).
  void widen_span(Interval target);
};

// Tick CSV: one `timestamp,pair,kind` record per line, UTF-8, kind Q or T,
// optional header (first line starting with a non-digit), extra columns
// ignored, CRLF tolerated. Malformed lines are accumulated as rejects; more
// than 1% rejects fails the parse. Strict requires non-decreasing timestamps;
// SortLenient stably sorts by timestamp.
TickStream parse_tick_file(std::istream& in, OrderPolicy policy);
TickStream parse_tick_path(const std::filesystem::path& path, OrderPolicy policy);

// Canonical serialization: header line then one canonical record per line.
// Re-serializing a parsed canonical file reproduces it byte for byte.
void serialize_tick_stream(const TickStream& stream, std::ostream& out);

// Keep only events whose pair is in `include`. Order and span are unchanged.
TickStream filter_pairs(const TickStream& stream,
                        const std::vector<std::string>& include);

}  // namespace fxscale
