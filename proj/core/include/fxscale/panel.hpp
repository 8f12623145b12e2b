#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fxscale/tick_data.hpp"
#include "fxscale/time.hpp"

namespace fxscale {

// N x Q matrix of event counts over bins of width dt_minutes. Bins are
// half-open [t0 + k*dt, t0 + (k+1)*dt). Rows follow the order of `pairs`;
// pairs with no events keep all-zero rows so panel geometry stays stable
// across windows.
struct ActivityPanel {
  EventKind kind = EventKind::Quote;
  std::int64_t dt_minutes = 1;
  Interval window;
  std::vector<std::string> pairs;     // N
  std::vector<std::int64_t> counts;   // row-major N*Q

  std::size_t num_pairs() const { return pairs.size(); }
  std::int64_t num_bins() const {
    return window.length_minutes() / dt_minutes;
  }
  std::span<const std::int64_t> row(std::size_t i) const {
    const auto q = static_cast<std::size_t>(num_bins());
    return {counts.data() + i * q, q};
  }
  std::span<std::int64_t> row(std::size_t i) {
    const auto q = static_cast<std::size_t>(num_bins());
    return {counts.data() + i * q, q};
  }

  bool operator==(const ActivityPanel&) const = default;

  // Checks the geometry invariants (window divisible by dt, Q >= 2,
  // counts sized N*Q, counts non-negative); throws on violation.
  void validate() const;
};

struct WindowPlan {
  std::vector<Interval> windows;    // disjoint, ordered, equal length
  std::vector<std::string> labels;  // start date of each window (YYYY-MM-DD)
};

// Calendar anchor (weekday + minute of day, UTC) or alignment to the span
// start ("first": windows begin at span.begin).
struct WeekAnchor {
  enum class Mode { Calendar, First };
  Mode mode = Mode::Calendar;
  int weekday = 0;         // 0 = Sunday
  int minute_of_day = 0;   // 0..1439

  static WeekAnchor sunday_midnight() { return WeekAnchor{}; }
  static WeekAnchor first() {
    WeekAnchor a;
    a.mode = Mode::First;
    return a;
  }
  // "sun@00:00", "mon@21:30", ... or "first".
  static WeekAnchor parse(std::string_view text);
  std::string to_string() const;
};

// Count events of `kind` into bins of width dt_minutes over `window` for the
// given ordered pair list. Throws Geometry if the window length is not a
// multiple of dt or yields fewer than 2 bins, Coverage if window is not
// inside stream.span.
ActivityPanel bin_counts(const TickStream& stream, EventKind kind,
                         std::int64_t dt_minutes, Interval window,
                         const std::vector<std::string>& pairs,
                         unsigned threads = 1);

// Maximal list of disjoint whole weeks (10,080 minutes) starting at
// successive anchors inside `span`. Partial leading/trailing weeks are
// excluded. Throws Domain if no whole week fits.
WindowPlan plan_weeks(Interval span, const WeekAnchor& anchor);

// Sum consecutive groups of dt_new/dt bins. Per-pair totals are conserved.
ActivityPanel rebin(const ActivityPanel& panel, std::int64_t dt_new_minutes);

}  // namespace fxscale
