#include "fxscale/panel.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "fxscale/errors.hpp"
#include "fxscale/parallel.hpp"

namespace fxscale {

void ActivityPanel::validate() const {
  const std::int64_t len = window.length_ms();
  const std::int64_t dt_ms = dt_minutes * kMillisPerMinute;
  if (dt_minutes < 1 || len <= 0 || len % dt_ms != 0) {
    throw Error(ErrorCode::Geometry,
                "window length " + std::to_string(len) +
                    "ms is not a positive multiple of dt=" +
                    std::to_string(dt_minutes) + "min");
  }
  const std::int64_t q = len / dt_ms;
  if (q < 2) {
    throw Error(ErrorCode::Geometry, "panel needs at least 2 bins, got " +
                                         std::to_string(q));
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::Domain, "panel has no pairs");
  }
  if (counts.size() != pairs.size() * static_cast<std::size_t>(q)) {
    throw Error(ErrorCode::Domain, "counts size does not match N*Q");
  }
  for (std::int64_t c : counts) {
    if (c < 0) throw Error(ErrorCode::Domain, "negative count");
  }
}

ActivityPanel bin_counts(const TickStream& stream, EventKind kind,
                         std::int64_t dt_minutes, Interval window,
                         const std::vector<std::string>& pairs,
                         unsigned threads) {
  if (pairs.empty()) {
    throw Error(ErrorCode::Domain, "pair list is empty");
  }
  const std::int64_t dt_ms = dt_minutes * kMillisPerMinute;
  const std::int64_t len = window.length_ms();
  if (dt_minutes < 1 || len <= 0 || len % dt_ms != 0) {
    throw Error(ErrorCode::Geometry,
                "window length is not a positive multiple of dt");
  }
  const std::int64_t q = len / dt_ms;
  if (q < 2) {
    throw Error(ErrorCode::Geometry, "window yields fewer than 2 bins");
  }
  if (!stream.span.covers(window)) {
    throw Error(ErrorCode::Coverage,
                "window [" + format_iso8601(window.begin) + ", " +
                    format_iso8601(window.end) + ") outside stream span [" +
                    format_iso8601(stream.span.begin) + ", " +
                    format_iso8601(stream.span.end) + ")");
  }

  ActivityPanel panel;
  panel.kind = kind;
  panel.dt_minutes = dt_minutes;
  panel.window = window;
  panel.pairs = pairs;
  panel.counts.assign(pairs.size() * static_cast<std::size_t>(q), 0);

  std::unordered_map<std::string_view, std::size_t> row_of;
  row_of.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) row_of[pairs[i]] = i;

  // Events are time-ordered; find the window slice once.
  const auto lo = std::lower_bound(
      stream.events.begin(), stream.events.end(), window.begin,
      [](const TickEvent& e, UtcMillis t) { return e.timestamp < t; });
  const auto hi = std::lower_bound(
      lo, stream.events.end(), window.end,
      [](const TickEvent& e, UtcMillis t) { return e.timestamp < t; });

  const TickEvent* base = stream.events.data() + (lo - stream.events.begin());
  const std::size_t slice = static_cast<std::size_t>(hi - lo);

  // Pair-parallel: each worker owns a contiguous row range and scans the
  // slice; integer sums make the result order-independent.
  parallel_for(pairs.size(), threads, [&](std::size_t rb, std::size_t re) {
    for (std::size_t e = 0; e < slice; ++e) {
      const TickEvent& ev = base[e];
      if (ev.kind != kind) continue;
      auto it = row_of.find(ev.pair);
      if (it == row_of.end() || it->second < rb || it->second >= re) continue;
      const std::int64_t bin = (ev.timestamp - window.begin) / dt_ms;
      panel.counts[it->second * static_cast<std::size_t>(q) +
                   static_cast<std::size_t>(bin)] += 1;
    }
  });
  return panel;
}

WeekAnchor WeekAnchor::parse(std::string_view text) {
  if (text == "first") return WeekAnchor::first();
  static const char* names[] = {"sun", "mon", "tue", "wed", "thu", "fri", "sat"};
  if (text.size() != 9 || text[3] != '@' || text[6] != ':') {
    throw Error(ErrorCode::Domain,
                "invalid anchor '" + std::string(text) +
                    "' (expected e.g. sun@00:00 or first)");
  }
  WeekAnchor a;
  a.mode = Mode::Calendar;
  a.weekday = -1;
  for (int d = 0; d < 7; ++d) {
    if (text.substr(0, 3) == names[d]) a.weekday = d;
  }
  const int hh = (text[4] - '0') * 10 + (text[5] - '0');
  const int mm = (text[7] - '0') * 10 + (text[8] - '0');
  if (a.weekday < 0 || hh < 0 || hh > 23 || mm < 0 || mm > 59 ||
      !isdigit(text[4]) || !isdigit(text[5]) || !isdigit(text[7]) ||
      !isdigit(text[8])) {
    throw Error(ErrorCode::Domain, "invalid anchor '" + std::string(text) + "'");
  }
  a.minute_of_day = hh * 60 + mm;
  return a;
}

std::string WeekAnchor::to_string() const {
  if (mode == Mode::First) return "first";
  static const char* names[] = {"sun", "mon", "tue", "wed", "thu", "fri", "sat"};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%s@%02d:%02d", names[weekday],
                minute_of_day / 60, minute_of_day % 60);
  return buf;
}

namespace {

std::string window_label(UtcMillis start) {
  std::int64_t days = start.ms / kMillisPerDay;
  if (start.ms < 0 && start.ms % kMillisPerDay != 0) --days;
  const CivilDate d = civil_from_days(days);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

}  // namespace

WindowPlan plan_weeks(Interval span, const WeekAnchor& anchor) {
  const std::int64_t week_ms = kMinutesPerWeek * kMillisPerMinute;
  UtcMillis first;
  if (anchor.mode == WeekAnchor::Mode::First) {
    first = span.begin;
  } else {
    // First instant >= span.begin with the anchor's weekday and time of day.
    std::int64_t day = span.begin.ms / kMillisPerDay;
    if (span.begin.ms < 0 && span.begin.ms % kMillisPerDay != 0) --day;
    for (int step = 0; step < 8; ++step) {
      const UtcMillis candidate{(day + step) * kMillisPerDay +
                                anchor.minute_of_day * kMillisPerMinute};
      if (weekday_of(candidate) == anchor.weekday && candidate >= span.begin) {
        first = candidate;
        break;
      }
      if (step == 7) {
        throw Error(ErrorCode::Domain, "no anchor instant found");
      }
    }
  }

  WindowPlan plan;
  for (UtcMillis start = first; start + week_ms <= span.end;
       start = start + week_ms) {
    plan.windows.push_back(Interval{start, start + week_ms});
    plan.labels.push_back(window_label(start));
  }
  if (plan.windows.empty()) {
    throw Error(ErrorCode::Domain,
                "span shorter than one whole week from anchor " +
                    anchor.to_string());
  }
  return plan;
}

ActivityPanel rebin(const ActivityPanel& panel, std::int64_t dt_new_minutes) {
  if (dt_new_minutes == panel.dt_minutes) return panel;
  if (dt_new_minutes < panel.dt_minutes ||
      dt_new_minutes % panel.dt_minutes != 0) {
    throw Error(ErrorCode::Geometry,
                "dt_new=" + std::to_string(dt_new_minutes) +
                    " is not a multiple of dt=" + std::to_string(panel.dt_minutes));
  }
  const std::int64_t len_min = panel.window.length_minutes();
  if (len_min % dt_new_minutes != 0) {
    throw Error(ErrorCode::Geometry, "window not divisible by dt_new");
  }
  const std::int64_t q_new = len_min / dt_new_minutes;
  if (q_new < 2) {
    throw Error(ErrorCode::Geometry, "rebin would leave fewer than 2 bins");
  }
  const std::int64_t group = dt_new_minutes / panel.dt_minutes;
  const std::int64_t q_old = panel.num_bins();

  ActivityPanel out;
  out.kind = panel.kind;
  out.dt_minutes = dt_new_minutes;
  out.window = panel.window;
  out.pairs = panel.pairs;
  out.counts.assign(panel.pairs.size() * static_cast<std::size_t>(q_new), 0);
  for (std::size_t i = 0; i < panel.pairs.size(); ++i) {
    const auto src = panel.row(i);
    auto dst = out.row(i);
    for (std::int64_t k = 0; k < q_old; ++k) {
      dst[static_cast<std::size_t>(k / group)] += src[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

}  // namespace fxscale
