#include "fxscale/tick_data.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "fxscale/errors.hpp"

namespace fxscale {

bool is_valid_pair_code(std::string_view code) {
  if (code.size() != 7 || code[3] != '/') return false;
  auto ok = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  };
  for (std::size_t i : {0u, 1u, 2u, 4u, 5u, 6u}) {
    if (!ok(code[i])) return false;
  }
  return true;
}

namespace {

std::vector<std::string> collect_universe(const std::vector<TickEvent>& events) {
  std::set<std::string> codes;
  for (const auto& e : events) codes.insert(e.pair);
  return {codes.begin(), codes.end()};
}

}  // namespace

TickStream TickStream::from_events(std::vector<TickEvent> events, Interval span) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!span.contains(events[i].timestamp)) {
      throw Error(ErrorCode::Domain,
                  "event " + std::to_string(i) + " at " +
                      format_iso8601(events[i].timestamp) + " outside span [" +
                      format_iso8601(span.begin) + ", " +
                      format_iso8601(span.end) + ")");
    }
    if (i > 0 && events[i].timestamp < events[i - 1].timestamp) {
      throw Error(ErrorCode::Domain,
                  "events not time-ordered at index " + std::to_string(i));
    }
  }
  TickStream s;
  s.span = span;
  s.pair_universe = collect_universe(events);
  s.events = std::move(events);
  return s;
}

void TickStream::widen_span(Interval target) {
  span.begin = std::min(span.begin, target.begin);
  span.end = std::max(span.end, target.end);
}

namespace {

struct ParsedLine {
  TickEvent event;
  bool ok = false;
  std::string reason;
};

ParsedLine parse_line(std::string_view line) {
  ParsedLine out;
  const std::size_t c1 = line.find(',');
  if (c1 == std::string_view::npos) {
    out.reason = "missing field separator";
    return out;
  }
  const std::size_t c2 = line.find(',', c1 + 1);
  if (c2 == std::string_view::npos) {
    out.reason = "missing kind field";
    return out;
  }
  const std::string_view ts = line.substr(0, c1);
  const std::string_view pair = line.substr(c1 + 1, c2 - c1 - 1);
  // Extra columns beyond the third are ignored.
  std::size_t c3 = line.find(',', c2 + 1);
  const std::string_view kind = line.substr(
      c2 + 1, c3 == std::string_view::npos ? std::string_view::npos : c3 - c2 - 1);

  if (!parse_iso8601(ts, out.event.timestamp)) {
    out.reason = "unparseable timestamp";
    return out;
  }
  if (!is_valid_pair_code(pair)) {
    out.reason = "invalid pair code";
    return out;
  }
  if (kind == "Q") {
    out.event.kind = EventKind::Quote;
  } else if (kind == "T") {
    out.event.kind = EventKind::Trade;
  } else {
    out.reason = "unknown kind (expected Q or T)";
    return out;
  }
  out.event.pair = std::string(pair);
  out.ok = true;
  return out;
}

}  // namespace

TickStream parse_tick_file(std::istream& in, OrderPolicy policy) {
  std::vector<TickEvent> events;
  std::vector<Reject> rejects;
  std::string line;
  std::size_t line_number = 0;
  std::size_t data_lines = 0;
  bool first_content_line = true;

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    // Optional header: a first line starting with a non-digit.
    if (first_content_line) {
      first_content_line = false;
      if (!(line[0] >= '0' && line[0] <= '9')) continue;
    }
    ++data_lines;

    ParsedLine parsed = parse_line(line);
    if (!parsed.ok) {
      rejects.push_back(Reject{line_number, parsed.reason});
      continue;
    }
    if (policy == OrderPolicy::Strict && !events.empty() &&
        parsed.event.timestamp < events.back().timestamp) {
      throw Error(ErrorCode::Ordering,
                  "out-of-order timestamp at line " + std::to_string(line_number));
    }
    events.push_back(std::move(parsed.event));
  }

  if (data_lines > 0 && rejects.size() * 100 > data_lines) {
    throw Error(ErrorCode::Parse,
                "reject budget exceeded: " + std::to_string(rejects.size()) +
                    " of " + std::to_string(data_lines) + " lines malformed");
  }
  if (events.empty()) {
    throw Error(ErrorCode::EmptyStream, "no parseable events in input");
  }

  if (policy == OrderPolicy::SortLenient) {
    std::stable_sort(events.begin(), events.end(),
                     [](const TickEvent& a, const TickEvent& b) {
                       return a.timestamp < b.timestamp;
                     });
  }

  TickStream stream;
  stream.span = Interval{events.front().timestamp,
                         events.back().timestamp + 1};
  stream.pair_universe = collect_universe(events);
  stream.events = std::move(events);
  stream.rejects = std::move(rejects);
  return stream;
}

TickStream parse_tick_path(const std::filesystem::path& path, OrderPolicy policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open tick file: " + path.string());
  }
  return parse_tick_file(in, policy);
}

void serialize_tick_stream(const TickStream& stream, std::ostream& out) {
  out << "timestamp,pair,kind\n";
  for (const auto& e : stream.events) {
    out << format_iso8601(e.timestamp) << ',' << e.pair << ','
        << event_kind_char(e.kind) << '\n';
  }
}

TickStream filter_pairs(const TickStream& stream,
                        const std::vector<std::string>& include) {
  if (include.empty()) {
    throw Error(ErrorCode::Domain, "pair include-list is empty");
  }
  const std::set<std::string> wanted(include.begin(), include.end());
  bool any_known = false;
  for (const auto& p : stream.pair_universe) {
    if (wanted.count(p)) {
      any_known = true;
      break;
    }
  }
  if (!any_known) {
    throw Error(ErrorCode::EmptySelection,
                "no included pair occurs in the stream");
  }

  TickStream out;
  out.span = stream.span;
  out.rejects = stream.rejects;  // parse provenance travels with the stream
  for (const auto& e : stream.events) {
    if (wanted.count(e.pair)) out.events.push_back(e);
  }
  out.pair_universe = collect_universe(out.events);
  return out;
}

}  // namespace fxscale
