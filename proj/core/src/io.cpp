#include "fxscale/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fxscale/errors.hpp"
#include "fxscale/rng.hpp"

namespace fxscale {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json json_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

std::string kind_name(EventKind k) {
  return k == EventKind::Quote ? "quote" : "trade";
}

EventKind kind_from_name(const std::string& name) {
  if (name == "quote") return EventKind::Quote;
  if (name == "trade") return EventKind::Trade;
  throw Error(ErrorCode::Parse, "unknown kind '" + name + "'");
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".meta.json");
}

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64_le(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return v;
}

}  // namespace

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::Io,
                "rename " + tmp.string() + " -> " + path.string() + " failed: " +
                    ec.message());
  }
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

// --- Panels -------------------------------------------------------------

namespace {

std::string panel_sidecar_json(const ActivityPanel& panel) {
  json j;
  j["kind"] = kind_name(panel.kind);
  j["dt_minutes"] = panel.dt_minutes;
  j["t0"] = format_iso8601(panel.window.begin);
  j["t1"] = format_iso8601(panel.window.end);
  return j.dump(2) + "\n";
}

void read_panel_sidecar(const std::filesystem::path& csv_path,
                        ActivityPanel& panel) {
  const auto meta = sidecar_path(csv_path);
  std::ifstream in(meta);
  if (!in) {
    throw Error(ErrorCode::Io,
                "missing panel sidecar " + meta.string() +
                    " (expected next to " + csv_path.string() + ")");
  }
  json j;
  try {
    in >> j;
    panel.kind = kind_from_name(j.at("kind").get<std::string>());
    panel.dt_minutes = j.at("dt_minutes").get<std::int64_t>();
    panel.window.begin = parse_time_arg(j.at("t0").get<std::string>());
    panel.window.end = parse_time_arg(j.at("t1").get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse,
                "invalid panel sidecar " + meta.string() + ": " + e.what());
  }
}

}  // namespace

void write_panel_csv(const ActivityPanel& panel,
                     const std::filesystem::path& path) {
  panel.validate();
  const std::int64_t q = panel.num_bins();
  std::string out;
  out.reserve(panel.counts.size() * 4 + 16 * static_cast<std::size_t>(q));
  out += "pair";
  for (std::int64_t k = 0; k < q; ++k) {
    out += ",bin_";
    out += std::to_string(k);
  }
  out += '\n';
  char buf[24];
  for (std::size_t i = 0; i < panel.num_pairs(); ++i) {
    out += panel.pairs[i];
    for (std::int64_t c : panel.row(i)) {
      std::snprintf(buf, sizeof(buf), ",%lld", static_cast<long long>(c));
      out += buf;
    }
    out += '\n';
  }
  atomic_write_file(path, out);
  atomic_write_file(sidecar_path(path), panel_sidecar_json(panel));
}

ActivityPanel read_panel_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open panel " + path.string());

  ActivityPanel panel;
  read_panel_sidecar(path, panel);

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::Parse, "empty panel file " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("pair,", 0) != 0) {
    throw Error(ErrorCode::Parse, "panel CSV must start with a 'pair,...' header");
  }
  std::size_t q_header = 0;
  for (char c : line) q_header += c == ',';

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t pos = line.find(',');
    if (pos == std::string::npos) {
      throw Error(ErrorCode::Parse, "panel row without counts at line " +
                                        std::to_string(line_no));
    }
    panel.pairs.push_back(line.substr(0, pos));
    std::size_t cells = 0;
    while (pos != std::string::npos) {
      const std::size_t next = line.find(',', pos + 1);
      const char* begin = line.data() + pos + 1;
      const char* end =
          next == std::string::npos ? line.data() + line.size() : line.data() + next;
      std::int64_t value = 0;
      const auto [p, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || p != end || value < 0) {
        throw Error(ErrorCode::Parse, "bad count at line " + std::to_string(line_no));
      }
      panel.counts.push_back(value);
      ++cells;
      pos = next;
    }
    if (cells != q_header) {
      throw Error(ErrorCode::Parse, "row length mismatch at line " +
                                        std::to_string(line_no));
    }
  }
  panel.validate();
  if (static_cast<std::size_t>(panel.num_bins()) != q_header) {
    throw Error(ErrorCode::Parse,
                "sidecar geometry disagrees with CSV column count");
  }
  return panel;
}

void write_panel_fxp1(const ActivityPanel& panel,
                      const std::filesystem::path& path) {
  panel.validate();
  const std::size_t n = panel.num_pairs();
  const std::size_t q = static_cast<std::size_t>(panel.num_bins());
  std::string out;
  out.reserve(32 + panel.counts.size() * 8);
  out += "FXP1";
  put_u64_le(out, n);
  put_u64_le(out, q);
  put_u64_le(out, panel.kind == EventKind::Quote ? 0 : 1);
  put_u64_le(out, static_cast<std::uint64_t>(panel.dt_minutes));
  put_u64_le(out, static_cast<std::uint64_t>(panel.window.begin.ms));
  put_u64_le(out, static_cast<std::uint64_t>(panel.window.end.ms));
  for (const auto& pair : panel.pairs) {
    put_u64_le(out, pair.size());
    out += pair;
  }
  // Bin-major (columnar): all pairs for bin 0, then bin 1, ...
  for (std::size_t k = 0; k < q; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      put_u64_le(out, static_cast<std::uint64_t>(panel.counts[i * q + k]));
    }
  }
  atomic_write_file(path, out);
}

ActivityPanel read_panel_fxp1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open panel " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (data.size() < 52 || data.compare(0, 4, "FXP1") != 0) {
    throw Error(ErrorCode::Parse, "not an FXP1 panel: " + path.string());
  }
  std::size_t off = 4;
  auto take_u64 = [&]() {
    if (off + 8 > data.size()) {
      throw Error(ErrorCode::Parse, "truncated FXP1 panel");
    }
    const std::uint64_t v = get_u64_le(data.data() + off);
    off += 8;
    return v;
  };
  ActivityPanel panel;
  const std::uint64_t n = take_u64();
  const std::uint64_t q = take_u64();
  panel.kind = take_u64() == 0 ? EventKind::Quote : EventKind::Trade;
  panel.dt_minutes = static_cast<std::int64_t>(take_u64());
  panel.window.begin.ms = static_cast<std::int64_t>(take_u64());
  panel.window.end.ms = static_cast<std::int64_t>(take_u64());
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t len = take_u64();
    if (off + len > data.size()) {
      throw Error(ErrorCode::Parse, "truncated FXP1 pair table");
    }
    panel.pairs.emplace_back(data.data() + off, len);
    off += len;
  }
  panel.counts.assign(n * q, 0);
  for (std::uint64_t k = 0; k < q; ++k) {
    for (std::uint64_t i = 0; i < n; ++i) {
      panel.counts[i * q + k] = static_cast<std::int64_t>(take_u64());
    }
  }
  if (off != data.size()) {
    throw Error(ErrorCode::Parse, "trailing bytes in FXP1 panel");
  }
  panel.validate();
  return panel;
}

void write_panel(const ActivityPanel& panel, const std::filesystem::path& path) {
  if (path.extension() == ".fxp") {
    write_panel_fxp1(panel, path);
  } else {
    write_panel_csv(panel, path);
  }
}

ActivityPanel read_panel(const std::filesystem::path& path) {
  if (path.extension() == ".fxp") return read_panel_fxp1(path);
  return read_panel_csv(path);
}

// --- Tick streams --------------------------------------------------------

void write_tick_csv(const TickStream& stream, const std::filesystem::path& path) {
  std::ostringstream out;
  serialize_tick_stream(stream, out);
  atomic_write_file(path, out.str());
  json meta;
  meta["t0"] = format_iso8601(stream.span.begin);
  meta["t1"] = format_iso8601(stream.span.end);
  atomic_write_file(sidecar_path(path), meta.dump(2) + "\n");
}

TickStream parse_tick_stream_file(const std::filesystem::path& path,
                                  OrderPolicy policy) {
  TickStream stream = parse_tick_path(path, policy);
  const auto meta = sidecar_path(path);
  std::ifstream in(meta);
  if (in) {
    try {
      json j;
      in >> j;
      stream.widen_span(Interval{parse_time_arg(j.at("t0").get<std::string>()),
                                 parse_time_arg(j.at("t1").get<std::string>())});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse,
                  "invalid tick sidecar " + meta.string() + ": " + e.what());
    }
  }
  return stream;
}

std::string rejects_to_json(const std::vector<Reject>& rejects) {
  json arr = json::array();
  for (const auto& r : rejects) {
    arr.push_back({{"line_number", r.line_number}, {"reason", r.reason}});
  }
  return arr.dump(2) + "\n";
}

// --- Analysis reports ----------------------------------------------------

namespace {

json matrix_to_json(const CorrMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.n; ++j) row.push_back(json_or_null(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string matrix_csv(const std::vector<std::string>& pairs,
                       const CorrMatrix& m) {
  std::string out = "pair";
  for (const auto& p : pairs) {
    out += ',';
    out += p;
  }
  out += '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    out += pairs[i];
    for (std::size_t j = 0; j < m.n; ++j) {
      out += ',';
      out += std::isnan(m.at(i, j)) ? "nan" : fmt_double(m.at(i, j));
    }
    out += '\n';
  }
  return out;
}

json bootstrap_to_json(const BootstrapResult& b) {
  return json{{"mean", b.estimate_mean},
              {"sd", b.estimate_sd},
              {"B", b.n_replicates},
              {"m", b.points_per_replicate},
              {"seed", b.seed}};
}

json fit_to_json(const ScalingFit& fit) {
  json excluded = json::array();
  for (const auto& e : fit.excluded) {
    excluded.push_back({{"pair", e.pair}, {"reason", e.reason}});
  }
  json points = json::array();
  for (const auto& p : fit.points) {
    points.push_back(json::array({p.log_mean, p.log_var}));
  }
  return json{{"alpha", fit.alpha},   {"A", fit.amplitude},
              {"normr", fit.normr},   {"n_used", fit.n_used},
              {"excluded", excluded}, {"points", points}};
}

}  // namespace

std::string corr_summary_to_json(const CorrSummary& summary) {
  json j;
  j["tau"] = summary.tau;
  j["pairs"] = summary.pairs;
  j["matrix"] = matrix_to_json(summary.matrix);
  j["global_avg"] = summary.global_avg;
  j["defined_fraction"] = summary.defined_fraction;
  return j.dump(2) + "\n";
}

std::string pd_summary_to_json(const PDCorrSummary& summary) {
  json j;
  j["tau"] = summary.tau;
  j["pairs"] = summary.pairs;
  j["matrix"] = matrix_to_json(summary.matrix);
  j["global_avg"] = summary.global_avg;
  j["defined_fraction"] = summary.defined_fraction;
  return j.dump(2) + "\n";
}

void write_corr_csv(const CorrSummary& summary,
                    const std::filesystem::path& path) {
  atomic_write_file(path, matrix_csv(summary.pairs, summary.matrix));
}

void write_pd_corr_csv(const PDCorrSummary& summary,
                       const std::filesystem::path& path) {
  atomic_write_file(path, matrix_csv(summary.pairs, summary.matrix));
}

std::string fit_report_to_json(const ScalingFit& fit,
                               const std::optional<BootstrapResult>& bootstrap) {
  json j = fit_to_json(fit);
  j["bootstrap"] = bootstrap ? bootstrap_to_json(*bootstrap) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string sweep_to_csv(const SweepCurve& curve) {
  std::string out = "dt_minutes,alpha,global_corr,normr\n";
  for (const auto& row : curve.rows) {
    out += std::to_string(row.dt_minutes);
    out += ',';
    out += std::isnan(row.alpha) ? "nan" : fmt_double(row.alpha);
    out += ',';
    out += std::isnan(row.global_corr) ? "nan" : fmt_double(row.global_corr);
    out += ',';
    out += std::isnan(row.normr) ? "nan" : fmt_double(row.normr);
    out += '\n';
  }
  return out;
}

std::string lag_profile_to_csv(const LagProfile& profile) {
  std::string out = "tau,global_avg\n";
  for (const auto& row : profile.rows) {
    out += std::to_string(row.tau);
    out += ',';
    out += std::isnan(row.global_avg) ? "nan" : fmt_double(row.global_avg);
    out += '\n';
  }
  return out;
}

namespace {

json week_to_json(const WeekResult& week, bool include_matrices) {
  json j;
  j["label"] = week.label;
  j["t0"] = format_iso8601(week.window.begin);
  j["t1"] = format_iso8601(week.window.end);
  j["flags"] = week.flags;
  j["fit_P"] = week.fit_quotes ? fit_to_json(*week.fit_quotes) : json(nullptr);
  j["fit_D"] = week.fit_trades ? fit_to_json(*week.fit_trades) : json(nullptr);
  auto corr_json = [include_matrices](const std::optional<CorrSummary>& c) {
    if (!c) return json(nullptr);
    json out{{"global_avg", c->global_avg},
             {"defined_fraction", c->defined_fraction}};
    if (include_matrices) out["matrix"] = matrix_to_json(c->matrix);
    return out;
  };
  j["corr_P"] = corr_json(week.corr_quotes);
  j["corr_D"] = corr_json(week.corr_trades);
  j["pd_global_0"] =
      week.pd_global ? json(*week.pd_global) : json(nullptr);
  j["bootstrap_P"] = week.bootstrap_quotes
                         ? bootstrap_to_json(*week.bootstrap_quotes)
                         : json(nullptr);
  j["bootstrap_D"] = week.bootstrap_trades
                         ? bootstrap_to_json(*week.bootstrap_trades)
                         : json(nullptr);
  return j;
}

std::string opt_stat(const std::optional<double>& v) {
  return v ? fmt_double(*v) : "nan";
}

}  // namespace

std::string rolling_to_jsonl(const RollingReport& report,
                             bool include_matrices) {
  std::string out;
  for (const auto& week : report.weeks) {
    out += week_to_json(week, include_matrices).dump();
    out += '\n';
  }
  return out;
}

std::string rolling_to_csv(const RollingReport& report) {
  std::string out =
      "week_label,alpha_P,alpha_P_sd,normr_P,alpha_D,alpha_D_sd,normr_D,"
      "avgcorr_P,avgcorr_D,pd0,flags\n";
  for (const auto& w : report.weeks) {
    out += w.label;
    out += ',';
    out += opt_stat(w.fit_quotes ? std::optional<double>(w.fit_quotes->alpha)
                                 : std::nullopt);
    out += ',';
    out += opt_stat(w.bootstrap_quotes
                        ? std::optional<double>(w.bootstrap_quotes->estimate_sd)
                        : std::nullopt);
    out += ',';
    out += opt_stat(w.fit_quotes ? std::optional<double>(w.fit_quotes->normr)
                                 : std::nullopt);
    out += ',';
    out += opt_stat(w.fit_trades ? std::optional<double>(w.fit_trades->alpha)
                                 : std::nullopt);
    out += ',';
    out += opt_stat(w.bootstrap_trades
                        ? std::optional<double>(w.bootstrap_trades->estimate_sd)
                        : std::nullopt);
    out += ',';
    out += opt_stat(w.fit_trades ? std::optional<double>(w.fit_trades->normr)
                                 : std::nullopt);
    out += ',';
    out += opt_stat(w.corr_quotes
                        ? std::optional<double>(w.corr_quotes->global_avg)
                        : std::nullopt);
    out += ',';
    out += opt_stat(w.corr_trades
                        ? std::optional<double>(w.corr_trades->global_avg)
                        : std::nullopt);
    out += ',';
    out += opt_stat(w.pd_global);
    out += ',';
    for (std::size_t i = 0; i < w.flags.size(); ++i) {
      if (i) out += ';';
      out += w.flags[i];
    }
    out += '\n';
  }
  return out;
}

std::string regression_to_json(const RegressionResult& r) {
  json j{{"a", r.slope},
         {"b", r.intercept},
         {"rms", r.rms},
         {"pearson_r", r.pearson_r},
         {"n", r.n}};
  return j.dump(2) + "\n";
}

}  // namespace fxscale
