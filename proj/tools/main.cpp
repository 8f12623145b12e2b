// fxscale: fluctuation scaling and cross-correlation analytics for market
// activity count series. One binary, eight subcommands: synth, bin, fit,
// corr, pdlag, sweep, rolling, regress.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fxscale/errors.hpp"
#include "fxscale/io.hpp"
#include "fxscale/moments.hpp"
#include "fxscale/panel.hpp"
#include "fxscale/parallel.hpp"
#include "fxscale/rng.hpp"
#include "fxscale/scaling.hpp"
#include "fxscale/studies.hpp"
#include "fxscale/synthgen.hpp"
#include "fxscale/tick_data.hpp"
#include "fxscale/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fxscale;

namespace {

using Clock = std::chrono::steady_clock;

// Every run writes "<primary output>.manifest.json": config echo, input
// digests, output list, version and wall time.
void write_manifest(const std::string& command, const json& config,
                    const std::vector<fs::path>& inputs,
                    const std::vector<fs::path>& outputs, Clock::time_point start) {
  json m;
  m["command"] = command;
  m["config"] = config;
  json in = json::object();
  for (const auto& p : inputs) in[p.string()] = file_digest(p);
  m["inputs"] = in;
  json out = json::array();
  for (const auto& p : outputs) out.push_back(p.string());
  m["outputs"] = out;
  m["version"] = version();
  m["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                          Clock::now() - start)
                          .count();
  atomic_write_file(outputs.front().string() + ".manifest.json", m.dump(2) + "\n");
}

OrderPolicy policy_from_flag(bool lenient) {
  return lenient ? OrderPolicy::SortLenient : OrderPolicy::Strict;
}

// Largest dt-aligned window inside the stream span, used when the caller
// does not pin --t0/--t1 explicitly.
Interval default_window(const TickStream& stream, std::int64_t dt_minutes) {
  const std::int64_t dt_ms = dt_minutes * kMillisPerMinute;
  UtcMillis t0 = stream.span.begin;
  if (t0.ms % kMillisPerMinute != 0) {
    t0.ms += kMillisPerMinute - t0.ms % kMillisPerMinute;
  }
  const std::int64_t span_ms = stream.span.end.ms - t0.ms;
  if (span_ms < 2 * dt_ms) {
    throw Error(ErrorCode::Geometry,
                "stream span too short for two bins at dt=" +
                    std::to_string(dt_minutes));
  }
  return Interval{t0, UtcMillis{t0.ms + (span_ms / dt_ms) * dt_ms}};
}

struct CommonOpts {
  unsigned threads = default_thread_count();
  bool lenient = false;
};

struct SynthOpts {
  std::string spec_path;
  std::string ticks_out;
  std::string panel_out;
  std::string t0 = "2007-06-03";
  std::int64_t dt = 1;
  std::optional<std::uint64_t> seed_override;
};

int run_synth(const SynthOpts& opt, const CommonOpts& common) {
  const auto start = Clock::now();
  GenSpec spec = gen_spec_from_json_file(opt.spec_path);
  if (opt.seed_override) spec.seed = *opt.seed_override;
  const UtcMillis t0 = parse_time_arg(opt.t0);
  const Interval window{t0, add_minutes(t0, spec.bins * opt.dt)};

  json config{{"spec", opt.spec_path},
              {"t0", format_iso8601(t0)},
              {"dt_minutes", opt.dt},
              {"seed", spec.seed},
              {"threads", common.threads}};

  std::vector<fs::path> outputs;
  if (!opt.ticks_out.empty()) {
    const TickStream stream = gen_tick_stream(spec, window, opt.dt, common.threads);
    write_tick_csv(stream, opt.ticks_out);
    outputs.push_back(opt.ticks_out);
    outputs.push_back(opt.ticks_out + ".meta.json");
  }
  if (!opt.panel_out.empty()) {
    GenOptions gen_opts;
    gen_opts.t0 = t0;
    gen_opts.dt_minutes = opt.dt;
    const PanelPair panels = gen_panel(spec, gen_opts, common.threads);
    const fs::path quotes(opt.panel_out + ".quotes.csv");
    const fs::path trades(opt.panel_out + ".trades.csv");
    write_panel(panels.quotes, quotes);
    write_panel(panels.trades, trades);
    outputs.push_back(quotes);
    outputs.push_back(trades);
  }
  write_manifest("synth", config, {opt.spec_path}, outputs, start);
  return 0;
}

struct BinOpts {
  std::string in;
  std::string out;
  std::string kind = "quote";
  std::int64_t dt = 1;
  std::string t0, t1;
  std::vector<std::string> pairs;
  std::string rejects_out;
};

int run_bin(const BinOpts& opt, const CommonOpts& common) {
  const auto start = Clock::now();
  TickStream stream = parse_tick_stream_file(opt.in, policy_from_flag(common.lenient));
  if (!opt.pairs.empty()) stream = filter_pairs(stream, opt.pairs);

  Interval window;
  if (!opt.t0.empty() || !opt.t1.empty()) {
    if (opt.t0.empty() || opt.t1.empty()) {
      throw Error(ErrorCode::Domain, "--t0 and --t1 must be given together");
    }
    window = Interval{parse_time_arg(opt.t0), parse_time_arg(opt.t1)};
    stream.widen_span(window);
  } else {
    window = default_window(stream, opt.dt);
  }

  const EventKind kind =
      opt.kind == "trade" ? EventKind::Trade : EventKind::Quote;
  const std::vector<std::string>& rows =
      opt.pairs.empty() ? stream.pair_universe : opt.pairs;
  const ActivityPanel panel =
      bin_counts(stream, kind, opt.dt, window, rows, common.threads);
  write_panel(panel, opt.out);

  std::vector<fs::path> outputs{opt.out};
  if (!stream.rejects.empty()) {
    const fs::path rejects =
        opt.rejects_out.empty() ? fs::path(opt.out + ".rejects.json")
                                : fs::path(opt.rejects_out);
    atomic_write_file(rejects, rejects_to_json(stream.rejects));
    outputs.push_back(rejects);
    std::fprintf(stderr, "warning: %zu malformed lines recorded in %s\n",
                 stream.rejects.size(), rejects.string().c_str());
  }

  json config{{"in", opt.in},
              {"kind", opt.kind},
              {"dt_minutes", opt.dt},
              {"t0", format_iso8601(window.begin)},
              {"t1", format_iso8601(window.end)},
              {"pairs", opt.pairs},
              {"order", common.lenient ? "lenient" : "strict"},
              {"threads", common.threads}};
  write_manifest("bin", config, {opt.in}, outputs, start);
  return 0;
}

struct FitOpts {
  std::string in;
  std::string out;
  double min_mean = 0.0;
  bool bootstrap = false;
  std::int64_t B = 1000;
  std::int64_t m = 100;
  std::uint64_t seed = 0;
};

int run_fit(const FitOpts& opt, const CommonOpts& common) {
  const auto start = Clock::now();
  const ActivityPanel panel = read_panel(opt.in);
  const ScalingFit fit = fit_scaling(panel, opt.min_mean);
  std::optional<BootstrapResult> boot;
  if (opt.bootstrap) {
    boot = bootstrap_scaling(panel, opt.B, opt.m, opt.seed, opt.min_mean,
                             common.threads);
  }
  atomic_write_file(opt.out, fit_report_to_json(fit, boot));

  json config{{"in", opt.in},       {"min_mean", opt.min_mean},
              {"bootstrap", opt.bootstrap}, {"B", opt.B},
              {"m", opt.m},         {"seed", opt.seed},
              {"threads", common.threads}};
  write_manifest("fit", config, {opt.in}, {opt.out}, start);
  return 0;
}

struct CorrOpts {
  std::string in;
  std::string out;
  std::string csv_out;
  int tau = 0;
};

int run_corr(const CorrOpts& opt, const CommonOpts& common) {
  const auto start = Clock::now();
  const ActivityPanel panel = read_panel(opt.in);
  const CorrSummary summary = corr_matrix(panel, opt.tau, common.threads);
  atomic_write_file(opt.out, corr_summary_to_json(summary));
  std::vector<fs::path> outputs{opt.out};
  if (!opt.csv_out.empty()) {
    write_corr_csv(summary, opt.csv_out);
    outputs.push_back(opt.csv_out);
  }
  json config{{"in", opt.in}, {"tau", opt.tau}, {"threads", common.threads}};
  write_manifest("corr", config, {opt.in}, outputs, start);
  return 0;
}

struct PdlagOpts {
  std::string p_in;
  std::string d_in;
  std::string out;
  int tau_min = -30;
  int tau_max = 30;
  std::optional<int> matrix_at;
  std::string matrix_out;
};

int run_pdlag(const PdlagOpts& opt, const CommonOpts& common) {
  const auto start = Clock::now();
  const ActivityPanel p = read_panel(opt.p_in);
  const ActivityPanel d = read_panel(opt.d_in);
  const LagProfile profile =
      pd_lag_profile(p, d, opt.tau_min, opt.tau_max, common.threads);
  atomic_write_file(opt.out, lag_profile_to_csv(profile));
  std::printf("argmax_tau=%d\n", profile.argmax_tau);

  std::vector<fs::path> outputs{opt.out};
  if (opt.matrix_at) {
    if (opt.matrix_out.empty()) {
      throw Error(ErrorCode::Domain, "--matrix-at requires --matrix-out");
    }
    const PDCorrSummary m = pd_corr(p, d, *opt.matrix_at, common.threads);
    atomic_write_file(opt.matrix_out, pd_summary_to_json(m));
    outputs.push_back(opt.matrix_out);
  }
  json config{{"p_in", opt.p_in},       {"d_in", opt.d_in},
              {"tau_min", opt.tau_min}, {"tau_max", opt.tau_max},
              {"argmax_tau", profile.argmax_tau}, {"threads", common.threads}};
  write_manifest("pdlag", config, {opt.p_in, opt.d_in}, outputs, start);
  return 0;
}

struct SweepOpts {
  std::string in;
  std::string panel_in;
  std::string out;
  std::string kind = "quote";
  std::vector<std::int64_t> dt_list;
  std::string t0, t1;
  double min_mean = 0.0;
};

int run_sweep(const SweepOpts& opt, const CommonOpts& common) {
  const auto start = Clock::now();
  ActivityPanel base;
  std::vector<fs::path> inputs;
  if (!opt.panel_in.empty()) {
    base = read_panel(opt.panel_in);
    inputs.push_back(opt.panel_in);
  } else if (!opt.in.empty()) {
    TickStream stream =
        parse_tick_stream_file(opt.in, policy_from_flag(common.lenient));
    Interval window;
    if (!opt.t0.empty() && !opt.t1.empty()) {
      window = Interval{parse_time_arg(opt.t0), parse_time_arg(opt.t1)};
      stream.widen_span(window);
    } else {
      window = default_window(stream, 1);
    }
    const EventKind kind =
        opt.kind == "trade" ? EventKind::Trade : EventKind::Quote;
    base = bin_counts(stream, kind, 1, window, stream.pair_universe,
                      common.threads);
    inputs.push_back(opt.in);
  } else {
    throw Error(ErrorCode::Domain, "sweep needs --in ticks or --panel");
  }

  const SweepCurve curve = dt_sweep(base, opt.dt_list, opt.min_mean, common.threads);
  atomic_write_file(opt.out, sweep_to_csv(curve));

  json config{{"dt_list", opt.dt_list},
              {"kind", opt.kind},
              {"min_mean", opt.min_mean},
              {"threads", common.threads}};
  write_manifest("sweep", config, inputs, {opt.out}, start);
  return 0;
}

struct RollingOpts {
  std::string in;
  std::string out;
  std::string csv_out;
  std::string anchor = "sun@00:00";
  std::string t0, t1;
  std::int64_t dt = 1;
  std::int64_t B = 1000;
  std::int64_t m = 100;
  double min_mean = 0.0;
  std::uint64_t seed = 0;
  bool full_matrices = false;
  std::size_t break_window = 13;
};

int run_rolling(const RollingOpts& opt, const CommonOpts& common) {
  const auto start = Clock::now();
  TickStream stream =
      parse_tick_stream_file(opt.in, policy_from_flag(common.lenient));
  if (!opt.t0.empty() && !opt.t1.empty()) {
    stream.widen_span(
        Interval{parse_time_arg(opt.t0), parse_time_arg(opt.t1)});
  }
  const WindowPlan plan = plan_weeks(stream.span, WeekAnchor::parse(opt.anchor));

  RollingConfig config;
  config.dt_minutes = opt.dt;
  config.bootstrap_replicates = opt.B;
  config.bootstrap_points = opt.m;
  config.min_mean = opt.min_mean;
  config.seed = opt.seed;
  config.threads = common.threads;
  config.break_window = opt.break_window;
  const RollingReport report = rolling_weekly(stream, plan, config);

  bool any_partial = false;
  for (const auto& w : report.weeks) any_partial |= !w.flags.empty();
  if (any_partial) {
    std::fprintf(stderr, "warning: some weeks carry flags; see report\n");
  }

  atomic_write_file(opt.out, rolling_to_jsonl(report, opt.full_matrices));
  std::vector<fs::path> outputs{opt.out};
  if (!opt.csv_out.empty()) {
    atomic_write_file(opt.csv_out, rolling_to_csv(report));
    outputs.push_back(opt.csv_out);
  }

  json cfg{{"in", opt.in},
           {"anchor", opt.anchor},
           {"dt_minutes", opt.dt},
           {"B", opt.B},
           {"m", opt.m},
           {"min_mean", opt.min_mean},
           {"seed", opt.seed},
           {"weeks", plan.windows.size()},
           {"break_window", opt.break_window},
           {"threads", common.threads}};
  write_manifest("rolling", cfg, {opt.in}, outputs, start);
  return 0;
}

struct RegressOpts {
  std::string in;
  std::string out;
  std::string series = "P";
};

int run_regress(const RegressOpts& opt, const CommonOpts& common) {
  (void)common;
  const auto start = Clock::now();
  std::vector<double> alphas, corrs;

  std::ifstream in(opt.in);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + opt.in);
  const bool from_jsonl = fs::path(opt.in).extension() != ".csv";
  std::string line;
  if (from_jsonl) {
    const std::string fit_key = opt.series == "D" ? "fit_D" : "fit_P";
    const std::string corr_key = opt.series == "D" ? "corr_D" : "corr_P";
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json week;
      try {
        week = json::parse(line);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, "bad report line: " + std::string(e.what()));
      }
      if (week.value(fit_key, json(nullptr)).is_null() ||
          week.value(corr_key, json(nullptr)).is_null()) {
        continue;  // flagged week
      }
      alphas.push_back(week[fit_key]["alpha"].get<double>());
      corrs.push_back(week[corr_key]["global_avg"].get<double>());
    }
  } else {
    // Two-column CSV "alpha,corr" with an optional header.
    bool first = true;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (first && !(line[0] >= '0' && line[0] <= '9') && line[0] != '-') {
        first = false;
        continue;
      }
      first = false;
      const std::size_t comma = line.find(',');
      if (comma == std::string::npos) {
        throw Error(ErrorCode::Parse, "expected 'alpha,corr' row: " + line);
      }
      alphas.push_back(std::stod(line.substr(0, comma)));
      corrs.push_back(std::stod(line.substr(comma + 1)));
    }
  }

  const RegressionResult result = alpha_corr_regression(alphas, corrs);
  atomic_write_file(opt.out, regression_to_json(result));
  json config{{"in", opt.in}, {"series", opt.series}, {"n", result.n}};
  write_manifest("regress", config, {opt.in}, {opt.out}, start);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fluctuation scaling and cross-correlation analytics for "
               "market activity count series"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--threads", common.threads, "worker pool cap")
      ->envname("FXSCALE_THREADS");
  app.add_flag("--sort-lenient", common.lenient,
               "stably sort out-of-order tick input instead of failing");

  SynthOpts synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic tick data");
  synth_cmd->add_option("--spec", synth.spec_path, "generator spec JSON")
      ->required();
  synth_cmd->add_option("--out", synth.ticks_out, "tick CSV output path");
  synth_cmd->add_option("--panel-out", synth.panel_out,
                        "panel output prefix (writes .quotes.csv/.trades.csv)");
  synth_cmd->add_option("--t0", synth.t0, "window start (UTC)");
  synth_cmd->add_option("--dt", synth.dt, "bin width in minutes");
  synth_cmd->add_option("--seed", synth.seed_override, "override spec seed")
      ->envname("FXSCALE_SEED");

  BinOpts bin;
  auto* bin_cmd = app.add_subcommand("bin", "bin a tick file into a count panel");
  bin_cmd->add_option("--in", bin.in, "tick CSV input")->required();
  bin_cmd->add_option("--out", bin.out, "panel output (.csv or .fxp)")->required();
  bin_cmd->add_option("--kind", bin.kind, "quote or trade")
      ->check(CLI::IsMember({"quote", "trade"}));
  bin_cmd->add_option("--dt", bin.dt, "bin width in minutes");
  bin_cmd->add_option("--t0", bin.t0, "window start (UTC)");
  bin_cmd->add_option("--t1", bin.t1, "window end (UTC)");
  bin_cmd->add_option("--pairs", bin.pairs, "pair include-list")->delimiter(',');
  bin_cmd->add_option("--rejects-out", bin.rejects_out, "rejects report path");

  FitOpts fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit the fluctuation-scaling law");
  fit_cmd->add_option("--in", fit.in, "panel input")->required();
  fit_cmd->add_option("--out", fit.out, "fit report JSON")->required();
  fit_cmd->add_option("--min-mean", fit.min_mean, "exclude pairs at or below");
  fit_cmd->add_flag("--bootstrap", fit.bootstrap, "add bootstrap dispersion");
  fit_cmd->add_option("--B", fit.B, "bootstrap replicates")->envname("FXSCALE_B");
  fit_cmd->add_option("--m", fit.m, "points per replicate")->envname("FXSCALE_M");
  fit_cmd->add_option("--seed", fit.seed, "bootstrap seed")->envname("FXSCALE_SEED");

  CorrOpts corr;
  auto* corr_cmd = app.add_subcommand("corr", "lagged correlation matrix");
  corr_cmd->add_option("--in", corr.in, "panel input")->required();
  corr_cmd->add_option("--out", corr.out, "matrix JSON output")->required();
  corr_cmd->add_option("--csv-out", corr.csv_out, "matrix CSV output");
  corr_cmd->add_option("--tau", corr.tau, "lag in bins");

  PdlagOpts pdlag;
  auto* pdlag_cmd =
      app.add_subcommand("pdlag", "quote-trade cross-correlation lag profile");
  pdlag_cmd->add_option("--p-in", pdlag.p_in, "quote panel")->required();
  pdlag_cmd->add_option("--d-in", pdlag.d_in, "trade panel")->required();
  pdlag_cmd->add_option("--out", pdlag.out, "profile CSV output")->required();
  pdlag_cmd->add_option("--tau-min", pdlag.tau_min, "smallest lag");
  pdlag_cmd->add_option("--tau-max", pdlag.tau_max, "largest lag");
  pdlag_cmd->add_option("--matrix-at", pdlag.matrix_at, "also dump matrix at lag");
  pdlag_cmd->add_option("--matrix-out", pdlag.matrix_out, "matrix JSON path");

  SweepOpts sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "dt-dependence study");
  sweep_cmd->add_option("--in", sweep.in, "tick CSV input");
  sweep_cmd->add_option("--panel", sweep.panel_in, "dt=1 base panel input");
  sweep_cmd->add_option("--out", sweep.out, "sweep CSV output")->required();
  sweep_cmd->add_option("--kind", sweep.kind, "quote or trade")
      ->check(CLI::IsMember({"quote", "trade"}));
  sweep_cmd->add_option("--dt", sweep.dt_list, "dt list in minutes")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--t0", sweep.t0, "window start (UTC)");
  sweep_cmd->add_option("--t1", sweep.t1, "window end (UTC)");
  sweep_cmd->add_option("--min-mean", sweep.min_mean, "fit exclusion threshold");

  RollingOpts rolling;
  auto* rolling_cmd = app.add_subcommand("rolling", "weekly rolling study");
  rolling_cmd->add_option("--in", rolling.in, "tick CSV input")->required();
  rolling_cmd->add_option("--out", rolling.out, "report JSONL output")->required();
  rolling_cmd->add_option("--csv-out", rolling.csv_out, "flat CSV output");
  rolling_cmd->add_option("--anchor", rolling.anchor,
                          "week anchor (e.g. sun@00:00 or first)");
  rolling_cmd->add_option("--t0", rolling.t0, "pin span start (UTC)");
  rolling_cmd->add_option("--t1", rolling.t1, "pin span end (UTC)");
  rolling_cmd->add_option("--dt", rolling.dt, "bin width in minutes");
  rolling_cmd->add_option("--B", rolling.B, "bootstrap replicates")
      ->envname("FXSCALE_B");
  rolling_cmd->add_option("--m", rolling.m, "points per replicate")
      ->envname("FXSCALE_M");
  rolling_cmd->add_option("--min-mean", rolling.min_mean, "fit exclusion threshold");
  rolling_cmd->add_option("--seed", rolling.seed, "bootstrap master seed")
      ->envname("FXSCALE_SEED");
  rolling_cmd->add_flag("--full-matrices", rolling.full_matrices,
                        "embed correlation matrices in the JSONL report");
  rolling_cmd->add_option("--break-window", rolling.break_window,
                          "trailing weeks for the scaling-break flag");

  RegressOpts regress;
  auto* regress_cmd =
      app.add_subcommand("regress", "alpha vs global correlation regression");
  regress_cmd->add_option("--in", regress.in, "rolling report (.jsonl or .csv)")
      ->required();
  regress_cmd->add_option("--out", regress.out, "regression JSON output")
      ->required();
  regress_cmd->add_option("--series", regress.series, "P (quotes) or D (trades)")
      ->check(CLI::IsMember({"P", "D"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2; --help/--version exit 0
  }

  try {
    if (synth_cmd->parsed()) {
      if (synth.ticks_out.empty() && synth.panel_out.empty()) {
        throw Error(ErrorCode::Domain, "synth needs --out and/or --panel-out");
      }
      return run_synth(synth, common);
    }
    if (bin_cmd->parsed()) return run_bin(bin, common);
    if (fit_cmd->parsed()) return run_fit(fit, common);
    if (corr_cmd->parsed()) return run_corr(corr, common);
    if (pdlag_cmd->parsed()) return run_pdlag(pdlag, common);
    if (sweep_cmd->parsed()) return run_sweep(sweep, common);
    if (rolling_cmd->parsed()) return run_rolling(rolling, common);
    if (regress_cmd->parsed()) return run_regress(regress, common);
  } catch (const Error& e) {
    std::fprintf(stderr, "fxscale: %s error: %s\n", error_code_name(e.code()),
                 e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fxscale: %s\n", e.what());
    return 1;
  }
  return 0;
}
