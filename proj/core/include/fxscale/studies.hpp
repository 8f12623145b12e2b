#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fxscale/moments.hpp"
#include "fxscale/panel.hpp"
#include "fxscale/scaling.hpp"
#include "fxscale/tick_data.hpp"

namespace fxscale {

// One row of the dt-dependence study. Degenerate fits are carried as flagged
// rows (NaN statistics + reason) instead of aborting the sweep.
struct SweepRow {
  std::int64_t dt_minutes = 0;
  double alpha = 0.0;
  double global_corr = 0.0;
  double normr = 0.0;
  std::string flag;  // empty when the row is clean
};

struct SweepCurve {
  std::vector<SweepRow> rows;  // dt strictly increasing
};

// Rebin a dt=1 base panel to each requested width and recompute the scaling
// fit and the simultaneous global average correlation.
SweepCurve dt_sweep(const ActivityPanel& base_panel,
                    const std::vector<std::int64_t>& dt_list,
                    double min_mean = 0.0, unsigned threads = 1);

struct LagProfileRow {
  int tau = 0;
  double global_avg = 0.0;
  double defined_fraction = 0.0;
  std::string flag;
};

struct LagProfile {
  std::vector<LagProfileRow> rows;
  int argmax_tau = 0;  // over defined rows
};

LagProfile pd_lag_profile(const ActivityPanel& p_panel,
                          const ActivityPanel& d_panel, int tau_min,
                          int tau_max, unsigned threads = 1);

struct RollingConfig {
  std::int64_t dt_minutes = 1;
  std::int64_t bootstrap_replicates = 1000;  // B
  std::int64_t bootstrap_points = 100;       // m
  double min_mean = 0.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Scaling-break flag: normr above rolling median + 2*MAD of the trailing
  // `break_window` weeks (an operational rule, configurable).
  std::size_t break_window = 13;
  double break_mad_factor = 2.0;
};

struct WeekResult {
  std::string label;
  Interval window;
  std::optional<ScalingFit> fit_quotes;
  std::optional<ScalingFit> fit_trades;
  std::optional<CorrSummary> corr_quotes;   // tau = 0
  std::optional<CorrSummary> corr_trades;   // tau = 0
  std::optional<double> pd_global;          // <PD>(0)
  std::optional<BootstrapResult> bootstrap_quotes;
  std::optional<BootstrapResult> bootstrap_trades;
  std::vector<std::string> flags;
};

struct RollingReport {
  std::vector<WeekResult> weeks;
};

// Weekly rolling study: per planned window build both panels, fit the
// scaling law (normr time series), compute tau=0 correlation summaries,
// <PD>(0) and bootstrap dispersions. Weeks are independent and processed
// with per-week derived bootstrap seeds, so the report does not depend on
// scheduling. Failed statistics become flags, not aborts.
RollingReport rolling_weekly(const TickStream& stream, const WindowPlan& plan,
                             const RollingConfig& config);

struct RegressionResult {
  double slope = 0.0;      // a
  double intercept = 0.0;  // b
  double rms = 0.0;        // sqrt of the SUM of squared residuals
  double pearson_r = 0.0;
  std::size_t n = 0;
};

// OLS of global average correlation on the scaling exponent across weeks,
// plus the Pearson correlation of the two series.
RegressionResult alpha_corr_regression(const std::vector<double>& alphas,
                                       const std::vector<double>& corrs);

// Convenience: pull (alpha, <C>) pairs for one activity kind out of a
// report, skipping weeks where either statistic is flagged/missing.
std::vector<std::pair<double, double>> alpha_corr_points(
    const RollingReport& report, EventKind kind);

}  // namespace fxscale
