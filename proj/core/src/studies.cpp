#include "fxscale/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fxscale/errors.hpp"
#include "fxscale/parallel.hpp"
#include "fxscale/rng.hpp"

namespace fxscale {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

SweepCurve dt_sweep(const ActivityPanel& base_panel,
                    const std::vector<std::int64_t>& dt_list, double min_mean,
                    unsigned threads) {
  base_panel.validate();
  if (base_panel.dt_minutes != 1) {
    throw Error(ErrorCode::Domain, "sweep expects a dt=1 base panel");
  }
  if (dt_list.empty()) {
    throw Error(ErrorCode::Domain, "empty dt list");
  }
  for (std::size_t i = 1; i < dt_list.size(); ++i) {
    if (dt_list[i] <= dt_list[i - 1]) {
      throw Error(ErrorCode::Domain, "dt list must be strictly increasing");
    }
  }

  SweepCurve curve;
  for (std::int64_t dt : dt_list) {
    SweepRow row;
    row.dt_minutes = dt;
    row.alpha = row.global_corr = row.normr = kNaN;
    try {
      const ActivityPanel panel = rebin(base_panel, dt);
      const ScalingFit fit = fit_scaling(panel, min_mean);
      row.alpha = fit.alpha;
      row.normr = fit.normr;
      const CorrSummary corr = corr_matrix(panel, 0, threads);
      row.global_corr = corr.global_avg;
    } catch (const Error& e) {
      row.flag = std::string(error_code_name(e.code())) + ": " + e.what();
    }
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

LagProfile pd_lag_profile(const ActivityPanel& p_panel,
                          const ActivityPanel& d_panel, int tau_min,
                          int tau_max, unsigned threads) {
  if (tau_min > tau_max) {
    throw Error(ErrorCode::Domain, "tau_min must be <= tau_max");
  }
  const std::int64_t q = p_panel.num_bins();
  if (std::abs(tau_min) >= q || std::abs(tau_max) >= q) {
    throw Error(ErrorCode::LagDomain, "lag range exceeds Q-1");
  }

  LagProfile profile;
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int tau = tau_min; tau <= tau_max; ++tau) {
    LagProfileRow row;
    row.tau = tau;
    row.global_avg = kNaN;
    try {
      const PDCorrSummary s = pd_corr(p_panel, d_panel, tau, threads);
      row.global_avg = s.global_avg;
      row.defined_fraction = s.defined_fraction;
      // Ties resolve toward the smallest |tau|.
      if (s.global_avg > best ||
          (s.global_avg == best && std::abs(tau) < std::abs(profile.argmax_tau))) {
        best = s.global_avg;
        profile.argmax_tau = tau;
        any = true;
      }
    } catch (const Error& e) {
      row.flag = std::string(error_code_name(e.code())) + ": " + e.what();
    }
    profile.rows.push_back(std::move(row));
  }
  if (!any) {
    throw Error(ErrorCode::Degenerate, "every lag in the profile is undefined");
  }
  return profile;
}

namespace {

void apply_break_flags(RollingReport& report, std::size_t window,
                       double mad_factor) {
  // Trailing median + MAD rule over the normr series of the quote fits.
  std::vector<double> history;
  for (auto& week : report.weeks) {
    if (!week.fit_quotes) continue;
    const double normr = week.fit_quotes->normr;
    history.push_back(normr);
    const std::size_t lo = history.size() > window ? history.size() - window : 0;
    std::vector<double> recent(history.begin() + static_cast<std::ptrdiff_t>(lo),
                               history.end());
    std::sort(recent.begin(), recent.end());
    const double median = recent[recent.size() / 2];
    std::vector<double> dev;
    dev.reserve(recent.size());
    for (double v : recent) dev.push_back(std::fabs(v - median));
    std::sort(dev.begin(), dev.end());
    const double mad = dev[dev.size() / 2];
    if (recent.size() >= 3 && normr > median + mad_factor * mad && mad > 0.0) {
      week.flags.push_back("scaling_break");
    }
  }
}

}  // namespace

RollingReport rolling_weekly(const TickStream& stream, const WindowPlan& plan,
                             const RollingConfig& config) {
  if (plan.windows.empty()) {
    throw Error(ErrorCode::Domain, "empty window plan");
  }
  for (const Interval& w : plan.windows) {
    if (!stream.span.covers(w)) {
      throw Error(ErrorCode::Coverage, "plan window outside stream span");
    }
  }
  if (kMinutesPerWeek % config.dt_minutes != 0) {
    throw Error(ErrorCode::Geometry, "dt must divide the week length");
  }

  RollingReport report;
  report.weeks.resize(plan.windows.size());

  // Weeks are independent units; each gets deterministic derived seeds.
  parallel_for(plan.windows.size(), config.threads,
               [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      WeekResult& week = report.weeks[w];
      week.label = plan.labels[w];
      week.window = plan.windows[w];

      const ActivityPanel p = bin_counts(stream, EventKind::Quote,
                                         config.dt_minutes, week.window,
                                         stream.pair_universe);
      const ActivityPanel d = bin_counts(stream, EventKind::Trade,
                                         config.dt_minutes, week.window,
                                         stream.pair_universe);

      auto guarded = [&week](const char* what, auto&& fn) {
        try {
          fn();
        } catch (const Error& e) {
          week.flags.push_back(std::string(what) + ":" +
                               error_code_name(e.code()));
        }
      };

      guarded("fit_P", [&] { week.fit_quotes = fit_scaling(p, config.min_mean); });
      guarded("fit_D", [&] { week.fit_trades = fit_scaling(d, config.min_mean); });
      guarded("corr_P", [&] { week.corr_quotes = corr_matrix(p, 0); });
      guarded("corr_D", [&] { week.corr_trades = corr_matrix(d, 0); });
      guarded("pd", [&] { week.pd_global = pd_corr(p, d, 0).global_avg; });
      guarded("bootstrap_P", [&] {
        week.bootstrap_quotes = bootstrap_scaling(
            p, config.bootstrap_replicates, config.bootstrap_points,
            derive_seed(config.seed, "week_quotes", w), config.min_mean);
      });
      guarded("bootstrap_D", [&] {
        week.bootstrap_trades = bootstrap_scaling(
            d, config.bootstrap_replicates, config.bootstrap_points,
            derive_seed(config.seed, "week_trades", w), config.min_mean);
      });
    }
  });

  apply_break_flags(report, config.break_window, config.break_mad_factor);
  return report;
}

RegressionResult alpha_corr_regression(const std::vector<double>& alphas,
                                       const std::vector<double>& corrs) {
  if (alphas.size() != corrs.size()) {
    throw Error(ErrorCode::Domain, "series lengths differ");
  }
  const std::size_t n = alphas.size();
  if (n < 2) {
    throw Error(ErrorCode::InsufficientData, "need at least 2 weeks");
  }
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += alphas[i];
    sy += corrs[i];
  }
  const double xbar = sx / static_cast<double>(n);
  const double ybar = sy / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = alphas[i] - xbar;
    const double dy = corrs[i] - ybar;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0)) {
    throw Error(ErrorCode::Degenerate, "zero variance in the alpha series");
  }

  RegressionResult out;
  out.n = n;
  out.slope = sxy / sxx;
  out.intercept = ybar - out.slope * xbar;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = corrs[i] - out.slope * alphas[i] - out.intercept;
    rss += r * r;
  }
  out.rms = std::sqrt(rss);
  out.pearson_r = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return out;
}

std::vector<std::pair<double, double>> alpha_corr_points(
    const RollingReport& report, EventKind kind) {
  std::vector<std::pair<double, double>> points;
  for (const auto& week : report.weeks) {
    const auto& fit =
        kind == EventKind::Quote ? week.fit_quotes : week.fit_trades;
    const auto& corr =
        kind == EventKind::Quote ? week.corr_quotes : week.corr_trades;
    if (fit && corr) {
      points.emplace_back(fit->alpha, corr->global_avg);
    }
  }
  return points;
}

}  // namespace fxscale
