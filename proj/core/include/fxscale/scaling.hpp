#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fxscale/panel.hpp"

namespace fxscale {

// One (log mean, log variance) coordinate; natural logarithms throughout.
struct LogPoint {
  double log_mean = 0.0;
  double log_var = 0.0;
};

struct OlsLine {
  double slope = 0.0;
  double intercept = 0.0;
  double normr = 0.0;  // sqrt of the SUM of squared residuals
};

// Ordinary least squares of ordinate on abscissa. Throws InsufficientData
// for fewer than 2 points and Degenerate when the abscissa has no spread.
OlsLine fit_line(std::span<const LogPoint> points);

struct ExcludedPair {
  std::string pair;
  std::string reason;
};

// Fluctuation-scaling fit: variance = A * mean^(2*alpha), estimated as
// log Cov(X_i,X_i)(0) = log A + 2*alpha*log<X_i> over the usable pairs.
struct ScalingFit {
  double amplitude = 0.0;  // A
  double alpha = 0.0;
  double normr = 0.0;
  std::size_t n_used = 0;
  std::vector<ExcludedPair> excluded;
  std::vector<LogPoint> points;  // one per used pair, in pair order
};

// Pairs enter the fit when mean > 0, mean > min_mean and variance > 0;
// everything else is excluded with a reason (logs would be undefined).
ScalingFit fit_scaling(const ActivityPanel& panel, double min_mean = 0.0);

struct BootstrapResult {
  double estimate_mean = 0.0;
  double estimate_sd = 0.0;  // dispersion over replicates (1/B form)
  std::int64_t n_replicates = 0;
  std::int64_t points_per_replicate = 0;
  std::uint64_t seed = 0;
};

// m-out-of-n bootstrap of the scaling exponent: every replicate draws m bin
// indices with replacement (one index set shared by all pairs), recomputes
// means and variances on the restricted series and refits alpha. Replicates
// use counter-derived RNG streams, so the result is independent of execution
// order and fully determined by (seed, B, m). Replicates with fewer than two
// usable pairs are redrawn up to a retry cap and then counted as failed;
// more than 10% failures raises BootstrapDegeneracy.
BootstrapResult bootstrap_scaling(const ActivityPanel& panel, std::int64_t B,
                                  std::int64_t m, std::uint64_t seed,
                                  double min_mean = 0.0, unsigned threads = 1);

// Plain bootstrap (Q out of Q, with replacement) of the sample mean and the
// sample standard deviation of one series. The customary error bar is
// 2 * estimate_sd.
struct MomentsBootstrap {
  BootstrapResult mean_stat;
  BootstrapResult sd_stat;
};

MomentsBootstrap bootstrap_moments(std::span<const double> series,
                                   std::int64_t B, std::uint64_t seed);
MomentsBootstrap bootstrap_moments(std::span<const std::int64_t> series,
                                   std::int64_t B, std::uint64_t seed);

}  // namespace fxscale
