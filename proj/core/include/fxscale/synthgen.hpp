#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fxscale/panel.hpp"
#include "fxscale/tick_data.hpp"

namespace fxscale {

// Doubly stochastic Poisson generator with a shared lognormal AR(1) factor
// and an optional per-pair idiosyncratic factor.
//
// A positive factor s(k) with mean 1 and variance coupling_v follows
// s(k) = exp(mu + h(k)), h(k) = rho*h(k-1) + sqrt(1-rho^2)*sigma*z(k),
// sigma^2 = ln(1 + v), mu = -sigma^2/2, h(0) ~ N(0, sigma^2). Each pair may
// additionally carry an independent factor u_i(k) with the same
// parameterization (variance idio_v, memory idio_memory). Quote counts are
// Poisson(rate_i * s(k) * u_i(k)) given the factors; trade counts are the
// binomial thinning of the quote counts with probability trade_fraction.
// coupling_v = idio_v = 0 gives independent Poisson panels.
//
// The idiosyncratic factor exists because lag profiles normalized by lag-tau
// own covariances cancel a purely shared factor: without pair-specific
// persistence the off-peak entries collapse to ratios of one common random
// term. Real activity series carry their own persistence; idio_v / idio_memory
// model it.
struct GenSpec {
  std::vector<std::string> pairs;
  std::vector<double> rates;   // base intensity per bin, one per pair, > 0
  std::int64_t bins = 0;       // Q
  double coupling_v = 0.0;     // shared factor variance, >= 0
  double factor_memory = 0.0;  // shared factor AR(1) rho in [0, 1)
  double idio_v = 0.0;         // per-pair factor variance, >= 0
  double idio_memory = 0.0;    // per-pair factor AR(1) rho in [0, 1)
  double trade_fraction = 0.0; // in [0, 1]
  std::uint64_t seed = 0;

  void validate() const;  // throws Error(Spec)
};

struct GenOptions {
  UtcMillis t0{1180828800000};  // 2007-06-03T00:00:00Z, a Sunday
  std::int64_t dt_minutes = 1;
};

struct PanelPair {
  ActivityPanel quotes;
  ActivityPanel trades;
};

// Seed-deterministic: the factor path has its own derived stream and each
// pair has its own, so generation is pair-parallel with identical output
// for any thread count.
PanelPair gen_panel(const GenSpec& spec, const GenOptions& opts = {},
                    unsigned threads = 1);

// Expands gen_panel counts into uniformly scattered timestamps within each
// bin. Binning the returned stream reproduces the generating panels exactly.
// window must equal [t0, t0 + Q*dt).
TickStream gen_tick_stream(const GenSpec& spec, Interval window,
                           std::int64_t dt_minutes, unsigned threads = 1);

// Closed-form lag-0 moments, exact for factor_memory == idio_memory == 0:
//   mean_i = rate_i,
//   var_i  = rate_i + W*rate_i^2 with W = (1+v)(1+idio_v) - 1,
//   cov_ij = v*rate_i*rate_j (i != j).
struct AnalyticMoments {
  std::vector<double> means;
  std::vector<double> variances;
  std::vector<std::vector<double>> covariances;  // N x N, diagonal = var
};

AnalyticMoments analytic_moments(const GenSpec& spec);

// GenSpec JSON round-trip ({"pairs": [...], "rates": [...], "bins": Q,
// "coupling_v": v, "factor_memory": rho, "trade_fraction": q, "seed": s}).
GenSpec gen_spec_from_json_file(const std::string& path);
std::string gen_spec_to_json(const GenSpec& spec);

}  // namespace fxscale
