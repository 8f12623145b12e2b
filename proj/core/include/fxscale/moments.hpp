#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fxscale/panel.hpp"

namespace fxscale {

// Temporal mean over the full series. Deterministic left-to-right summation.
double mean(std::span<const double> series);
double mean(std::span<const std::int64_t> series);

struct LaggedCov {
  double value = 0.0;
  int tau = 0;
  std::int64_t terms = 0;  // Q - |tau|, >= 1
};

// Lagged covariance with full-series means in both branches and the
// 1/(Q - |tau|) prefactor:
//   tau >= 0:  (1/(Q-tau)) sum_{k=0}^{Q-tau-1} (x(k)-<x>) (y(k+tau)-<y>)
//   tau <  0:  (1/(Q+tau)) sum_{k=0}^{Q+tau-1} (x(k-tau)-<x>) (y(k)-<y>)
// No Bessel correction. Satisfies lagged_cov(x,y,tau) == lagged_cov(y,x,-tau)
// exactly. Throws LagDomain when |tau| >= Q.
LaggedCov lagged_cov(std::span<const double> x, std::span<const double> y,
                     int tau);
LaggedCov lagged_cov(std::span<const std::int64_t> x,
                     std::span<const std::int64_t> y, int tau);

// Square matrix with NaN marking undefined entries.
struct CorrMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
  bool defined(std::size_t i, std::size_t j) const {
    return !std::isnan(at(i, j));
  }
};

// Same-activity correlation matrix: C_ij(tau) = Cov(X_i,X_j)(tau) /
// sqrt(Cov(X_i,X_i)(tau) * Cov(X_j,X_j)(tau)), with the lag-tau
// autocovariances under the root kept as written. Entries whose radicand is
// <= 0 are undefined. global_avg is the mean over defined upper-triangle
// entries (equal to 2/(N(N-1)) * sum_{i<j} C_ij when all are defined).
struct CorrSummary {
  int tau = 0;
  std::vector<std::string> pairs;
  CorrMatrix matrix;
  double global_avg = 0.0;
  double defined_fraction = 0.0;  // of the N(N-1)/2 off-diagonal entries
};

CorrSummary corr_matrix(const ActivityPanel& panel, int tau,
                        unsigned threads = 1);

// Mean of the defined simultaneous off-diagonal correlations. Requires
// tau == 0 and at least one defined entry.
double global_avg_corr(const CorrSummary& summary);

// Quote-vs-trade cross-correlation matrix: PD_ij(tau) = Cov(P_i,D_j)(tau) /
// sqrt(Cov(P_i,D_i)(tau) * Cov(P_j,D_j)(tau)). The denominator uses own-pair
// P-D covariances, as written, so an entry is defined only when both own-pair
// covariances are positive. global_avg is the mean over all defined entries
// of the full N x N matrix (equal to (1/N^2) * sum_{i,j} when all defined).
struct PDCorrSummary {
  int tau = 0;
  std::vector<std::string> pairs;
  CorrMatrix matrix;
  double global_avg = 0.0;
  double defined_fraction = 0.0;  // of all N^2 entries
};

PDCorrSummary pd_corr(const ActivityPanel& p_panel, const ActivityPanel& d_panel,
                      int tau, unsigned threads = 1);

}  // namespace fxscale
