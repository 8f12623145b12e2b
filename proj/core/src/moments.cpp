#include "fxscale/moments.hpp"

#include <cstdlib>
#include <limits>

#include "fxscale/errors.hpp"
#include "fxscale/parallel.hpp"

namespace fxscale {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename T>
double mean_impl(std::span<const T> series) {
  if (series.empty()) {
    throw Error(ErrorCode::Domain, "mean of empty series");
  }
  double sum = 0.0;
  for (T v : series) sum += static_cast<double>(v);
  return sum / static_cast<double>(series.size());
}

// Centered lagged product sum with precomputed full-series means.
double centered_sum(std::span<const double> x, double mx,
                    std::span<const double> y, double my, int tau) {
  const std::int64_t q = static_cast<std::int64_t>(x.size());
  double sum = 0.0;
  if (tau >= 0) {
    for (std::int64_t k = 0; k < q - tau; ++k) {
      sum += (x[static_cast<std::size_t>(k)] - mx) *
             (y[static_cast<std::size_t>(k + tau)] - my);
    }
  } else {
    for (std::int64_t k = 0; k < q + tau; ++k) {
      sum += (x[static_cast<std::size_t>(k - tau)] - mx) *
             (y[static_cast<std::size_t>(k)] - my);
    }
  }
  return sum;
}

LaggedCov lagged_cov_impl(std::span<const double> x, std::span<const double> y,
                          int tau) {
  const std::int64_t q = static_cast<std::int64_t>(x.size());
  if (x.size() != y.size()) {
    throw Error(ErrorCode::Domain, "series lengths differ");
  }
  if (q == 0 || std::abs(tau) >= q) {
    throw Error(ErrorCode::LagDomain,
                "|tau|=" + std::to_string(std::abs(tau)) +
                    " out of range for Q=" + std::to_string(q));
  }
  const double mx = mean_impl(x);
  const double my = mean_impl(y);
  LaggedCov out;
  out.tau = tau;
  out.terms = q - std::abs(tau);
  out.value = centered_sum(x, mx, y, my, tau) / static_cast<double>(out.terms);
  return out;
}

// Row-major double copy of a count panel plus per-row means.
struct PanelView {
  std::size_t n = 0;
  std::size_t q = 0;
  std::vector<double> data;
  std::vector<double> means;

  explicit PanelView(const ActivityPanel& panel) {
    n = panel.num_pairs();
    q = static_cast<std::size_t>(panel.num_bins());
    data.resize(n * q);
    means.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto src = panel.row(i);
      double sum = 0.0;
      for (std::size_t k = 0; k < q; ++k) {
        const double v = static_cast<double>(src[k]);
        data[i * q + k] = v;
        sum += v;
      }
      means[i] = sum / static_cast<double>(q);
    }
  }

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * q, q};
  }
};

double prefactored_cov(const PanelView& a, std::size_t i, const PanelView& b,
                       std::size_t j, int tau) {
  const double s = centered_sum(a.row(i), a.means[i], b.row(j), b.means[j], tau);
  return s / static_cast<double>(static_cast<std::int64_t>(a.q) - std::abs(tau));
}

}  // namespace

double mean(std::span<const double> series) { return mean_impl(series); }
double mean(std::span<const std::int64_t> series) { return mean_impl(series); }

LaggedCov lagged_cov(std::span<const double> x, std::span<const double> y,
                     int tau) {
  return lagged_cov_impl(x, y, tau);
}

LaggedCov lagged_cov(std::span<const std::int64_t> x,
                     std::span<const std::int64_t> y, int tau) {
  std::vector<double> xd(x.begin(), x.end());
  std::vector<double> yd(y.begin(), y.end());
  return lagged_cov_impl(xd, yd, tau);
}

CorrSummary corr_matrix(const ActivityPanel& panel, int tau, unsigned threads) {
  panel.validate();
  const std::size_t n = panel.num_pairs();
  const std::int64_t q = panel.num_bins();
  if (n < 2) {
    throw Error(ErrorCode::Domain, "correlation matrix needs at least 2 pairs");
  }
  if (std::abs(tau) >= q) {
    throw Error(ErrorCode::LagDomain, "|tau| out of range for Q");
  }

  const PanelView view(panel);
  std::vector<double> auto_cov(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto_cov[i] = prefactored_cov(view, i, view, i, tau);
  }

  CorrSummary out;
  out.tau = tau;
  out.pairs = panel.pairs;
  out.matrix.n = n;
  out.matrix.values.assign(n * n, kNaN);

  // Cell-parallel over rows; every (i,j) cell is independent.
  parallel_for(n, threads, [&](std::size_t rb, std::size_t re) {
    for (std::size_t i = rb; i < re; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j && tau == 0) {
          out.matrix.at(i, j) = auto_cov[i] > 0.0 ? 1.0 : kNaN;
          continue;
        }
        const double radicand = auto_cov[i] * auto_cov[j];
        if (!(radicand > 0.0)) continue;  // undefined
        const double cov = prefactored_cov(view, i, view, j, tau);
        out.matrix.at(i, j) = cov / std::sqrt(radicand);
      }
    }
  });

  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (out.matrix.defined(i, j)) {
        sum += out.matrix.at(i, j);
        ++defined;
      }
    }
  }
  const std::size_t total = n * (n - 1) / 2;
  out.defined_fraction = static_cast<double>(defined) / static_cast<double>(total);
  if (defined == 0) {
    throw Error(ErrorCode::Degenerate,
                "all off-diagonal correlation entries undefined");
  }
  out.global_avg = sum / static_cast<double>(defined);
  return out;
}

double global_avg_corr(const CorrSummary& summary) {
  if (summary.tau != 0) {
    throw Error(ErrorCode::Domain,
                "global average is defined for simultaneous (tau=0) matrices");
  }
  const std::size_t n = summary.matrix.n;
  if (n < 2) {
    throw Error(ErrorCode::Domain, "need at least 2 pairs");
  }
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (summary.matrix.defined(i, j)) {
        sum += summary.matrix.at(i, j);
        ++defined;
      }
    }
  }
  if (defined == 0) {
    throw Error(ErrorCode::Degenerate, "no defined off-diagonal entries");
  }
  return sum / static_cast<double>(defined);
}

PDCorrSummary pd_corr(const ActivityPanel& p_panel, const ActivityPanel& d_panel,
                      int tau, unsigned threads) {
  p_panel.validate();
  d_panel.validate();
  if (p_panel.pairs != d_panel.pairs || p_panel.dt_minutes != d_panel.dt_minutes ||
      !(p_panel.window == d_panel.window)) {
    throw Error(ErrorCode::Domain,
                "P and D panels must share pairs, dt and window");
  }
  const std::size_t n = p_panel.num_pairs();
  const std::int64_t q = p_panel.num_bins();
  if (std::abs(tau) >= q) {
    throw Error(ErrorCode::LagDomain, "|tau| out of range for Q");
  }

  const PanelView p(p_panel);
  const PanelView d(d_panel);
  std::vector<double> own(n);  // Cov(P_i, D_i)(tau)
  for (std::size_t i = 0; i < n; ++i) {
    own[i] = prefactored_cov(p, i, d, i, tau);
  }

  PDCorrSummary out;
  out.tau = tau;
  out.pairs = p_panel.pairs;
  out.matrix.n = n;
  out.matrix.values.assign(n * n, kNaN);

  parallel_for(n, threads, [&](std::size_t rb, std::size_t re) {
    for (std::size_t i = rb; i < re; ++i) {
      if (!(own[i] > 0.0)) continue;  // every entry in row i undefined
      for (std::size_t j = 0; j < n; ++j) {
        if (!(own[j] > 0.0)) continue;
        const double cov = prefactored_cov(p, i, d, j, tau);
        out.matrix.at(i, j) = cov / std::sqrt(own[i] * own[j]);
      }
    }
  });

  double sum = 0.0;
  std::size_t defined = 0;
  for (double v : out.matrix.values) {
    if (!std::isnan(v)) {
      sum += v;
      ++defined;
    }
  }
  out.defined_fraction =
      static_cast<double>(defined) / static_cast<double>(n * n);
  if (defined == 0) {
    throw Error(ErrorCode::Degenerate,
                "no pair has positive own P-D covariance at this lag");
  }
  out.global_avg = sum / static_cast<double>(defined);
  return out;
}

}  // namespace fxscale
