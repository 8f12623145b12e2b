#include "fxscale/scaling.hpp"

#include <cmath>
#include <limits>

#include "fxscale/errors.hpp"
#include "fxscale/parallel.hpp"
#include "fxscale/rng.hpp"

namespace fxscale {

namespace {

bool try_fit_line(std::span<const LogPoint> points, OlsLine& out) {
  const std::size_t n = points.size();
  if (n < 2) return false;
  double sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    sx += p.log_mean;
    sy += p.log_var;
  }
  const double xbar = sx / static_cast<double>(n);
  const double ybar = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = p.log_mean - xbar;
    sxx += dx * dx;
    sxy += dx * (p.log_var - ybar);
  }
  if (!(sxx > 0.0)) return false;
  out.slope = sxy / sxx;
  out.intercept = ybar - out.slope * xbar;
  double rss = 0.0;
  for (const auto& p : points) {
    const double r = p.log_var - out.intercept - out.slope * p.log_mean;
    rss += r * r;
  }
  out.normr = std::sqrt(rss);
  return true;
}

// Biased (1/Q) variance about the series mean; matches Cov(X,X)(0).
struct MeanVar {
  double mean = 0.0;
  double var = 0.0;
};

template <typename T>
MeanVar mean_var(std::span<const T> series) {
  const std::size_t q = series.size();
  double sum = 0.0;
  for (T v : series) sum += static_cast<double>(v);
  MeanVar mv;
  mv.mean = sum / static_cast<double>(q);
  double ss = 0.0;
  for (T v : series) {
    const double d = static_cast<double>(v) - mv.mean;
    ss += d * d;
  }
  mv.var = ss / static_cast<double>(q);
  return mv;
}

constexpr int kReplicateRetryCap = 10;

}  // namespace

OlsLine fit_line(std::span<const LogPoint> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                "need at least 2 points, got " + std::to_string(points.size()));
  }
  OlsLine line;
  if (!try_fit_line(points, line)) {
    throw Error(ErrorCode::Degenerate, "zero abscissa spread in regression");
  }
  return line;
}

ScalingFit fit_scaling(const ActivityPanel& panel, double min_mean) {
  panel.validate();
  if (min_mean < 0.0) {
    throw Error(ErrorCode::Domain, "min_mean must be >= 0");
  }

  ScalingFit fit;
  for (std::size_t i = 0; i < panel.num_pairs(); ++i) {
    const MeanVar mv = mean_var(panel.row(i));
    if (!(mv.mean > 0.0)) {
      fit.excluded.push_back({panel.pairs[i], "non-positive mean"});
      continue;
    }
    if (!(mv.mean > min_mean)) {
      fit.excluded.push_back({panel.pairs[i], "mean below min_mean"});
      continue;
    }
    if (!(mv.var > 0.0)) {
      fit.excluded.push_back({panel.pairs[i], "non-positive variance"});
      continue;
    }
    fit.points.push_back(LogPoint{std::log(mv.mean), std::log(mv.var)});
  }

  if (fit.points.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                "fewer than 2 usable pairs (" +
                    std::to_string(fit.points.size()) + " usable, " +
                    std::to_string(fit.excluded.size()) + " excluded)");
  }
  OlsLine line;
  if (!try_fit_line(fit.points, line)) {
    throw Error(ErrorCode::Degenerate,
                "all usable pairs share one mean; slope undefined");
  }
  fit.alpha = line.slope / 2.0;
  fit.amplitude = std::exp(line.intercept);
  fit.normr = line.normr;
  fit.n_used = fit.points.size();
  return fit;
}

BootstrapResult bootstrap_scaling(const ActivityPanel& panel, std::int64_t B,
                                  std::int64_t m, std::uint64_t seed,
                                  double min_mean, unsigned threads) {
  panel.validate();
  const std::size_t n = panel.num_pairs();
  const std::int64_t q = panel.num_bins();
  if (B < 1) throw Error(ErrorCode::Domain, "B must be >= 1");
  if (m < 2 || m > q) {
    throw Error(ErrorCode::Domain,
                "m must be in [2, Q]; got m=" + std::to_string(m) +
                    ", Q=" + std::to_string(q));
  }

  std::vector<double> alphas(static_cast<std::size_t>(B),
                             std::numeric_limits<double>::quiet_NaN());

  parallel_for(static_cast<std::size_t>(B), threads,
               [&](std::size_t rb, std::size_t re) {
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(m));
    std::vector<LogPoint> points;
    points.reserve(n);
    for (std::size_t r = rb; r < re; ++r) {
      Rng rng(derive_seed(seed, "bootstrap_scaling", r));
      for (int attempt = 0; attempt < kReplicateRetryCap; ++attempt) {
        for (auto& v : idx) {
          v = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(q)));
        }
        points.clear();
        for (std::size_t i = 0; i < n; ++i) {
          const auto row = panel.row(i);
          std::int64_t sum = 0;
          for (auto k : idx) sum += row[k];
          const double mu = static_cast<double>(sum) / static_cast<double>(m);
          if (!(mu > 0.0) || !(mu > min_mean)) continue;
          double ss = 0.0;
          for (auto k : idx) {
            const double d = static_cast<double>(row[k]) - mu;
            ss += d * d;
          }
          const double var = ss / static_cast<double>(m);
          if (!(var > 0.0)) continue;
          points.push_back(LogPoint{std::log(mu), std::log(var)});
        }
        OlsLine line;
        if (try_fit_line(points, line)) {
          alphas[r] = line.slope / 2.0;
          break;
        }
      }
    }
  });

  // Fixed index-order reduction keeps the result thread-count independent.
  double sum = 0.0;
  std::int64_t ok = 0;
  for (double a : alphas) {
    if (!std::isnan(a)) {
      sum += a;
      ++ok;
    }
  }
  const std::int64_t failed = B - ok;
  if (failed * 10 > B) {
    throw Error(ErrorCode::BootstrapDegeneracy,
                std::to_string(failed) + " of " + std::to_string(B) +
                    " replicates failed");
  }
  BootstrapResult out;
  out.n_replicates = B;
  out.points_per_replicate = m;
  out.seed = seed;
  out.estimate_mean = sum / static_cast<double>(ok);
  double ss = 0.0;
  for (double a : alphas) {
    if (!std::isnan(a)) {
      const double d = a - out.estimate_mean;
      ss += d * d;
    }
  }
  out.estimate_sd = std::sqrt(ss / static_cast<double>(ok));
  return out;
}

namespace {

MomentsBootstrap bootstrap_moments_impl(std::span<const double> series,
                                        std::int64_t B, std::uint64_t seed) {
  const std::size_t q = series.size();
  if (B < 1) throw Error(ErrorCode::Domain, "B must be >= 1");
  if (q < 2) throw Error(ErrorCode::Domain, "series needs at least 2 values");

  std::vector<double> means(static_cast<std::size_t>(B));
  std::vector<double> sds(static_cast<std::size_t>(B));
  std::vector<double> sample(q);
  for (std::size_t r = 0; r < static_cast<std::size_t>(B); ++r) {
    Rng rng(derive_seed(seed, "bootstrap_moments", r));
    for (std::size_t k = 0; k < q; ++k) {
      sample[k] = series[rng.below(q)];
    }
    const MeanVar mv = mean_var(std::span<const double>(sample));
    means[r] = mv.mean;
    sds[r] = std::sqrt(mv.var);
  }

  auto summarize = [&](const std::vector<double>& stats) {
    BootstrapResult res;
    res.n_replicates = B;
    res.points_per_replicate = static_cast<std::int64_t>(q);
    res.seed = seed;
    double sum = 0.0;
    for (double v : stats) sum += v;
    res.estimate_mean = sum / static_cast<double>(B);
    double ss = 0.0;
    for (double v : stats) {
      const double d = v - res.estimate_mean;
      ss += d * d;
    }
    res.estimate_sd = std::sqrt(ss / static_cast<double>(B));
    return res;
  };

  MomentsBootstrap out;
  out.mean_stat = summarize(means);
  out.sd_stat = summarize(sds);
  return out;
}

}  // namespace

MomentsBootstrap bootstrap_moments(std::span<const double> series,
                                   std::int64_t B, std::uint64_t seed) {
  return bootstrap_moments_impl(series, B, seed);
}

MomentsBootstrap bootstrap_moments(std::span<const std::int64_t> series,
                                   std::int64_t B, std::uint64_t seed) {
  std::vector<double> d(series.begin(), series.end());
  return bootstrap_moments_impl(d, B, seed);
}

}  // namespace fxscale
