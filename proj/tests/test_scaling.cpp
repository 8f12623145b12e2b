#include <cmath>

#include "doctest.h"

#include "fxscale/errors.hpp"
#include "fxscale/rng.hpp"
#include "fxscale/scaling.hpp"

#include "generators.hpp"

using namespace fxscale;

TEST_SUITE("scaling") {

TEST_CASE("exact variance = mean panel recovers alpha = 0.5") {
  // Rows mu +/- sqrt(mu): biased variance is exactly mu.
  const auto panel =
      testgen::exact_law_panel({4, 16, 64, 256}, {2, 4, 8, 16});
  const auto fit = fit_scaling(panel);
  CHECK(std::fabs(fit.alpha - 0.5) < 1e-12);
  CHECK(std::fabs(fit.amplitude - 1.0) < 1e-12);
  CHECK(fit.normr < 1e-12);
  CHECK(fit.n_used == 4);
  CHECK(fit.excluded.empty());
}

TEST_CASE("exact variance = mean^2 panel recovers alpha = 1.0") {
  const auto panel =
      testgen::exact_law_panel({4, 16, 64, 256}, {4, 16, 64, 256});
  const auto fit = fit_scaling(panel);
  CHECK(std::fabs(fit.alpha - 1.0) < 1e-12);
  CHECK(std::fabs(fit.amplitude - 1.0) < 1e-12);
  CHECK(fit.normr < 1e-12);
}

TEST_CASE("exclusion reasons are surfaced") {
  // Row 0: all zero (mean 0). Row 3: constant (variance 0).
  const auto panel = testgen::panel_from_rows({{0, 0, 0, 0},
                                               {5, 3, 7, 1},
                                               {20, 12, 28, 4},
                                               {9, 9, 9, 9}});
  const auto fit = fit_scaling(panel);
  CHECK(fit.n_used == 2);
  REQUIRE(fit.excluded.size() == 2);
  CHECK(fit.excluded[0].reason == "non-positive mean");
  CHECK(fit.excluded[1].reason == "non-positive variance");

  // min_mean = 4.5 drops the mean-4 row too, leaving a single point.
  try {
    fit_scaling(panel, 4.5);
    FAIL("expected insufficient data");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientData);
  }
}

TEST_CASE("min_mean excludes low-activity pairs") {
  const auto panel = testgen::panel_from_rows(
      {{2, 0, 2, 0}, {5, 3, 7, 1}, {20, 12, 28, 4}, {50, 30, 70, 10}});
  const auto fit = fit_scaling(panel, 1.5);
  CHECK(fit.n_used == 3);
  REQUIRE(fit.excluded.size() == 1);
  CHECK(fit.excluded[0].pair == panel.pairs[0]);
  CHECK(fit.excluded[0].reason == "mean below min_mean");
}

TEST_CASE("insufficient data and degenerate regression") {
  const auto tiny = testgen::panel_from_rows({{1, 1, 1, 1}, {2, 5, 1, 4}});
  CHECK_THROWS_AS(fit_scaling(tiny), Error);  // one usable pair

  // Two usable pairs with identical means: zero abscissa spread.
  const auto flat = testgen::panel_from_rows({{4, 6, 4, 6}, {3, 7, 3, 7}});
  try {
    fit_scaling(flat);
    FAIL("expected degenerate regression");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }
}

TEST_CASE("fit ignores time labels and pair order") {
  auto panel = testgen::exact_law_panel({4, 16, 64, 256}, {2, 4, 8, 16});
  auto relabeled = panel;
  const std::int64_t bins = panel.num_bins();
  relabeled.dt_minutes = 5;
  relabeled.window.end = add_minutes(relabeled.window.begin, 5 * bins);
  const auto a = fit_scaling(panel);
  const auto b = fit_scaling(relabeled);
  CHECK(a.alpha == b.alpha);
  CHECK(a.amplitude == b.amplitude);
  CHECK(a.normr == b.normr);

  // Permute rows: same estimates within float reassociation tolerance.
  auto permuted = panel;
  std::vector<size_t> order{3, 0, 2, 1};
  for (size_t i = 0; i < order.size(); ++i) {
    auto src = panel.row(order[i]);
    auto dst = permuted.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
    permuted.pairs[i] = panel.pairs[order[i]];
  }
  const auto c = fit_scaling(permuted);
  CHECK(std::fabs(a.alpha - c.alpha) < 1e-12);
  CHECK(std::fabs(a.amplitude - c.amplitude) < 1e-12);
  CHECK(std::fabs(a.normr - c.normr) < 1e-12);
}

TEST_CASE("alpha is invariant to the log base; reports use natural log") {
  Rng rng(808);
  std::vector<LogPoint> nat;
  for (int i = 0; i < 12; ++i) {
    const double mu = std::exp(1.0 + 0.5 * i);
    const double var = 0.7 * std::pow(mu, 1.3) * (1.0 + 0.05 * rng.uniform01());
    nat.push_back(LogPoint{std::log(mu), std::log(var)});
  }
  const OlsLine e_line = fit_line(nat);

  std::vector<LogPoint> base10;
  for (const auto& p : nat) {
    base10.push_back(LogPoint{p.log_mean / std::log(10.0),
                           p.log_var / std::log(10.0)});
  }
  const OlsLine b10_line = fit_line(base10);
  CHECK(std::fabs(e_line.slope - b10_line.slope) < 1e-12);
  // normr in base 10 differs by exactly ln(10); reported values are natural.
  CHECK(std::fabs(e_line.normr - b10_line.normr * std::log(10.0)) < 1e-10);
}

TEST_CASE("normr strictly increases when one variance is scaled by e^2") {
  // Start from collinear points (normr = 0); bumping one ordinate by
  // exactly 2 (log e^2) must break collinearity.
  std::vector<LogPoint> points;
  for (int i = 0; i < 5; ++i) {
    points.push_back(LogPoint{1.0 + i, 0.4 + 1.6 * (1.0 + i)});
  }
  const OlsLine base = fit_line(points);
  CHECK(base.normr < 1e-12);
  points[2].log_var += 2.0;
  const OlsLine bumped = fit_line(points);
  CHECK(bumped.normr > base.normr);
  CHECK(bumped.normr > 0.5);

  // Same check through the panel route with integer counts.
  const auto panel = testgen::exact_law_panel({4, 16, 64, 256}, {2, 4, 8, 16});
  auto scaled = panel;
  // Spread 8 -> 22 ~ 8e: variance 64 -> 484 ~ 64 e^2.
  for (size_t k = 0; k < static_cast<size_t>(panel.num_bins()); ++k) {
    scaled.row(2)[k] = 64 + (k % 2 == 0 ? 22 : -22);
  }
  CHECK(fit_scaling(scaled).normr > fit_scaling(panel).normr);
}

TEST_CASE("bootstrap_scaling is deterministic and seed-derived") {
  const auto panel = testgen::random_panel(3141, 8, 64, 40, 0);
  const auto a = bootstrap_scaling(panel, 50, 16, 42);
  const auto b = bootstrap_scaling(panel, 50, 16, 42);
  CHECK(a.estimate_mean == b.estimate_mean);
  CHECK(a.estimate_sd == b.estimate_sd);

  const auto c = bootstrap_scaling(panel, 50, 16, 43);
  CHECK(a.estimate_mean != c.estimate_mean);

  // Thread count must not change anything.
  const auto d = bootstrap_scaling(panel, 50, 16, 42, 0.0, 4);
  CHECK(a.estimate_mean == d.estimate_mean);
  CHECK(a.estimate_sd == d.estimate_sd);
}

TEST_CASE("single replicate has zero dispersion") {
  const auto panel = testgen::random_panel(3141, 6, 64, 40, 0);
  const auto r = bootstrap_scaling(panel, 1, 16, 7);
  CHECK(r.estimate_sd == 0.0);
  CHECK(r.n_replicates == 1);
  CHECK(r.points_per_replicate == 16);
}

TEST_CASE("bootstrap parameter validation") {
  const auto panel = testgen::random_panel(1, 4, 32, 20, 0);
  CHECK_THROWS_AS(bootstrap_scaling(panel, 0, 16, 1), Error);
  CHECK_THROWS_AS(bootstrap_scaling(panel, 10, 1, 1), Error);
  CHECK_THROWS_AS(bootstrap_scaling(panel, 10, 33, 1), Error);
}

TEST_CASE("degenerate panels exhaust replicate retries") {
  // Only one non-constant row: every replicate lacks a second usable pair.
  const auto panel = testgen::panel_from_rows({{5, 1, 5, 1}, {2, 2, 2, 2}});
  try {
    bootstrap_scaling(panel, 20, 4, 9);
    FAIL("expected bootstrap degeneracy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BootstrapDegeneracy);
  }
}

TEST_CASE("bootstrap_moments: constant series and determinism") {
  const std::vector<double> flat(50, 3.5);
  const auto r = bootstrap_moments(std::span<const double>(flat), 200, 11);
  CHECK(r.mean_stat.estimate_sd == 0.0);
  CHECK(r.sd_stat.estimate_sd == 0.0);
  CHECK(r.mean_stat.estimate_mean == doctest::Approx(3.5));
  CHECK(r.sd_stat.estimate_mean == 0.0);

  const std::vector<double> bumpy{1, 5, 2, 8, 3, 9, 4, 7};
  const auto x = bootstrap_moments(std::span<const double>(bumpy), 100, 5);
  const auto y = bootstrap_moments(std::span<const double>(bumpy), 100, 5);
  CHECK(x.mean_stat.estimate_mean == y.mean_stat.estimate_mean);
  CHECK(x.sd_stat.estimate_sd == y.sd_stat.estimate_sd);
}

TEST_CASE("bootstrap SD of the mean tracks the CLT on Poisson draws") {
  // 10,000 Poisson(100) values: SD of the sample mean ~ sqrt(100/10000) = 0.1.
  Rng rng(20240803);
  std::vector<std::int64_t> xs(10000);
  for (auto& x : xs) x = rng.poisson(100.0);
  const auto r = bootstrap_moments(std::span<const std::int64_t>(xs), 1000, 17);
  CHECK(r.mean_stat.estimate_sd > 0.08);
  CHECK(r.mean_stat.estimate_sd < 0.12);
}

}  // TEST_SUITE
