#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "fxscale/errors.hpp"
#include "fxscale/moments.hpp"
#include "fxscale/panel.hpp"
#include "fxscale/scaling.hpp"
#include "fxscale/synthgen.hpp"

#include "generators.hpp"

using namespace fxscale;

namespace {

GenSpec basic_spec(size_t n, std::int64_t q, std::uint64_t seed) {
  GenSpec spec;
  spec.pairs = testgen::make_pairs(n);
  spec.rates.assign(n, 100.0);
  spec.bins = q;
  spec.seed = seed;
  return spec;
}

std::vector<double> log_spaced(double lo, double hi, size_t n) {
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out[i] = lo * std::pow(hi / lo, f);
  }
  return out;
}

}  // namespace

TEST_SUITE("synthgen") {

TEST_CASE("spec validation") {
  auto spec = basic_spec(3, 100, 1);
  CHECK_NOTHROW(spec.validate());

  auto bad = spec;
  bad.rates[1] = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = spec;
  bad.coupling_v = -0.1;
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = spec;
  bad.factor_memory = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = spec;
  bad.trade_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = spec;
  bad.pairs[0] = "EURUSD";
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("generation is seed deterministic and pair-parallel safe") {
  auto spec = basic_spec(6, 500, 99);
  spec.coupling_v = 0.1;
  spec.factor_memory = 0.5;
  spec.trade_fraction = 0.3;
  const auto a = gen_panel(spec, {}, 1);
  const auto b = gen_panel(spec, {}, 1);
  const auto c = gen_panel(spec, {}, 4);
  CHECK(a.quotes == b.quotes);
  CHECK(a.trades == b.trades);
  CHECK(a.quotes == c.quotes);
  CHECK(a.trades == c.trades);

  auto other = spec;
  other.seed = 100;
  CHECK(gen_panel(other).quotes.counts != a.quotes.counts);
}

TEST_CASE("independent Poisson endpoint recovers alpha = 0.5") {
  GenSpec spec;
  spec.pairs = testgen::make_pairs(50);
  spec.rates = log_spaced(10.0, 1e4, 50);
  spec.bins = 10080;
  spec.coupling_v = 0.0;
  spec.seed = 7;
  const auto panels = gen_panel(spec);
  const auto fit = fit_scaling(panels.quotes);
  CHECK(std::fabs(fit.alpha - 0.5) < 0.02);
}

TEST_CASE("near-zero rate exercises the exclusion path") {
  GenSpec spec;
  spec.pairs = testgen::make_pairs(3);
  spec.rates = {1e-6, 50.0, 500.0};
  spec.bins = 64;
  spec.seed = 13;
  const auto panels = gen_panel(spec);
  const auto fit = fit_scaling(panels.quotes);
  CHECK(fit.n_used == 2);
  REQUIRE(fit.excluded.size() == 1);
  CHECK(fit.excluded[0].pair == spec.pairs[0]);
}

TEST_CASE("law of total variance at v = 0.25") {
  GenSpec spec;
  spec.pairs = testgen::make_pairs(1);
  spec.rates = {1000.0};
  spec.bins = 10080;
  spec.coupling_v = 0.25;
  spec.seed = 31;
  const auto panels = gen_panel(spec);
  const auto row = panels.quotes.row(0);
  const double var = lagged_cov(row, row, 0).value;
  // lambda + v*lambda^2 = 251,000 within 5%.
  CHECK(var > 251000.0 * 0.95);
  CHECK(var < 251000.0 * 1.05);
}

TEST_CASE("factor with memory keeps mean one") {
  GenSpec spec = basic_spec(2, 20000, 77);
  spec.coupling_v = 0.25;
  spec.factor_memory = 0.9;
  const auto panels = gen_panel(spec);
  // Sample mean of counts stays near rate * E[s] = rate.
  const double m = mean(panels.quotes.row(0));
  CHECK(std::fabs(m - 100.0) < 3.0);
}

TEST_CASE("trade thinning totals follow the binomial CLT") {
  GenSpec spec = basic_spec(4, 4000, 101);
  spec.trade_fraction = 0.25;
  const auto panels = gen_panel(spec);
  for (size_t i = 0; i < 4; ++i) {
    std::int64_t p_total = 0, d_total = 0;
    for (size_t k = 0; k < 4000; ++k) {
      p_total += panels.quotes.row(i)[k];
      d_total += panels.trades.row(i)[k];
      CHECK(panels.trades.row(i)[k] <= panels.quotes.row(i)[k]);
    }
    const double expect = 0.25 * static_cast<double>(p_total);
    const double band = 4.0 * std::sqrt(expect);
    CHECK(std::fabs(static_cast<double>(d_total) - expect) < band);
  }
}

TEST_CASE("sample moments approach the closed forms") {
  GenSpec spec;
  spec.pairs = testgen::make_pairs(3);
  spec.rates = {100.0, 100.0, 400.0};
  spec.bins = 10080;
  spec.coupling_v = 0.25;
  spec.seed = 5;
  const auto analytic = analytic_moments(spec);
  CHECK(analytic.variances[0] == doctest::Approx(100.0 + 0.25 * 1e4));
  CHECK(analytic.covariances[0][1] == doctest::Approx(2500.0));
  // Implied correlation 2500/2600 ~ 0.962 for two rate-100 pairs.
  const double implied =
      analytic.covariances[0][1] /
      std::sqrt(analytic.variances[0] * analytic.variances[1]);
  CHECK(implied == doctest::Approx(2500.0 / 2600.0).epsilon(1e-12));

  const auto panels = gen_panel(spec);
  const double band = 4.0 / std::sqrt(static_cast<double>(spec.bins));
  for (size_t i = 0; i < 3; ++i) {
    const double m = mean(panels.quotes.row(i));
    CHECK(std::fabs(m - analytic.means[i]) / analytic.means[i] < band);
  }
  const double sample_cov =
      lagged_cov(panels.quotes.row(0), panels.quotes.row(1), 0).value;
  CHECK(std::fabs(sample_cov - 2500.0) / 2500.0 < 10.0 * band);

  auto with_memory = spec;
  with_memory.factor_memory = 0.5;
  CHECK_THROWS_AS(analytic_moments(with_memory), Error);
}

TEST_CASE("v = 0 closed forms collapse to Poisson") {
  auto spec = basic_spec(2, 100, 1);
  const auto analytic = analytic_moments(spec);
  CHECK(analytic.variances[0] == 100.0);
  CHECK(analytic.covariances[0][1] == 0.0);
}

TEST_CASE("tick stream round trip reproduces the panels exactly") {
  GenSpec spec;
  spec.pairs = testgen::make_pairs(4);
  spec.rates = {0.5, 2.0, 8.0, 32.0};
  spec.bins = 240;
  spec.coupling_v = 0.0625;
  spec.factor_memory = 0.8;
  spec.trade_fraction = 0.3;
  spec.seed = 4096;

  const UtcMillis t0 = testgen::default_t0();
  const Interval window{t0, add_minutes(t0, spec.bins)};
  const TickStream stream = gen_tick_stream(spec, window, 1);

  GenOptions opts;
  opts.t0 = t0;
  const auto panels = gen_panel(spec, opts);

  const auto p = bin_counts(stream, EventKind::Quote, 1, window, spec.pairs);
  const auto d = bin_counts(stream, EventKind::Trade, 1, window, spec.pairs);
  CHECK(p.counts == panels.quotes.counts);
  CHECK(d.counts == panels.trades.counts);

  // Serialization determinism: same seed -> byte-identical CSV.
  std::ostringstream buf_a, buf_b;
  serialize_tick_stream(stream, buf_a);
  serialize_tick_stream(gen_tick_stream(spec, window, 1), buf_b);
  CHECK(buf_a.str() == buf_b.str());
}

TEST_CASE("large stream round trip at the million-event scale") {
  GenSpec spec;
  spec.pairs = testgen::make_pairs(8);
  spec.rates = log_spaced(4.0, 64.0, 8);
  spec.bins = 5040;
  spec.trade_fraction = 0.2;
  spec.seed = 350;
  const UtcMillis t0 = testgen::default_t0();
  const Interval window{t0, add_minutes(t0, spec.bins)};
  const TickStream stream = gen_tick_stream(spec, window, 1, 4);
  CHECK(stream.events.size() > 800000);

  std::ostringstream buf;
  serialize_tick_stream(stream, buf);
  std::istringstream in(buf.str());
  const TickStream parsed = parse_tick_file(in, OrderPolicy::Strict);

  GenOptions opts;
  opts.t0 = t0;
  const auto panels = gen_panel(spec, opts);
  TickStream pinned = parsed;
  pinned.widen_span(window);
  const auto p = bin_counts(pinned, EventKind::Quote, 1, window, spec.pairs);
  CHECK(p.counts == panels.quotes.counts);
}

TEST_CASE("window geometry must match bins * dt") {
  auto spec = basic_spec(2, 100, 9);
  const UtcMillis t0 = testgen::default_t0();
  CHECK_THROWS_AS(gen_tick_stream(spec, Interval{t0, add_minutes(t0, 99)}, 1),
                  Error);
}

TEST_CASE("gen spec JSON round trip") {
  GenSpec spec;
  spec.pairs = {"EUR/USD", "USD/JPY"};
  spec.rates = {10.0, 20.0};
  spec.bins = 10080;
  spec.coupling_v = 0.25;
  spec.factor_memory = 0.967;
  spec.trade_fraction = 0.4;
  spec.seed = 31337;
  const std::string text = gen_spec_to_json(spec);

  const auto path = std::filesystem::temp_directory_path() / "fxscale_spec_test.json";
  {
    std::ofstream out(path);
    out << text;
  }
  const GenSpec back = gen_spec_from_json_file(path.string());
  CHECK(back.pairs == spec.pairs);
  CHECK(back.rates == spec.rates);
  CHECK(back.bins == spec.bins);
  CHECK(back.coupling_v == spec.coupling_v);
  CHECK(back.factor_memory == spec.factor_memory);
  CHECK(back.trade_fraction == spec.trade_fraction);
  CHECK(back.seed == spec.seed);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
