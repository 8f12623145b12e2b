#include "fxscale/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"

#include "fxscale/errors.hpp"
#include "fxscale/parallel.hpp"
#include "fxscale/rng.hpp"

namespace fxscale {

void GenSpec::validate() const {
  if (pairs.empty()) throw Error(ErrorCode::Spec, "no pairs in generator spec");
  if (rates.size() != pairs.size()) {
    throw Error(ErrorCode::Spec, "rates and pairs must have the same length");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!is_valid_pair_code(pairs[i])) {
      throw Error(ErrorCode::Spec, "invalid pair code: " + pairs[i]);
    }
    if (!(rates[i] > 0.0) || !std::isfinite(rates[i])) {
      throw Error(ErrorCode::Spec, "rate for " + pairs[i] + " must be > 0");
    }
  }
  if (bins < 2) throw Error(ErrorCode::Spec, "bins must be >= 2");
  // The mean-1 lognormal parameterization sigma^2 = ln(1+v) solves for every
  // v >= 0, so spec failure reduces to plain range validation.
  if (!(coupling_v >= 0.0) || !std::isfinite(coupling_v)) {
    throw Error(ErrorCode::Spec, "coupling_v must be >= 0");
  }
  if (!(factor_memory >= 0.0) || !(factor_memory < 1.0)) {
    throw Error(ErrorCode::Spec, "factor_memory must be in [0, 1)");
  }
  if (!(idio_v >= 0.0) || !std::isfinite(idio_v)) {
    throw Error(ErrorCode::Spec, "idio_v must be >= 0");
  }
  if (!(idio_memory >= 0.0) || !(idio_memory < 1.0)) {
    throw Error(ErrorCode::Spec, "idio_memory must be in [0, 1)");
  }
  if (!(trade_fraction >= 0.0) || !(trade_fraction <= 1.0)) {
    throw Error(ErrorCode::Spec, "trade_fraction must be in [0, 1]");
  }
}

namespace {

// Stationary lognormal AR(1) path: mean 1, variance v, Gaussian-kernel
// lag-one autocorrelation rho. v = 0 leaves the stream untouched.
std::vector<double> lognormal_ar1_path(Rng& rng, std::size_t q, double v,
                                       double rho) {
  std::vector<double> s(q, 1.0);
  if (v == 0.0) return s;
  const double sigma2 = std::log1p(v);
  const double sigma = std::sqrt(sigma2);
  const double mu = -0.5 * sigma2;
  const double innovation = sigma * std::sqrt(1.0 - rho * rho);
  double h = sigma * rng.normal();
  s[0] = std::exp(mu + h);
  for (std::size_t k = 1; k < q; ++k) {
    h = rho * h + innovation * rng.normal();
    s[k] = std::exp(mu + h);
  }
  return s;
}

std::vector<double> factor_path(const GenSpec& spec) {
  Rng rng(derive_seed(spec.seed, "factor", 0));
  return lognormal_ar1_path(rng, static_cast<std::size_t>(spec.bins),
                            spec.coupling_v, spec.factor_memory);
}

ActivityPanel empty_panel(const GenSpec& spec, const GenOptions& opts,
                          EventKind kind) {
  ActivityPanel panel;
  panel.kind = kind;
  panel.dt_minutes = opts.dt_minutes;
  panel.window = Interval{
      opts.t0, add_minutes(opts.t0, spec.bins * opts.dt_minutes)};
  panel.pairs = spec.pairs;
  panel.counts.assign(spec.pairs.size() * static_cast<std::size_t>(spec.bins), 0);
  return panel;
}

}  // namespace

PanelPair gen_panel(const GenSpec& spec, const GenOptions& opts,
                    unsigned threads) {
  spec.validate();
  if (opts.dt_minutes < 1) {
    throw Error(ErrorCode::Geometry, "dt must be >= 1 minute");
  }
  const std::vector<double> s = factor_path(spec);
  const std::size_t n = spec.pairs.size();
  const std::size_t q = static_cast<std::size_t>(spec.bins);

  PanelPair out{empty_panel(spec, opts, EventKind::Quote),
                empty_panel(spec, opts, EventKind::Trade)};

  const double tf = spec.trade_fraction;
  parallel_for(n, threads, [&](std::size_t ib, std::size_t ie) {
    for (std::size_t i = ib; i < ie; ++i) {
      Rng rng(derive_seed(spec.seed, "pair", i));
      const std::vector<double> u =
          lognormal_ar1_path(rng, q, spec.idio_v, spec.idio_memory);
      auto p_row = out.quotes.row(i);
      auto d_row = out.trades.row(i);
      for (std::size_t k = 0; k < q; ++k) {
        const double intensity = spec.rates[i] * s[k] * u[k];
        // Poisson splitting: trades ~ Poisson(intensity*tf) plus an
        // independent remainder gives quotes ~ Poisson(intensity) with
        // trades | quotes ~ Binomial(quotes, tf), the thinning law.
        const std::int64_t traded = rng.poisson(intensity * tf);
        const std::int64_t rest = rng.poisson(intensity * (1.0 - tf));
        d_row[k] = traded;
        p_row[k] = traded + rest;
      }
    }
  });
  return out;
}

TickStream gen_tick_stream(const GenSpec& spec, Interval window,
                           std::int64_t dt_minutes, unsigned threads) {
  spec.validate();
  if (dt_minutes < 1) {
    throw Error(ErrorCode::Geometry, "dt must be >= 1 minute");
  }
  const std::int64_t expected = spec.bins * dt_minutes * kMillisPerMinute;
  if (window.length_ms() != expected) {
    throw Error(ErrorCode::Geometry,
                "window length does not equal bins*dt (" +
                    std::to_string(window.length_ms()) + " vs " +
                    std::to_string(expected) + " ms)");
  }

  GenOptions opts;
  opts.t0 = window.begin;
  opts.dt_minutes = dt_minutes;
  const PanelPair panels = gen_panel(spec, opts, threads);

  const std::size_t n = spec.pairs.size();
  const std::size_t q = static_cast<std::size_t>(spec.bins);
  const std::int64_t dt_ms = dt_minutes * kMillisPerMinute;

  struct Raw {
    std::int64_t ts;
    std::uint32_t pair;
    EventKind kind;
  };
  std::vector<std::vector<Raw>> per_pair(n);

  parallel_for(n, threads, [&](std::size_t ib, std::size_t ie) {
    for (std::size_t i = ib; i < ie; ++i) {
      Rng rng(derive_seed(spec.seed, "ticktime", i));
      const auto p_row = panels.quotes.row(i);
      const auto d_row = panels.trades.row(i);
      auto& events = per_pair[i];
      events.reserve(static_cast<std::size_t>(
          std::accumulate(p_row.begin(), p_row.end(), std::int64_t{0}) +
          std::accumulate(d_row.begin(), d_row.end(), std::int64_t{0})));
      for (std::size_t k = 0; k < q; ++k) {
        const std::int64_t base =
            window.begin.ms + static_cast<std::int64_t>(k) * dt_ms;
        for (std::int64_t e = 0; e < p_row[k]; ++e) {
          events.push_back(Raw{base + static_cast<std::int64_t>(
                                          rng.below(static_cast<std::uint64_t>(dt_ms))),
                               static_cast<std::uint32_t>(i), EventKind::Quote});
        }
        for (std::int64_t e = 0; e < d_row[k]; ++e) {
          events.push_back(Raw{base + static_cast<std::int64_t>(
                                          rng.below(static_cast<std::uint64_t>(dt_ms))),
                               static_cast<std::uint32_t>(i), EventKind::Trade});
        }
      }
    }
  });

  std::vector<Raw> all;
  std::size_t total = 0;
  for (const auto& v : per_pair) total += v.size();
  all.reserve(total);
  for (auto& v : per_pair) {
    all.insert(all.end(), v.begin(), v.end());
    v.clear();
    v.shrink_to_fit();
  }
  // Deterministic order: timestamp, then pair index, then kind.
  std::sort(all.begin(), all.end(), [](const Raw& a, const Raw& b) {
    if (a.ts != b.ts) return a.ts < b.ts;
    if (a.pair != b.pair) return a.pair < b.pair;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });

  std::vector<TickEvent> events;
  events.reserve(all.size());
  for (const Raw& r : all) {
    events.push_back(TickEvent{UtcMillis{r.ts}, spec.pairs[r.pair], r.kind});
  }
  TickStream stream = TickStream::from_events(std::move(events), window);
  return stream;
}

AnalyticMoments analytic_moments(const GenSpec& spec) {
  spec.validate();
  if (spec.factor_memory != 0.0 || spec.idio_memory != 0.0) {
    throw Error(ErrorCode::Domain,
                "closed forms are exact only for memoryless factors");
  }
  const std::size_t n = spec.pairs.size();
  const double total_v =
      (1.0 + spec.coupling_v) * (1.0 + spec.idio_v) - 1.0;
  AnalyticMoments out;
  out.means = spec.rates;
  out.variances.resize(n);
  out.covariances.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    out.variances[i] =
        spec.rates[i] + total_v * spec.rates[i] * spec.rates[i];
    for (std::size_t j = 0; j < n; ++j) {
      out.covariances[i][j] =
          i == j ? out.variances[i]
                 : spec.coupling_v * spec.rates[i] * spec.rates[j];
    }
  }
  return out;
}

GenSpec gen_spec_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open spec file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Spec, "invalid spec JSON: " + std::string(e.what()));
  }
  GenSpec spec;
  try {
    spec.pairs = j.at("pairs").get<std::vector<std::string>>();
    spec.rates = j.at("rates").get<std::vector<double>>();
    spec.bins = j.at("bins").get<std::int64_t>();
    spec.coupling_v = j.value("coupling_v", 0.0);
    spec.factor_memory = j.value("factor_memory", 0.0);
    spec.idio_v = j.value("idio_v", 0.0);
    spec.idio_memory = j.value("idio_memory", 0.0);
    spec.trade_fraction = j.value("trade_fraction", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Spec, "invalid spec JSON: " + std::string(e.what()));
  }
  spec.validate();
  return spec;
}

std::string gen_spec_to_json(const GenSpec& spec) {
  nlohmann::json j;
  j["pairs"] = spec.pairs;
  j["rates"] = spec.rates;
  j["bins"] = spec.bins;
  j["coupling_v"] = spec.coupling_v;
  j["factor_memory"] = spec.factor_memory;
  j["idio_v"] = spec.idio_v;
  j["idio_memory"] = spec.idio_memory;
  j["trade_fraction"] = spec.trade_fraction;
  j["seed"] = spec.seed;
  return j.dump(2) + "\n";
}

}  // namespace fxscale
