// Independent reference implementations used to check the library. These are
// deliberately naive (double loops, per-event accumulators, day-walking
// calendars) and share no code with the implementation paths they verify.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fxscale/panel.hpp"
#include "fxscale/tick_data.hpp"

namespace oracle {

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Lagged covariance exactly as defined: full-series means in both branches,
// 1/(Q-|tau|) prefactor, mirrored summation for negative lags.
inline double lagged_cov(const std::vector<double>& x,
                         const std::vector<double>& y, int tau) {
  const int q = static_cast<int>(x.size());
  const double mx = mean(x);
  const double my = mean(y);
  double sum = 0.0;
  if (tau >= 0) {
    for (int k = 0; k <= q - tau - 1; ++k) {
      sum += (x[static_cast<size_t>(k)] - mx) *
             (y[static_cast<size_t>(k + tau)] - my);
    }
    return sum / static_cast<double>(q - tau);
  }
  for (int k = 0; k <= q + tau - 1; ++k) {
    sum += (x[static_cast<size_t>(k - tau)] - mx) *
           (y[static_cast<size_t>(k)] - my);
  }
  return sum / static_cast<double>(q + tau);
}

inline std::vector<std::vector<double>> rows_of(const fxscale::ActivityPanel& p) {
  std::vector<std::vector<double>> rows(p.num_pairs());
  for (size_t i = 0; i < p.num_pairs(); ++i) {
    const auto r = p.row(i);
    rows[i].assign(r.begin(), r.end());
  }
  return rows;
}

// Same-activity correlation matrix; NaN where the radicand is <= 0.
inline std::vector<std::vector<double>> corr_matrix(
    const std::vector<std::vector<double>>& rows, int tau) {
  const size_t n = rows.size();
  std::vector<std::vector<double>> c(
      n, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double rad =
          lagged_cov(rows[i], rows[i], tau) * lagged_cov(rows[j], rows[j], tau);
      if (rad > 0.0) {
        c[i][j] = lagged_cov(rows[i], rows[j], tau) / std::sqrt(rad);
      }
    }
  }
  return c;
}

// Quote-trade matrix; defined only when both own-pair P-D covariances are
// positive.
inline std::vector<std::vector<double>> pd_matrix(
    const std::vector<std::vector<double>>& p,
    const std::vector<std::vector<double>>& d, int tau) {
  const size_t n = p.size();
  std::vector<std::vector<double>> c(
      n, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
  for (size_t i = 0; i < n; ++i) {
    const double own_i = lagged_cov(p[i], d[i], tau);
    if (!(own_i > 0.0)) continue;
    for (size_t j = 0; j < n; ++j) {
      const double own_j = lagged_cov(p[j], d[j], tau);
      if (!(own_j > 0.0)) continue;
      c[i][j] = lagged_cov(p[i], d[j], tau) / std::sqrt(own_i * own_j);
    }
  }
  return c;
}

inline double upper_triangle_avg(const std::vector<std::vector<double>>& c) {
  double sum = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    for (size_t j = i + 1; j < c.size(); ++j) {
      if (!std::isnan(c[i][j])) {
        sum += c[i][j];
        ++count;
      }
    }
  }
  return sum / static_cast<double>(count);
}

inline double full_matrix_avg(const std::vector<std::vector<double>>& c) {
  double sum = 0.0;
  size_t count = 0;
  for (const auto& row : c) {
    for (double v : row) {
      if (!std::isnan(v)) {
        sum += v;
        ++count;
      }
    }
  }
  return sum / static_cast<double>(count);
}

// Exact integer summation for the mean of a count series.
inline long double exact_mean(const std::vector<std::int64_t>& x) {
  long long sum = 0;
  for (auto v : x) sum += v;
  return static_cast<long double>(sum) / static_cast<long double>(x.size());
}

// Sakamoto's congruence, 0 = Sunday. Independent of the civil-date code.
inline int weekday(int y, int m, int d) {
  static const int t[] = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
  if (m < 3) y -= 1;
  return (y + y / 4 - y / 100 + y / 400 + t[m - 1] + d) % 7;
}

// Walks the calendar day by day counting whole anchored weeks inside
// [start, end), anchored at the given weekday's midnight.
inline int count_weeks_daywalk(int sy, int sm, int sd, int ey, int em, int ed,
                               int anchor_weekday) {
  static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  auto leap = [](int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; };
  auto next_day = [&](int& y, int& m, int& d) {
    int dm = mdays[m - 1] + (m == 2 && leap(y) ? 1 : 0);
    if (++d > dm) {
      d = 1;
      if (++m > 12) {
        m = 1;
        ++y;
      }
    }
  };
  // Find the first anchor day at or after the start.
  int y = sy, m = sm, d = sd;
  while (weekday(y, m, d) != anchor_weekday) next_day(y, m, d);
  // Count full 7-day strides that end on or before the end date.
  int weeks = 0;
  for (;;) {
    int yy = y, mm = m, dd = d;
    for (int i = 0; i < 7; ++i) next_day(yy, mm, dd);
    const bool fits = std::tuple(yy, mm, dd) <= std::tuple(ey, em, ed);
    if (!fits) break;
    ++weeks;
    y = yy;
    m = mm;
    d = dd;
  }
  return weeks;
}

// Per-event accumulator; linear pair lookup, no shared code with bin_counts.
inline std::vector<std::vector<std::int64_t>> bin_by_loop(
    const fxscale::TickStream& stream, fxscale::EventKind kind,
    std::int64_t dt_minutes, fxscale::Interval window,
    const std::vector<std::string>& pairs) {
  const std::int64_t dt_ms = dt_minutes * fxscale::kMillisPerMinute;
  const std::int64_t q = window.length_ms() / dt_ms;
  std::vector<std::vector<std::int64_t>> counts(
      pairs.size(), std::vector<std::int64_t>(static_cast<size_t>(q), 0));
  for (const auto& e : stream.events) {
    if (e.kind != kind) continue;
    if (!(window.begin <= e.timestamp && e.timestamp < window.end)) continue;
    for (size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i] == e.pair) {
        counts[i][static_cast<size_t>((e.timestamp - window.begin) / dt_ms)] += 1;
        break;
      }
    }
  }
  return counts;
}

}  // namespace oracle
