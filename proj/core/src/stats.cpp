#include "toponet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "toponet/errors.hpp"

namespace toponet {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Sum of (t^3 - t) over runs of tied values in the pooled sample.
double tie_term(std::vector<double> pooled) {
  std::sort(pooled.begin(), pooled.end());
  double sum = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j + 1 < pooled.size() && pooled[j + 1] == pooled[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    sum += t * t * t - t;
    i = j + 1;
  }
  return sum;
}

// Regularized incomplete gamma pair (series / continued fraction).
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw std::domain_error("gamma_q: bad arguments");
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

// U statistic of sample `a` against `b`: wins plus half-ties.
double u_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) {
      if (x > y)
        u += 1.0;
      else if (x == y)
        u += 0.5;
    }
  return u;
}

}  // namespace

double chi_squared_sf(double x, int df) {
  if (df < 1) throw std::domain_error("chi_squared_sf: df must be >= 1");
  if (x <= 0) return 1.0;
  return gamma_q(df / 2.0, x / 2.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

KruskalResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2)
    throw InfeasibleError("kruskal_wallis: need at least 2 groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.size() < 2)
      throw InfeasibleError("kruskal_wallis: each group needs >= 2 values");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const double m = static_cast<double>(pooled.size());
  const auto ranks = average_ranks(pooled);

  double h = 0.0;
  std::size_t at = 0;
  for (const auto& g : groups) {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rank_sum += ranks[at + i];
    at += g.size();
    const double rbar = rank_sum / g.size();
    const double dev = rbar - (m + 1.0) / 2.0;
    h += g.size() * dev * dev;
  }
  h *= 12.0 / (m * (m + 1.0));

  const double correction = 1.0 - tie_term(pooled) / (m * m * m - m);
  if (correction <= 0.0) return {0.0, 1.0};  // every pooled value identical
  h /= correction;

  return {h, chi_squared_sf(h, static_cast<int>(groups.size()) - 1)};
}

MannWhitneyResult mann_whitney(const std::vector<double>& a,
                               const std::vector<double>& b, Alternative alt) {
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  if (na < 2 || nb < 2)
    throw InfeasibleError("mann_whitney: each sample needs >= 2 values");
  const int m = na + nb;
  const double u_obs = u_statistic(a, b);
  const double mu = na * static_cast<double>(nb) / 2.0;

  MannWhitneyResult result;
  result.u = u_obs;

  if (m <= 12) {
    // Exact permutation null: every way of labeling na of the pooled values
    // as sample "a" is equally likely.
    result.exact = true;
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<char> pick(m, 0);
    std::fill(pick.begin(), pick.begin() + na, 1);
    std::sort(pick.begin(), pick.end(), std::greater<char>());
    long total = 0, hits = 0;
    const double eps = 1e-9;
    do {
      std::vector<double> xa, xb;
      for (int i = 0; i < m; ++i)
        (pick[i] ? xa : xb).push_back(pooled[i]);
      const double u = u_statistic(xa, xb);
      ++total;
      switch (alt) {
        case Alternative::two_sided:
          if (std::abs(u - mu) >= std::abs(u_obs - mu) - eps) ++hits;
          break;
        case Alternative::greater:
          if (u >= u_obs - eps) ++hits;
          break;
        case Alternative::less:
          if (u <= u_obs + eps) ++hits;
          break;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    result.p = static_cast<double>(hits) / static_cast<double>(total);
    return result;
  }

  // Normal approximation with tie and continuity corrections.
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const double ties = tie_term(pooled);
  const double var = (na * static_cast<double>(nb) / 12.0) *
                     ((m + 1.0) - ties / (static_cast<double>(m) * (m - 1.0)));
  if (var <= 0.0) {
    result.p = 1.0;  // all pooled values identical
    return result;
  }
  const double sigma = std::sqrt(var);
  auto z_of = [&](double u, double shift) { return (u - mu - shift) / sigma; };
  switch (alt) {
    case Alternative::two_sided: {
      const double d = std::max(0.0, std::abs(u_obs - mu) - 0.5);
      result.p = std::min(1.0, 2.0 * normal_sf(d / sigma));
      break;
    }
    case Alternative::greater:
      result.p = normal_sf(z_of(u_obs, 0.5));
      break;
    case Alternative::less:
      result.p = 1.0 - normal_sf(z_of(u_obs, -0.5));
      break;
  }
  return result;
}

std::vector<double> holm_adjust(const std::vector<double>& pvalues) {
  const std::size_t m = pvalues.size();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return pvalues[i] < pvalues[j]; });
  std::vector<double> adjusted(m, 0.0);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double scaled = (m - k) * pvalues[order[k]];
    running = std::max(running, std::min(1.0, scaled));
    adjusted[order[k]] = running;
  }
  return adjusted;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InfeasibleError("pearson: need two equally sized samples");
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  // Constant inputs are undefined; the scale-aware cutoff also catches
  // spreads that are pure rounding residue of the mean (e.g. a column of
  // identical values whose sum is inexact).
  const double x_cut = 1e-12 * std::max(1.0, std::abs(mx));
  const double y_cut = 1e-12 * std::max(1.0, std::abs(my));
  if (std::sqrt(sxx / x.size()) <= x_cut || std::sqrt(syy / y.size()) <= y_cut)
    return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

}  // namespace toponet
