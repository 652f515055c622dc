#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's numerical paths.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace ares::oracle {

inline double eval_naive(const std::vector<double>& c, double x) {
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) sum += c[j] * std::pow(x, static_cast<double>(j));
  return sum;
}

// Straight-line fit a0 + a1 x by explicit normal-equation sums and Cramer's rule.
inline std::pair<double, double> cramer_line_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s0 += 1.0;
    s1 += xs[i];
    s2 += xs[i] * xs[i];
    t0 += ys[i];
    t1 += xs[i] * ys[i];
  }
  const double det = s0 * s2 - s1 * s1;
  return {(t0 * s2 - s1 * t1) / det, (s0 * t1 - s1 * t0) / det};
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
  std::vector<double> nodes(n), weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 0 ? 1.0 : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = static_cast<double>(n) * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return {nodes, weights};
}

inline double gauss_legendre_l2(const std::vector<double>& p, const std::vector<double>& q, double lo, double hi) {
  const std::size_t len = std::max(p.size(), q.size());
  const std::size_t nodes = (2 * len - 1 + 1) / 2;  // ceil((2m - 1) / 2)
  auto [t, w] = gauss_legendre(std::max<std::size_t>(nodes, 1));
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = mid + half * t[i];
    double r = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      const double a = j < p.size() ? p[j] : 0.0;
      const double b = j < q.size() ? q[j] : 0.0;
      r += (a - b) * std::pow(x, static_cast<double>(j));
    }
    sum += w[i] * r * r;
  }
  return std::sqrt(half * sum);
}

inline double midpoint_l1(const std::vector<double>& p, const std::vector<double>& q, double lo, double hi,
                          std::size_t samples = 1000000) {
  const double h = (hi - lo) / static_cast<double>(samples);
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * h;
    sum += std::abs(eval_naive(p, x) - eval_naive(q, x));
  }
  return sum * h;
}

inline double sampled_linf(const std::vector<double>& p, const std::vector<double>& q, double lo, double hi,
                           std::size_t samples = 1000000) {
  double best = 0.0;
  for (std::size_t i = 0; i <= samples; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
    best = std::max(best, std::abs(eval_naive(p, x) - eval_naive(q, x)));
  }
  return best;
}

using Dense = std::vector<std::vector<double>>;

// Top-k eigenvectors of the covariance of `rows` by power iteration with
// deflation.
inline Dense power_iteration_components(const Dense& rows, std::size_t k, std::vector<double>& mean) {
  const std::size_t n = rows.front().size();
  mean.assign(n, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < n; ++j) mean[j] += r[j] / static_cast<double>(rows.size());
  Dense cov(n, std::vector<double>(n, 0.0));
  for (const auto& r : rows)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) cov[a][b] += (r[a] - mean[a]) * (r[b] - mean[b]);
  Dense comps;
  std::mt19937_64 gen(99);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(gen() % 1000) / 1000.0 + 0.1;
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
      std::vector<double> w(n, 0.0);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) w[a] += cov[a][b] * v[b];
      double norm = 0.0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      for (auto& x : w) x /= norm;
      lambda = norm;
      v = w;
    }
    comps.push_back(v);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) cov[a][b] -= lambda * v[a] * v[b];
  }
  return comps;
}

}  // namespace ares::oracle
