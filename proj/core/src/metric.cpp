#include "ares/metric.hpp"

#include <Eigen/Eigenvalues>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "ares/error.hpp"
#include "ares/horner.hpp"

namespace ares {
namespace {

void check_domain(IntegrationDomain dom) {
  if (!(dom.lo < dom.hi) || !std::isfinite(dom.lo) || !std::isfinite(dom.hi)) {
    throw Error(ErrorCode::InvalidDomain, "integration domain requires lo < hi, got [" +
                                              std::to_string(dom.lo) + ", " + std::to_string(dom.hi) + "]");
  }
}

void check_same_domain(const PolyRecord& p, const PolyRecord& q) {
  if (!(p.domain == q.domain)) {
    throw Error(ErrorCode::DomainMismatch, "records " + std::to_string(p.id) + " and " +
                                               std::to_string(q.id) + " use different sample domains");
  }
}

std::vector<double> difference(std::span<const double> p, std::span<const double> q) {
  std::vector<double> r(std::max(p.size(), q.size()), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    r[i] = a - b;
  }
  return r;
}

// The polynomial r(x) reparametrized onto t in [-1, 1] via x = mid + half * t.
struct Local {
  double mid;
  double half;
  std::vector<double> s;
};

Local localize(std::span<const double> r, IntegrationDomain dom) {
  Local out{0.5 * (dom.lo + dom.hi), 0.5 * (dom.hi - dom.lo), {r.begin(), r.end()}};
  auto& s = out.s;
  const std::size_t len = s.size();
  // Taylor shift by repeated synthetic division: coefficients of r(mid + u).
  for (std::size_t i = 0; i + 1 < len; ++i) {
    for (std::size_t j = len - 1; j-- > i;) {
      s[j] += out.mid * s[j + 1];
    }
  }
  double scale = 1.0;
  for (auto& c : s) {
    c *= scale;
    scale *= out.half;
  }
  return out;
}

std::vector<double> derivative(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = c[j] * static_cast<double>(j);
  return d;
}

// Real roots of s on [-1, 1].
std::vector<double> roots_unit(std::span<const double> s) {
  double scale = 0.0;
  for (double c : s) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  std::size_t degree = s.size() - 1;
  while (degree > 0 && std::abs(s[degree]) <= 1e-14 * scale) --degree;
  if (degree == 0) return {};

  const auto d = static_cast<Eigen::Index>(degree);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -s[static_cast<std::size_t>(i)] / s[degree];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularSystem, "companion eigenvalue iteration did not converge");
  }

  const std::span<const double> trimmed = s.first(degree + 1);
  const auto ds = derivative(trimmed);
  std::vector<double> roots;
  for (const auto& z : solver.eigenvalues()) {
    if (std::abs(z.imag()) > 1e-7 * (1.0 + std::abs(z.real()))) continue;
    double t = z.real();
    if (!(t >= -1.0 - 1e-9 && t <= 1.0 + 1e-9)) continue;
    for (int it = 0; it < 3; ++it) {
      const double slope = horner(ds, t);
      if (slope == 0.0) break;
      const double next = t - horner(trimmed, t) / slope;
      if (!std::isfinite(next)) break;
      t = next;
    }
    roots.push_back(std::clamp(t, -1.0, 1.0));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double t : roots) {
    if (unique.empty() || t - unique.back() > 2e-10) unique.push_back(t);
  }
  return unique;
}

// Adaptive bisection over a 15-point Gauss-Kronrod rule with an absolute
// tolerance split proportionally to panel width.
template <typename F>
double integrate_abs_tol(const F& f, double a, double b, double tol, int depth) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  if (err <= tol || depth >= 40) return value;
  const double m = 0.5 * (a + b);
  return integrate_abs_tol(f, a, m, 0.5 * tol, depth + 1) +
         integrate_abs_tol(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace

IntegrationDomain fit_domain(const DomainSpec& domain) {
  if (domain.n == 0) throw Error(ErrorCode::EmptyDomain, "domain has no sample points");
  return {domain.abscissa(1), domain.abscissa(domain.n)};
}

IntegrationDomain index_domain(std::size_t m) { return {1.0, static_cast<double>(m)}; }

IntegrationDomain metric_domain(const PolyRecord& p, MetricDomain which) {
  return which == MetricDomain::Fit ? fit_domain(p.domain) : index_domain(p.m());
}

double l2_distance(std::span<const double> p, std::span<const double> q, IntegrationDomain dom) {
  check_domain(dom);
  const auto local = localize(difference(p, q), dom);
  const auto& s = local.s;
  // integral over [-1, 1] of t^k is 2 / (k + 1) for even k and 0 for odd k.
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < 2 * s.size(); k += 2) {
    double conv = 0.0;
    const std::size_t lo = k >= s.size() ? k - s.size() + 1 : 0;
    const std::size_t hi = std::min(k, s.size() - 1);
    for (std::size_t i = lo; i <= hi; ++i) conv += s[i] * s[k - i];
    integral += conv * 2.0 / static_cast<double>(k + 1);
  }
  return std::sqrt(std::max(0.0, local.half * integral));
}

double l1_distance(std::span<const double> p, std::span<const double> q, IntegrationDomain dom,
                   double abs_tol) {
  check_domain(dom);
  const auto local = localize(difference(p, q), dom);
  const auto& s = local.s;
  std::vector<double> knots{-1.0};
  for (double t : roots_unit(s)) {
    if (t > knots.back() && t < 1.0) knots.push_back(t);
  }
  knots.push_back(1.0);
  const auto integrand = [&s](double t) { return std::abs(horner(s, t)); };
  // x-space tolerance abs_tol corresponds to abs_tol / half in t-space.
  const double tol_t = abs_tol / local.half;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double width = knots[i + 1] - knots[i];
    total += integrate_abs_tol(integrand, knots[i], knots[i + 1], tol_t * width / 2.0, 0);
  }
  return local.half * total;
}

double linf_distance(std::span<const double> p, std::span<const double> q, IntegrationDomain dom) {
  check_domain(dom);
  const auto local = localize(difference(p, q), dom);
  const auto& s = local.s;
  double best = std::max(std::abs(horner(s, -1.0)), std::abs(horner(s, 1.0)));
  for (double t : roots_unit(derivative(s))) best = std::max(best, std::abs(horner(s, t)));
  return best;
}

double l2_distance(const PolyRecord& p, const PolyRecord& q, IntegrationDomain dom) {
  check_same_domain(p, q);
  return l2_distance(p.coeffs, q.coeffs, dom);
}

double l1_distance(const PolyRecord& p, const PolyRecord& q, IntegrationDomain dom, double abs_tol) {
  check_same_domain(p, q);
  return l1_distance(p.coeffs, q.coeffs, dom, abs_tol);
}

double linf_distance(const PolyRecord& p, const PolyRecord& q, IntegrationDomain dom) {
  check_same_domain(p, q);
  return linf_distance(p.coeffs, q.coeffs, dom);
}

double distance(Metric metric, const PolyRecord& p, const PolyRecord& q, IntegrationDomain dom) {
  switch (metric) {
    case Metric::L2: return l2_distance(p, q, dom);
    case Metric::L1: return l1_distance(p, q, dom);
    case Metric::Linf: return linf_distance(p, q, dom);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown metric");
}

std::vector<double> real_roots_in(std::span<const double> coeffs, IntegrationDomain dom) {
  check_domain(dom);
  const auto local = localize(coeffs, dom);
  auto roots = roots_unit(local.s);
  for (auto& t : roots) t = local.mid + local.half * t;
  return roots;
}

}  // namespace ares
