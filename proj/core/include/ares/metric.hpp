#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ares/types.hpp"

namespace ares {

struct IntegrationDomain {
  double lo = 0.0;
  double hi = 1.0;
};

enum class Metric { L2, L1, Linf };

// Which interval distances integrate over.
//   Fit:   the fitting domain [x_1, x_n] of the records' DomainSpec
//   Index: the literal [1, m] over the reduced-dimension indices
enum class MetricDomain { Fit, Index };

IntegrationDomain fit_domain(const DomainSpec& domain);
IntegrationDomain index_domain(std::size_t m);
IntegrationDomain metric_domain(const PolyRecord& p, MetricDomain which);

inline constexpr double kDefaultQuadratureTolerance = 1e-9;

// Distances between polynomials given by monomial coefficients. Inputs of
// different lengths are zero-padded. All throw InvalidDomain unless lo < hi.

// sqrt(integral of (P - Q)^2), in closed form.
double l2_distance(std::span<const double> p, std::span<const double> q, IntegrationDomain dom);

// integral of |P - Q| by adaptive Gauss-Kronrod on panels split at the real
// roots of P - Q.
double l1_distance(std::span<const double> p, std::span<const double> q, IntegrationDomain dom,
                   double abs_tol = kDefaultQuadratureTolerance);

// max |P - Q| over the domain, from the endpoints and the critical points.
double linf_distance(std::span<const double> p, std::span<const double> q, IntegrationDomain dom);

// Record overloads additionally require p.domain == q.domain (DomainMismatch).
double l2_distance(const PolyRecord& p, const PolyRecord& q, IntegrationDomain dom);
double l1_distance(const PolyRecord& p, const PolyRecord& q, IntegrationDomain dom,
                   double abs_tol = kDefaultQuadratureTolerance);
double linf_distance(const PolyRecord& p, const PolyRecord& q, IntegrationDomain dom);

double distance(Metric metric, const PolyRecord& p, const PolyRecord& q, IntegrationDomain dom);

// Real roots of the polynomial inside [lo, hi], ascending, found as
// eigenvalues of the companion matrix and polished by Newton steps. Roots
// closer than 1e-10 (relative to the interval width) are merged.
std::vector<double> real_roots_in(std::span<const double> coeffs, IntegrationDomain dom);

}  // namespace ares
