#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <utility>

#include "ares/types.hpp"

namespace ares {

// How per-record residual bounds combine across a linear combination.
struct BoundMode {
  enum class Kind { WorstCase, IndependentRMS, Correlated };

  Kind kind = Kind::WorstCase;
  Eigen::MatrixXd covariance;  // k x k, only read for Correlated

  static BoundMode worst_case() { return {Kind::WorstCase, {}}; }
  static BoundMode independent_rms() { return {Kind::IndependentRMS, {}}; }
  static BoundMode correlated(Eigen::MatrixXd cov) { return {Kind::Correlated, std::move(cov)}; }
};

struct BoundLedger {
  double delta_bound = 0.0;
  BoundMode mode;
  std::size_t terms = 0;
};

struct Term {
  double coefficient;
  const PolyRecord* record;
};

// Coefficient-wise sum; delta = p.delta + q.delta. Keeps p.id.
PolyRecord add(const PolyRecord& p, const PolyRecord& q);

// Coefficients times c; delta = |c| * p.delta.
PolyRecord scale(const PolyRecord& p, double c);

// sum_i c_i * P_i with the error bound of the chosen mode:
//   WorstCase       sum |c_i| delta_i
//   IndependentRMS  sqrt(sum c_i^2 delta_i^2)
//   Correlated      sqrt(c^T Sigma c)
// The returned record carries the worst-case bound as its delta and the id
// of the first term.
std::pair<PolyRecord, BoundLedger> linear_combination(std::span<const Term> terms,
                                                      const BoundMode& mode);

// Scales a combination result and its bound by c_final (bound by |c_final|).
std::pair<PolyRecord, BoundLedger> scale_after(std::pair<PolyRecord, BoundLedger> result,
                                               double c_final);

// Throws CovarianceShapeMismatch or InvalidCovariance unless cov is k x k,
// symmetric within 1e-12 and has no eigenvalue below -1e-10.
void validate_covariance(const Eigen::MatrixXd& cov, std::size_t k);

}  // namespace ares
