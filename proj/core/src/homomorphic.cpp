#include "ares/homomorphic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "ares/error.hpp"

namespace ares {
namespace {

void require_compatible(const PolyRecord& p, const PolyRecord& q) {
  if (!(p.domain == q.domain) || p.m() != q.m()) {
    throw Error(ErrorCode::DomainMismatch,
                "records " + std::to_string(p.id) + " and " + std::to_string(q.id) +
                    " differ in sample domain or coefficient count");
  }
}

void require_finite(double c) {
  if (!std::isfinite(c)) throw Error(ErrorCode::NonFiniteScalar, "scalar must be finite");
}

}  // namespace

PolyRecord add(const PolyRecord& p, const PolyRecord& q) {
  require_compatible(p, q);
  PolyRecord out = p;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += q.coeffs[i];
  out.delta = p.delta + q.delta;
  return out;
}

PolyRecord scale(const PolyRecord& p, double c) {
  require_finite(c);
  PolyRecord out = p;
  for (auto& a : out.coeffs) a *= c;
  out.delta = std::abs(c) * p.delta;
  return out;
}

void validate_covariance(const Eigen::MatrixXd& cov, std::size_t k) {
  if (cov.rows() != static_cast<Eigen::Index>(k) || cov.cols() != static_cast<Eigen::Index>(k)) {
    throw Error(ErrorCode::CovarianceShapeMismatch,
                "covariance is " + std::to_string(cov.rows()) + "x" + std::to_string(cov.cols()) +
                    " but the combination has " + std::to_string(k) + " terms");
  }
  if (!cov.allFinite()) throw Error(ErrorCode::InvalidCovariance, "covariance has non-finite entries");
  if (k == 0) return;
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::InvalidCovariance, "covariance is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-10) {
    throw Error(ErrorCode::InvalidCovariance, "covariance is not positive semidefinite");
  }
}

std::pair<PolyRecord, BoundLedger> linear_combination(std::span<const Term> terms,
                                                      const BoundMode& mode) {
  if (terms.empty()) throw Error(ErrorCode::EmptyCombination, "linear combination needs at least one term");
  const PolyRecord& first = *terms.front().record;
  for (const auto& t : terms) {
    require_finite(t.coefficient);
    require_compatible(first, *t.record);
  }
  if (mode.kind == BoundMode::Kind::Correlated) validate_covariance(mode.covariance, terms.size());

  PolyRecord out;
  out.id = first.id;
  out.domain = first.domain;
  out.coeffs.assign(first.m(), 0.0);
  double worst = 0.0;
  double squares = 0.0;
  for (const auto& t : terms) {
    for (std::size_t j = 0; j < out.coeffs.size(); ++j) out.coeffs[j] += t.coefficient * t.record->coeffs[j];
    worst += std::abs(t.coefficient) * t.record->delta;
    const double scaled = t.coefficient * t.record->delta;
    squares += scaled * scaled;
  }
  out.delta = worst;

  BoundLedger ledger{0.0, mode, terms.size()};
  switch (mode.kind) {
    case BoundMode::Kind::WorstCase:
      ledger.delta_bound = worst;
      break;
    case BoundMode::Kind::IndependentRMS:
      ledger.delta_bound = std::sqrt(squares);
      break;
    case BoundMode::Kind::Correlated: {
      Eigen::VectorXd c(static_cast<Eigen::Index>(terms.size()));
      for (std::size_t i = 0; i < terms.size(); ++i) c[static_cast<Eigen::Index>(i)] = terms[i].coefficient;
      ledger.delta_bound = std::sqrt(std::max(0.0, c.dot(mode.covariance * c)));
      break;
    }
  }
  return {std::move(out), std::move(ledger)};
}

std::pair<PolyRecord, BoundLedger> scale_after(std::pair<PolyRecord, BoundLedger> result,
                                               double c_final) {
  require_finite(c_final);
  result.first = scale(result.first, c_final);
  result.second.delta_bound *= std::abs(c_final);
  return result;
}

}  // namespace ares
