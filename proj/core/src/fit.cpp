#include "ares/fit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

#include <cmath>
#include <string>

#include "ares/error.hpp"
#include "ares/horner.hpp"
#include "ares/parallel.hpp"

namespace ares {

struct BasisContext::Impl {
  DomainSpec domain;
  std::size_t m = 0;
  Eigen::MatrixXd design;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr;
  Eigen::LLT<Eigen::MatrixXd> gram;
  double gram_rcond = 0.0;
};

const DomainSpec& BasisContext::domain() const noexcept { return impl_->domain; }
std::size_t BasisContext::m() const noexcept { return impl_->m; }
double BasisContext::normal_rcond() const noexcept { return impl_->gram_rcond; }

double BasisContext::design(std::size_t row, std::size_t col) const {
  if (row >= static_cast<std::size_t>(impl_->design.rows()) ||
      col >= static_cast<std::size_t>(impl_->design.cols())) {
    throw Error(ErrorCode::InvalidArgument, "design index out of range");
  }
  return impl_->design(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

BasisContext build_basis(std::uint32_t n, std::size_t m, Scaling scaling) {
  if (n == 0) throw Error(ErrorCode::EmptyDomain, "n must be at least 1");
  if (m == 0 || m > n) {
    throw Error(ErrorCode::InvalidTargetDim,
                "target dimension " + std::to_string(m) + " outside [1, " + std::to_string(n) + "]");
  }
  auto impl = std::make_shared<BasisContext::Impl>();
  impl->domain = DomainSpec{n, scaling};
  impl->m = m;
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(m);
  impl->design.resize(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double x = impl->domain.abscissa(static_cast<std::size_t>(k) + 1);
    double power = 1.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      impl->design(k, j) = power;
      power *= x;
    }
  }
  impl->qr.compute(impl->design);
  const Eigen::MatrixXd gram = impl->design.transpose() * impl->design;
  impl->gram.compute(gram);
  impl->gram_rcond = impl->gram.info() == Eigen::Success ? impl->gram.rcond() : 0.0;
  if (!std::isfinite(impl->gram_rcond)) impl->gram_rcond = 0.0;
  return BasisContext(std::move(impl));
}

PolyRecord fit(const BasisContext& basis, std::uint64_t id, std::span<const double> values,
               Solver solver) {
  const auto& impl = *basis.impl_;
  if (values.size() != impl.domain.n) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector " + std::to_string(id) + " has length " + std::to_string(values.size()) +
                    ", basis expects " + std::to_string(impl.domain.n));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteInput, "vector " + std::to_string(id) + " has a non-finite entry");
    }
  }
  const Eigen::Map<const Eigen::VectorXd> b(values.data(), static_cast<Eigen::Index>(values.size()));

  Eigen::VectorXd a;
  if (solver == Solver::QR) {
    a = impl.qr.solve(b);
  } else {
    if (impl.gram_rcond < kMinNormalRcond) {
      throw Error(ErrorCode::SingularSystem,
                  "normal equations are numerically singular (rcond " +
                      std::to_string(impl.gram_rcond) + ") for vector " + std::to_string(id) +
                      "; use the QR solver (--solver qr) or unit scaling");
    }
    a = impl.gram.solve(impl.design.transpose() * b);
  }

  PolyRecord out;
  out.id = id;
  out.domain = impl.domain;
  out.coeffs.assign(a.data(), a.data() + a.size());
  for (double c : out.coeffs) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::SingularSystem,
                  "fit of vector " + std::to_string(id) + " produced non-finite coefficients");
    }
  }
  double delta = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double r = std::abs(values[k] - horner(out.coeffs, impl.domain.abscissa(k + 1)));
    if (r > delta) delta = r;
  }
  out.delta = delta;
  return out;
}

void reconstruct_into(const PolyRecord& p, std::span<double> out) {
  if (out.size() != p.domain.n) {
    throw Error(ErrorCode::DimensionMismatch, "output span does not match record dimension");
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = horner(p.coeffs, p.domain.abscissa(k + 1));
  }
}

VectorRecord reconstruct(const PolyRecord& p) {
  if (p.coeffs.empty()) throw Error(ErrorCode::InvalidTargetDim, "record has no coefficients");
  VectorRecord v;
  v.id = p.id;
  v.values.resize(p.domain.n);
  reconstruct_into(p, v.values);
  return v;
}

std::vector<PolyRecord> compress_batch(std::span<const VectorRecord> vectors, std::size_t m,
                                       Scaling scaling, Solver solver, unsigned threads) {
  if (vectors.empty()) return {};
  const std::size_t n = vectors.front().values.size();
  for (const auto& v : vectors) {
    if (v.values.size() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "vector " + std::to_string(v.id) + " has length " + std::to_string(v.values.size()) +
                      ", batch dimension is " + std::to_string(n));
    }
  }
  const auto basis = build_basis(static_cast<std::uint32_t>(n), m, scaling);
  std::vector<PolyRecord> out(vectors.size());
  parallel_for_blocks(vectors.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = fit(basis, vectors[i], solver);
  });
  return out;
}

std::vector<VectorRecord> decompress_batch(std::span<const PolyRecord> records, unsigned threads) {
  std::vector<VectorRecord> out(records.size());
  parallel_for_blocks(records.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = reconstruct(records[i]);
  });
  return out;
}

}  // namespace ares
