#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ares/types.hpp"

namespace ares {

enum class Solver {
  QR,        // Householder QR of the design matrix
  NormalEq,  // Cholesky of A^T A, as written in the original algorithm
};

// The n x m design matrix for one (n, m, scaling) triple, with entry
// (k, j) = x_k^j for j = 0..m-1, plus its factorizations. Immutable and
// cheap to copy; copies share the same factorization.
class BasisContext {
 public:
  const DomainSpec& domain() const noexcept;
  std::size_t m() const noexcept;

  // 0-based row/column access into the design matrix.
  double design(std::size_t row, std::size_t col) const;

  // Reciprocal condition estimate of A^T A; the NormalEq path refuses to
  // solve when this falls below kMinNormalRcond.
  double normal_rcond() const noexcept;

  struct Impl;

 private:
  friend BasisContext build_basis(std::uint32_t, std::size_t, Scaling);
  friend PolyRecord fit(const BasisContext&, std::uint64_t, std::span<const double>, Solver);

  explicit BasisContext(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

inline constexpr double kMinNormalRcond = 1e-15;

// Throws InvalidTargetDim when m == 0 or m > n and EmptyDomain when n == 0.
BasisContext build_basis(std::uint32_t n, std::size_t m, Scaling scaling);

// Least-squares polynomial fit of one vector. The returned delta is the
// sup-norm residual at the sample points, evaluated exactly as
// reconstruct() evaluates the polynomial.
PolyRecord fit(const BasisContext& basis, std::uint64_t id, std::span<const double> values,
               Solver solver = Solver::QR);

inline PolyRecord fit(const BasisContext& basis, const VectorRecord& v,
                      Solver solver = Solver::QR) {
  return fit(basis, v.id, v.values, solver);
}

// Horner evaluation of the polynomial at the record's n sample points.
VectorRecord reconstruct(const PolyRecord& p);
void reconstruct_into(const PolyRecord& p, std::span<double> out);

// Fits every vector against one shared basis. Output order matches input
// order and the result does not depend on the thread count (0 = hardware).
std::vector<PolyRecord> compress_batch(std::span<const VectorRecord> vectors, std::size_t m,
                                       Scaling scaling, Solver solver = Solver::QR,
                                       unsigned threads = 1);

std::vector<VectorRecord> decompress_batch(std::span<const PolyRecord> records,
                                           unsigned threads = 1);

}  // namespace ares
