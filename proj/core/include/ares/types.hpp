#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ares {

// Abscissa convention for the sample points of a fitted vector.
//   Raw:  x_k = k        for k = 1..n
//   Unit: x_k = k / n    for k = 1..n
enum class Scaling : std::uint8_t { Raw = 0, Unit = 1 };

struct DomainSpec {
  std::uint32_t n = 0;
  Scaling scaling = Scaling::Unit;

  // Sample point for the 1-based coordinate index k.
  double abscissa(std::size_t k) const noexcept {
    return scaling == Scaling::Raw ? static_cast<double>(k)
                                   : static_cast<double>(k) / static_cast<double>(n);
  }

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

// One input vector viewed as a discrete function over {1, ..., n}.
struct VectorRecord {
  std::uint64_t id = 0;
  std::vector<double> values;

  friend bool operator==(const VectorRecord&, const VectorRecord&) = default;
};

// Compressed form of a vector: coefficients a_0..a_{m-1} of the fitted
// polynomial plus the sup-norm residual observed at the sample points.
struct PolyRecord {
  std::uint64_t id = 0;
  std::vector<double> coeffs;
  DomainSpec domain;
  double delta = 0.0;

  std::size_t m() const noexcept { return coeffs.size(); }

  friend bool operator==(const PolyRecord&, const PolyRecord&) = default;
};

}  // namespace ares
