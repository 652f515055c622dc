#pragma once

#include <span>

namespace ares {

// Evaluates sum_j coeffs[j] * x^j by nested multiplication.
inline double horner(std::span<const double> coeffs, double x) noexcept {
  if (coeffs.empty()) return 0.0;
  double result = coeffs.back();
  for (auto i = coeffs.size() - 1; i-- > 0;) {
    result = result * x + coeffs[i];
  }
  return result;
}

}  // namespace ares
