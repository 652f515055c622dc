#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "ares/ingest.hpp"

namespace ares::fixtures {

inline std::vector<double> uniform_values(std::mt19937_64& gen, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * unit_uniform(gen);
  return v;
}

// A slowly varying trend plus one narrow Gaussian peak at a random position
// and a little uniform noise: the residual of a low-degree fit concentrates
// around the peak.
inline std::vector<double> peaked_signal(std::mt19937_64& gen, std::size_t n) {
  const double a = unit_uniform(gen), b = unit_uniform(gen) - 0.5, c = unit_uniform(gen) - 0.5;
  const double centre = 0.1 + 0.8 * unit_uniform(gen);
  const double width = 0.004 + 0.006 * unit_uniform(gen);
  const double height = 0.5 + unit_uniform(gen);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = static_cast<double>(k + 1) / static_cast<double>(n);
    const double z = (x - centre) / width;
    v[k] = a + b * x + c * x * x + height * std::exp(-0.5 * z * z) + 0.01 * (unit_uniform(gen) - 0.5);
  }
  return v;
}

}  // namespace ares::fixtures
