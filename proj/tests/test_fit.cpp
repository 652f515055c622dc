#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ares/error.hpp"
#include "ares/fit.hpp"
#include "ares/horner.hpp"
#include "ares/ingest.hpp"
#include "oracles.hpp"

namespace ares {
namespace {

double coeff_scale(const std::vector<double>& c) {
  double s = 1.0;
  for (double x : c) s = std::max(s, std::abs(x));
  return s;
}

std::vector<double> random_values(std::mt19937_64& gen, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * unit_uniform(gen);
  return v;
}

TEST(Horner, EvaluatesMonomialSums) {
  const std::vector<double> c{1.0, -2.0, 0.5};
  EXPECT_DOUBLE_EQ(horner(c, 2.0), 1.0 - 4.0 + 2.0);
  EXPECT_DOUBLE_EQ(horner(std::vector<double>{}, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(horner(std::vector<double>{7.0}, 100.0), 7.0);
}

TEST(BuildBasis, SmallRawDesign) {
  const auto b = build_basis(3, 2, Scaling::Raw);
  const double expected[3][2] = {{1, 1}, {1, 2}, {1, 3}};
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(b.design(k, j), expected[k][j]);
}

TEST(BuildBasis, ConstantColumn) {
  const auto b = build_basis(4, 1, Scaling::Raw);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(b.design(k, 0), 1.0);
}

TEST(BuildBasis, UnitScalingLastEntryIsOne) {
  const auto b = build_basis(1000, 10, Scaling::Unit);
  EXPECT_EQ(b.design(999, 9), 1.0);
  EXPECT_DOUBLE_EQ(b.design(0, 1), 1e-3);
  EXPECT_EQ(b.domain().n, 1000u);
  EXPECT_EQ(b.m(), 10u);
}

TEST(BuildBasis, ColumnsArePowersOfSecondColumn) {
  const auto b = build_basis(20, 6, Scaling::Unit);
  for (int k = 0; k < 20; ++k)
    for (int j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(b.design(k, j), std::pow(b.design(k, 1), j));
}

TEST(BuildBasis, RejectsBadShapes) {
  try {
    build_basis(3, 4, Scaling::Raw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidTargetDim);
  }
  try {
    build_basis(0, 1, Scaling::Raw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDomain);
  }
  EXPECT_THROW(build_basis(5, 0, Scaling::Unit), Error);
}

TEST(Fit, ConstantVector) {
  for (std::size_t m : {1u, 3u, 10u}) {
    const auto basis = build_basis(50, m, Scaling::Unit);
    const double c = 3.25;
    const auto p = fit(basis, 7, std::vector<double>(50, c));
    EXPECT_EQ(p.id, 7u);
    ASSERT_EQ(p.coeffs.size(), m);
    EXPECT_NEAR(p.coeffs[0], c, 1e-9 * c);
    for (std::size_t j = 1; j < m; ++j) EXPECT_NEAR(p.coeffs[j], 0.0, 1e-6);
    EXPECT_LE(p.delta, 1e-9 * c + 1e-12);
  }
}

TEST(Fit, LinearVectorOnRawDomain) {
  std::vector<double> v(30);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>(k + 1);
  const auto p = fit(build_basis(30, 4, Scaling::Raw), 0, v);
  EXPECT_NEAR(p.coeffs[0], 0.0, 1e-8);
  EXPECT_NEAR(p.coeffs[1], 1.0, 1e-8);
  EXPECT_NEAR(p.coeffs[2], 0.0, 1e-8);
  EXPECT_NEAR(p.coeffs[3], 0.0, 1e-8);
  EXPECT_LE(p.delta, 1e-8);
}

TEST(Fit, MatchesCramerOracle) {
  const std::vector<double> v{1, 2, 2, 3};
  const auto [a0, a1] = oracle::cramer_line_fit({1, 2, 3, 4}, v);
  // Frozen oracle output: A^T A = [[4, 10], [10, 30]], A^T b = [8, 23].
  EXPECT_DOUBLE_EQ(a0, 0.5);
  EXPECT_DOUBLE_EQ(a1, 0.6);
  for (auto solver : {Solver::QR, Solver::NormalEq}) {
    const auto p = fit(build_basis(4, 2, Scaling::Raw), 0, v, solver);
    EXPECT_NEAR(p.coeffs[0], 0.5, 1e-12);
    EXPECT_NEAR(p.coeffs[1], 0.6, 1e-12);
    const auto r = reconstruct(p);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(r.values[k], a0 + a1 * (k + 1), 1e-12);
    EXPECT_NEAR(p.delta, 0.3, 1e-12);  // |2 - 1.7| and |2 - 2.3|
  }
}

TEST(Fit, Errors) {
  const auto basis = build_basis(4, 2, Scaling::Raw);
  std::vector<double> bad{1, 2, NAN, 4};
  try {
    fit(basis, 3, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteInput);
  }
  try {
    fit(basis, 3, std::vector<double>{1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Fit, NormalEquationsOnRawThousandAreSingular) {
  const auto basis = build_basis(1000, 10, Scaling::Raw);
  std::mt19937_64 gen(1);
  try {
    fit(basis, 42, random_values(gen, 1000), Solver::NormalEq);
    FAIL() << "expected SingularSystem";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularSystem);
    EXPECT_NE(std::string(e.what()).find("qr"), std::string::npos);
  }
  // The QR path still produces a usable fit on the same configuration.
  const auto p = fit(basis, 42, random_values(gen, 1000), Solver::QR);
  EXPECT_TRUE(std::isfinite(p.delta));
}

TEST(Fit, NormalEqAgreesWithQrOnWellConditionedBasis) {
  std::mt19937_64 gen(5);
  const auto basis = build_basis(200, 4, Scaling::Unit);
  const auto v = random_values(gen, 200);
  const auto a = fit(basis, 0, v, Solver::QR);
  const auto b = fit(basis, 0, v, Solver::NormalEq);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(a.coeffs[j], b.coeffs[j], 1e-8 * coeff_scale(a.coeffs));
}

TEST(Reconstruct, Examples) {
  PolyRecord constant{0, {2.5}, {5, Scaling::Raw}, 0.0};
  EXPECT_EQ(reconstruct(constant).values, std::vector<double>(5, 2.5));
  PolyRecord line{0, {0.0, 1.0}, {3, Scaling::Raw}, 0.0};
  EXPECT_EQ(reconstruct(line).values, (std::vector<double>{1, 2, 3}));
}

TEST(Reconstruct, SupErrorEqualsDeltaExactly) {
  std::mt19937_64 gen(11);
  const auto basis = build_basis(300, 7, Scaling::Unit);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = random_values(gen, 300, 0.0, 1.0);
    const auto p = fit(basis, 0, v);
    const auto r = reconstruct(p);
    double sup = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) sup = std::max(sup, std::abs(v[k] - r.values[k]));
    EXPECT_EQ(sup, p.delta);
  }
}

TEST(Properties, FitIsLinear) {
  std::mt19937_64 gen(2024);
  const auto basis = build_basis(1000, 10, Scaling::Unit);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v1 = random_values(gen, 1000);
    const auto v2 = random_values(gen, 1000);
    const double c1 = -10 + 20 * unit_uniform(gen);
    const double c2 = -10 + 20 * unit_uniform(gen);
    std::vector<double> mix(1000);
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = c1 * v1[k] + c2 * v2[k];
    const auto p1 = fit(basis, 0, v1);
    const auto p2 = fit(basis, 0, v2);
    const auto pm = fit(basis, 0, mix);
    const double scale = coeff_scale(pm.coeffs);
    for (std::size_t j = 0; j < 10; ++j) {
      EXPECT_LE(std::abs(pm.coeffs[j] - (c1 * p1.coeffs[j] + c2 * p2.coeffs[j])), 1e-9 * scale);
    }
  }
}

// Storing 12 monomial coefficients on [1/12, 1] in binary64 alone costs
// about 2.6e-8 relative (exact solution, rounded, evaluated exactly), so
// n = 12 is checked separately against that floor.
TEST(Properties, InterpolationLimit) {
  std::mt19937_64 gen(3);
  for (std::size_t n = 1; n <= 11; ++n) {
    const auto basis = build_basis(static_cast<std::uint32_t>(n), n, Scaling::Unit);
    for (int trial = 0; trial < 10; ++trial) {
      const auto v = random_values(gen, n, -5.0, 5.0);
      const auto r = reconstruct(fit(basis, 0, v));
      double vmax = 0.0, err = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        vmax = std::max(vmax, std::abs(v[k]));
        err = std::max(err, std::abs(r.values[k] - v[k]));
      }
      EXPECT_LE(err, 1e-8 * (1.0 + vmax)) << "n=" << n;
    }
  }
}

TEST(Properties, InterpolationAtTwelvePoints) {
  std::mt19937_64 gen(4);
  const auto basis = build_basis(12, 12, Scaling::Unit);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_values(gen, 12, -5.0, 5.0);
    const auto r = reconstruct(fit(basis, 0, v));
    double vmax = 0.0, err = 0.0;
    for (std::size_t k = 0; k < 12; ++k) {
      vmax = std::max(vmax, std::abs(v[k]));
      err = std::max(err, std::abs(r.values[k] - v[k]));
    }
    EXPECT_LE(err, 1e-7 * (1.0 + vmax));
  }
}

TEST(Properties, ProjectionIsIdempotent) {
  std::mt19937_64 gen(8);
  const auto basis = build_basis(500, 10, Scaling::Unit);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = fit(basis, 0, random_values(gen, 500));
    const auto again = fit(basis, reconstruct(p));
    const double scale = coeff_scale(p.coeffs);
    for (std::size_t j = 0; j < 10; ++j) EXPECT_LE(std::abs(again.coeffs[j] - p.coeffs[j]), 1e-9 * scale);
    EXPECT_LE(again.delta, 1e-9);
  }
}

TEST(Properties, ResidualIsOptimalAgainstPerturbations) {
  std::mt19937_64 gen(13);
  const auto residual = [](const PolyRecord& p, const std::vector<double>& coeffs, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double r = v[k] - horner(coeffs, p.domain.abscissa(k + 1));
      s += r * r;
    }
    return s;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + gen() % 7;
    const std::size_t m = 1 + gen() % std::min<std::size_t>(3, n);
    const auto v = random_values(gen, n);
    const auto p = fit(build_basis(static_cast<std::uint32_t>(n), m, Scaling::Unit), 0, v);
    const double best = residual(p, p.coeffs, v);
    for (int i = 0; i < 1000; ++i) {
      auto c = p.coeffs;
      for (auto& x : c) x += 1e-3 * (unit_uniform(gen) - 0.5);
      EXPECT_LE(best, residual(p, c, v) + 1e-15);
    }
  }
}

TEST(CompressBatch, EmptyAndIdentical) {
  EXPECT_TRUE(compress_batch({}, 3, Scaling::Unit).empty());
  std::vector<VectorRecord> twins{{0, {1, 4, 9, 16, 25}}, {1, {1, 4, 9, 16, 25}}};
  const auto out = compress_batch(twins, 3, Scaling::Unit);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].coeffs, out[1].coeffs);
  EXPECT_EQ(out[0].delta, out[1].delta);
  EXPECT_EQ(out[0].id, 0u);
  EXPECT_EQ(out[1].id, 1u);
}

TEST(CompressBatch, ThreadCountDoesNotChangeResults) {
  const auto data = generate_uniform(77, 100, 1000);
  const auto single = compress_batch(data, 10, Scaling::Unit, Solver::QR, 1);
  for (unsigned threads : {2u, 3u, 8u, 0u}) {
    const auto multi = compress_batch(data, 10, Scaling::Unit, Solver::QR, threads);
    ASSERT_EQ(multi.size(), single.size());
    for (std::size_t i = 0; i < single.size(); ++i) EXPECT_EQ(multi[i], single[i]);
  }
  double mean_delta = 0.0;
  for (const auto& p : single) mean_delta += p.delta / 100.0;
  EXPECT_GT(mean_delta, 0.0);
}

TEST(CompressBatch, MixedDimensionsRejected) {
  std::vector<VectorRecord> mixed{{0, {1, 2, 3}}, {1, {1, 2}}};
  try {
    compress_batch(mixed, 2, Scaling::Unit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(CompressBatch, PerVectorErrorNamesOffendingId) {
  std::vector<VectorRecord> data{{10, {1, 2, 3}}, {11, {1, INFINITY, 3}}, {12, {1, 2, 3}}};
  try {
    compress_batch(data, 2, Scaling::Unit, Solver::QR, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteInput);
    EXPECT_NE(std::string(e.what()).find("11"), std::string::npos);
  }
}

}  // namespace
}  // namespace ares
