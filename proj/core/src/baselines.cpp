#include "ares/baselines.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "ares/error.hpp"
#include "ares/ingest.hpp"

namespace ares {
namespace {

void require_finite(const Eigen::MatrixXd& data) {
  if (!data.allFinite()) throw Error(ErrorCode::NonFiniteInput, "data matrix has non-finite entries");
}

double frobenius_residual(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w, const Eigen::MatrixXd& h) {
  return (v - w * h).norm();
}

// Solves (T - sigma I) y = rhs for symmetric tridiagonal T by Gaussian
// elimination with partial pivoting; tiny pivots are replaced by `floor` so
// a shift at an eigenvalue still yields a (large) solution.
Eigen::VectorXd shifted_tridiagonal_solve(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double sigma,
                                          double floor, Eigen::VectorXd rhs) {
  const Eigen::Index n = diag.size();
  // Row i of U holds u0 (diagonal), u1, u2 (two superdiagonals).
  Eigen::VectorXd u0 = diag.array() - sigma, u1 = Eigen::VectorXd::Zero(n), u2 = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) u1[i] = sub[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    double below = sub[i];  // entry (i + 1, i)
    double next_diag = u0[i + 1];
    double next_sup = i + 2 < n ? sub[i + 1] : 0.0;
    if (std::abs(below) > std::abs(u0[i])) {
      // Swap rows i and i + 1.
      const double r0 = u0[i], r1 = u1[i], r2 = u2[i];
      u0[i] = below;
      u1[i] = next_diag;
      u2[i] = next_sup;
      below = r0;
      next_diag = r1;
      next_sup = r2;
      std::swap(rhs[i], rhs[i + 1]);
    }
    if (std::abs(u0[i]) < floor) u0[i] = u0[i] < 0 ? -floor : floor;
    const double f = below / u0[i];
    u0[i + 1] = next_diag - f * u1[i];
    u1[i + 1] = next_sup - f * u2[i];
    rhs[i + 1] -= f * rhs[i];
  }
  if (std::abs(u0[n - 1]) < floor) u0[n - 1] = u0[n - 1] < 0 ? -floor : floor;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double acc = rhs[i];
    if (i + 1 < n) acc -= u1[i] * y[i + 1];
    if (i + 2 < n) acc -= u2[i] * y[i + 2];
    y[i] = acc / u0[i];
  }
  return y;
}

// Top-k eigenvectors of a symmetric matrix, largest eigenvalue first:
// Householder tridiagonalization, all eigenvalues of the tridiagonal form,
// inverse iteration for the k wanted ones (re-orthogonalized within
// clusters), then back-transformation.
Eigen::MatrixXd top_eigenvectors(const Eigen::MatrixXd& sym, Eigen::Index k) {
  const Eigen::Index n = sym.rows();
  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(sym);
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd sub = tri.subDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> values;
  values.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (values.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "PCA eigensolver did not converge");

  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(sub[i - 1]);
    if (i + 1 < n) row += std::abs(sub[i]);
    norm = std::max(norm, row);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = eps * (norm > 0.0 ? norm : 1.0);
  const double cluster = 1e-3 * norm;

  Eigen::MatrixXd z(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const double lambda = values.eigenvalues()[n - 1 - c];
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i + 1) * (c + 1.0));
    for (int it = 0; it < 4; ++it) {
      x = shifted_tridiagonal_solve(diag, sub, lambda, floor, x / x.cwiseAbs().maxCoeff());
      for (Eigen::Index p = 0; p < c; ++p) {
        if (std::abs(values.eigenvalues()[n - 1 - p] - lambda) <= cluster) x -= z.col(p).dot(x) * z.col(p);
      }
      x.normalize();
    }
    z.col(c) = x;
  }
  return tri.matrixQ() * z;
}

}  // namespace

Eigen::MatrixXd to_matrix(std::span<const VectorRecord> vectors) {
  if (vectors.empty()) return {};
  const auto n = vectors.front().values.size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].values.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "vector " + std::to_string(vectors[i].id) + " has the wrong length");
    }
    for (std::size_t k = 0; k < n; ++k) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = vectors[i].values[k];
    }
  }
  return out;
}

PcaResult pca_fit_transform(const Eigen::MatrixXd& data, std::size_t m) {
  const auto rows = data.rows();
  const auto cols = data.cols();
  if (rows < 1 || cols < 1) throw Error(ErrorCode::EmptyDomain, "PCA needs a non-empty matrix");
  if (m == 0 || static_cast<Eigen::Index>(m) > std::min(rows, cols)) {
    throw Error(ErrorCode::InvalidTargetDim, "PCA target dimension " + std::to_string(m) +
                                                 " exceeds min(N, n) = " + std::to_string(std::min(rows, cols)));
  }
  require_finite(data);

  PcaResult out;
  out.model.mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - out.model.mean;
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(cols, cols);
  scatter.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  scatter = scatter.selfadjointView<Eigen::Lower>();

  const auto k = static_cast<Eigen::Index>(m);
  const Eigen::MatrixXd vectors = top_eigenvectors(scatter, k);
  out.model.components.resize(k, cols);
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::VectorXd v = vectors.col(i);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    out.model.components.row(i) = v.transpose();
  }
  out.scores = centered * out.model.components.transpose();
  return out;
}

Eigen::MatrixXd pca_inverse(const PcaModel& model, const Eigen::MatrixXd& scores) {
  if (scores.cols() != model.components.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "scores have " + std::to_string(scores.cols()) +
                                                  " columns, model has " +
                                                  std::to_string(model.components.rows()) + " components");
  }
  return (scores * model.components).rowwise() + model.mean;
}

NmfModel nmf_fit(const Eigen::MatrixXd& data, std::size_t m, std::size_t iters, std::uint64_t seed) {
  if (m == 0) throw Error(ErrorCode::InvalidTargetDim, "NMF rank must be at least 1");
  const auto k = static_cast<Eigen::Index>(m);
  require_finite(data);
  const double mean = data.size() > 0 ? data.mean() : 0.0;
  const double scale = mean > 0.0 ? std::sqrt(mean / static_cast<double>(m)) : 0.0;
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd w(data.rows(), k);
  Eigen::MatrixXd h(k, data.cols());
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < k; ++j) w(i, j) = scale * unit_uniform(gen);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j) h(i, j) = scale * unit_uniform(gen);
  return nmf_fit_from(data, std::move(w), std::move(h), iters);
}

NmfModel nmf_fit_from(const Eigen::MatrixXd& data, Eigen::MatrixXd W, Eigen::MatrixXd H,
                      std::size_t iters) {
  if (iters == 0) throw Error(ErrorCode::InvalidArgument, "NMF needs at least one iteration");
  require_finite(data);
  if ((data.array() < 0.0).any()) throw Error(ErrorCode::NegativeInput, "NMF input has negative entries");
  if (W.rows() != data.rows() || H.cols() != data.cols() || W.cols() != H.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "initial factors do not match the data shape");
  }
  if ((W.array() < 0.0).any() || (H.array() < 0.0).any()) {
    throw Error(ErrorCode::NegativeInput, "initial factors have negative entries");
  }

  NmfModel model{std::move(W), std::move(H), {}};
  auto& w = model.W;
  auto& h = model.H;
  model.objective.reserve(iters + 1);
  model.objective.push_back(frobenius_residual(data, w, h));
  for (std::size_t it = 0; it < iters; ++it) {
    const Eigen::MatrixXd wt_v = w.transpose() * data;
    const Eigen::MatrixXd wt_w_h = (w.transpose() * w) * h;
    h.array() *= wt_v.array() / (wt_w_h.array() + kNmfEpsilon);

    const Eigen::MatrixXd v_ht = data * h.transpose();
    const Eigen::MatrixXd w_h_ht = w * (h * h.transpose());
    w.array() *= v_ht.array() / (w_h_ht.array() + kNmfEpsilon);

    model.objective.push_back(frobenius_residual(data, w, h));
  }
  return model;
}

Eigen::MatrixXd nmf_reconstruct(const NmfModel& model) { return model.W * model.H; }

}  // namespace ares
