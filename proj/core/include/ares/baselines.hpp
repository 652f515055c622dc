#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ares/types.hpp"

namespace ares {

// Stacks equal-length vectors as the rows of an N x n matrix.
Eigen::MatrixXd to_matrix(std::span<const VectorRecord> vectors);

// PCA via the symmetric eigendecomposition of the n x n scatter matrix of
// the centered data. Components are the top-m eigenvectors in descending
// eigenvalue order, each signed so its largest-magnitude entry is positive.
struct PcaModel {
  Eigen::RowVectorXd mean;     // 1 x n
  Eigen::MatrixXd components;  // m x n, orthonormal rows

  // Bytes that must be stored alongside the scores to decompress.
  std::uint64_t state_bytes() const noexcept {
    return 8u * static_cast<std::uint64_t>(mean.size() + components.size());
  }
};

struct PcaResult {
  PcaModel model;
  Eigen::MatrixXd scores;  // N x m
};

PcaResult pca_fit_transform(const Eigen::MatrixXd& data, std::size_t m);
Eigen::MatrixXd pca_inverse(const PcaModel& model, const Eigen::MatrixXd& scores);

// Lee-Seung multiplicative updates for V ~ W H under the Frobenius norm:
//   H <- H .* (W^T V) ./ (W^T W H + eps)
//   W <- W .* (V H^T) ./ (W H H^T + eps)
inline constexpr double kNmfEpsilon = 1e-12;
inline constexpr std::size_t kNmfDefaultIterations = 200;

struct NmfModel {
  Eigen::MatrixXd W;  // N x m
  Eigen::MatrixXd H;  // m x n
  // ||V - W H||_F at initialization and after every iteration.
  std::vector<double> objective;

  std::uint64_t state_bytes() const noexcept { return 8u * static_cast<std::uint64_t>(H.size()); }
};

// Random init: entries sqrt(mean(V) / m) * U[0, 1), W row-major then H,
// from std::mt19937_64(seed).
NmfModel nmf_fit(const Eigen::MatrixXd& data, std::size_t m, std::size_t iters, std::uint64_t seed);
NmfModel nmf_fit_from(const Eigen::MatrixXd& data, Eigen::MatrixXd W, Eigen::MatrixXd H,
                      std::size_t iters);
Eigen::MatrixXd nmf_reconstruct(const NmfModel& model);

}  // namespace ares
