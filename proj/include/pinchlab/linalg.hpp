#pragma once

// Small dense helpers shared by all modules: orthonormality checks, QR
// retraction, Haar sampling of frames, bivector coordinates and seeded
// random streams.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pinchlab/error.hpp"

namespace pinchlab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kOrthogonalityTol = 1e-10;

/// splitmix64 finalizer; used to derive independent seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for stream `stream`, item `index` under master seed `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL)) ^ index);
}

/// max |AᵀA − I| over all entries.
inline double orthogonality_defect(const MatrixXd& A) {
  const MatrixXd gram = A.transpose() * A;
  return (gram - MatrixXd::Identity(A.cols(), A.cols())).cwiseAbs().maxCoeff();
}

inline void require_orthonormal_columns(const MatrixXd& A, const std::string& what,
                                        double tol = kOrthogonalityTol) {
  if (A.cols() == 0 || !A.allFinite() || orthogonality_defect(A) > tol) {
    throw Error(what + ": columns are not orthonormal");
  }
}

inline void require_square_orthogonal(const MatrixXd& A, Eigen::Index n, const std::string& what,
                                      double tol = kOrthogonalityTol) {
  if (A.rows() != n || A.cols() != n) throw Error(what + ": expected a square " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  require_orthonormal_columns(A, what, tol);
}

/// Thin Q factor of A with the sign convention diag(R) > 0. This is the QR
/// retraction used on Stiefel manifolds; the sign fix makes it continuous.
inline MatrixXd qf(const MatrixXd& A) {
  Eigen::HouseholderQR<MatrixXd> qr(A);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(A.rows(), A.cols());
  const MatrixXd& R = qr.matrixQR();
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  return Q;
}

/// Haar-distributed point of the Stiefel manifold V_k(Rⁿ).
inline MatrixXd random_stiefel(int n, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd G(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) G(i, j) = gauss(rng);
  return qf(G);
}

/// Extends orthonormal columns Y (n×k) to an orthonormal basis of Rⁿ whose
/// first k columns are exactly Y.
inline MatrixXd complete_basis(const MatrixXd& Y) {
  const Eigen::Index n = Y.rows();
  const Eigen::Index k = Y.cols();
  Eigen::HouseholderQR<MatrixXd> qr(Y);
  MatrixXd Q = qr.householderQ();
  MatrixXd out(n, n);
  out.leftCols(k) = Y;
  out.rightCols(n - k) = Q.rightCols(n - k);
  return out;
}

/// Lexicographic comparison of entries in column-major order.
inline bool lexicographically_less(const MatrixXd& a, const MatrixXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.data()[i] < b.data()[i]) return true;
    if (a.data()[i] > b.data()[i]) return false;
  }
  return false;
}

/// Index pairs (i<j) in lexicographic order; coordinates of Λ²Rⁿ.
inline std::vector<std::pair<int, int>> bivector_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

/// Coefficients of a∧b in the basis e_i∧e_j, i<j.
inline VectorXd wedge(const VectorXd& a, const VectorXd& b) {
  const auto n = static_cast<int>(a.size());
  VectorXd w(n * (n - 1) / 2);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(idx++) = a(i) * b(j) - a(j) * b(i);
  return w;
}

/// The skew matrix G with G(i,j) = w_ij, G(j,i) = −w_ij. For f = ⟨g, a∧b⟩
/// one has ∂f/∂a = G b and ∂f/∂b = −G a.
inline MatrixXd skew_from_bivector(const VectorXd& w, int n) {
  MatrixXd G = MatrixXd::Zero(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      G(i, j) = w(idx);
      G(j, i) = -w(idx);
      ++idx;
    }
  return G;
}

}  // namespace pinchlab
