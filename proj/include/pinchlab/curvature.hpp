#pragma once

// Pointwise tensor algebra of an isometric immersion into a space form:
// second fundamental form, the Gauss equation, sectional and Ricci
// curvature, mean curvature, the pinching bound b(n,H,c), the Lawson–Simons
// functional Θ_p and the isotropic-curvature expression.
//
// Conventions. Tangent and normal frames are orthonormal and fixed; normal
// vectors are coefficient arrays in the normal frame. The curvature tensor
// stores R_ijkl = g(R(e_i,e_j)e_k, e_l) and is normalized so that the round
// unit sphere has R_ijji = +1, i.e. K(e_i∧e_j) = R_ijji.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pinchlab/error.hpp"
#include "pinchlab/linalg.hpp"

namespace pinchlab {

/// Asymmetry below this is treated as floating noise and symmetrized away.
inline constexpr double kSymmetrizeTol = 1e-12;

/// Coefficients h[a][i][j] = ⟨α(e_i,e_j), ξ_a⟩. Stored as one symmetric
/// n×n shape operator A_a per normal direction.
class SecondFundamentalForm {
 public:
  SecondFundamentalForm(int n, std::vector<MatrixXd> shape_operators)
      : n_(n), shape_(std::move(shape_operators)) {
    if (n_ < 2) throw Error("second fundamental form: tangent dimension must be >= 2");
    if (shape_.empty()) throw Error("second fundamental form: codimension must be >= 1");
    for (auto& A : shape_) {
      if (A.rows() != n_ || A.cols() != n_) throw Error("second fundamental form: shape operator has wrong size");
      if (!A.allFinite()) throw Error("second fundamental form: non-finite entry");
      const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
      if (asym > kSymmetrizeTol) {
        throw Error("second fundamental form: h[a][i][j] != h[a][j][i] (asymmetry " + std::to_string(asym) + ")");
      }
      A = 0.5 * (A + A.transpose()).eval();
    }
  }

  static SecondFundamentalForm zero(int n, int m) {
    return {n, std::vector<MatrixXd>(static_cast<std::size_t>(m), MatrixXd::Zero(n, n))};
  }

  /// α(X,Y) = λ⟨X,Y⟩ξ₁; a sphere of radius r has λ = 1/r.
  static SecondFundamentalForm umbilic(int n, double lambda, int m = 1) {
    std::vector<MatrixXd> h(static_cast<std::size_t>(m), MatrixXd::Zero(n, n));
    h[0] = lambda * MatrixXd::Identity(n, n);
    return {n, std::move(h)};
  }

  [[nodiscard]] int dim() const { return n_; }
  [[nodiscard]] int codim() const { return static_cast<int>(shape_.size()); }

  [[nodiscard]] double operator()(int a, int i, int j) const { return shape_[static_cast<std::size_t>(a)](i, j); }
  [[nodiscard]] const MatrixXd& shape_operator(int a) const { return shape_[static_cast<std::size_t>(a)]; }
  [[nodiscard]] const std::vector<MatrixXd>& shape_operators() const { return shape_; }

  /// α(e_i, e_j) as a normal coefficient vector.
  [[nodiscard]] VectorXd alpha(int i, int j) const {
    VectorXd v(codim());
    for (int a = 0; a < codim(); ++a) v(a) = shape_[static_cast<std::size_t>(a)](i, j);
    return v;
  }

  /// ⟨α_ij, α_kl⟩
  [[nodiscard]] double inner(int i, int j, int k, int l) const {
    double s = 0.0;
    for (const auto& A : shape_) s += A(i, j) * A(k, l);
    return s;
  }

  /// ‖α‖² = Σ_a Σ_ij h[a][i][j]²
  [[nodiscard]] double squared_norm() const {
    double s = 0.0;
    for (const auto& A : shape_) s += A.squaredNorm();
    return s;
  }

 private:
  int n_;
  std::vector<MatrixXd> shape_;
};

struct AmbientSpace {
  double c = 0.0;

  explicit AmbientSpace(double curvature = 0.0) : c(curvature) {
    if (!std::isfinite(c)) throw Error("ambient curvature must be finite");
  }
};

struct MeanCurvature {
  VectorXd vector;  // coefficients of 𝓗 in the normal frame
  double norm = 0.0;
};

/// Dense R[i][j][k][l] = g(R(e_i,e_j)e_k, e_l).
class CurvatureTensor {
 public:
  explicit CurvatureTensor(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {
    if (n < 2) throw Error("curvature tensor: dimension must be >= 2");
  }

  /// R(X,Y)Z = k(⟨Y,Z⟩X − ⟨X,Z⟩Y)
  static CurvatureTensor constant_curvature(int n, double k) {
    CurvatureTensor R(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        R(i, j, j, i) = k;
        R(i, j, i, j) = -k;
      }
    return R;
  }

  [[nodiscard]] int dim() const { return n_; }

  double& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  [[nodiscard]] double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }

  /// R(a,b,c,d) = Σ a_i b_j c_k d_l R_ijkl.
  [[nodiscard]] double contract(const VectorXd& a, const VectorXd& b, const VectorXd& c, const VectorXd& d) const {
    double total = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n_; ++i) {
      double si = 0.0;
      for (int j = 0; j < n_; ++j) {
        double sj = 0.0;
        for (int k = 0; k < n_; ++k) {
          double sk = 0.0;
          for (int l = 0; l < n_; ++l) sk += data_[idx++] * d(l);
          sj += sk * c(k);
        }
        si += sj * b(j);
      }
      total += si * a(i);
    }
    return total;
  }

  /// Largest violation among the antisymmetries, pair symmetry and first Bianchi identity.
  [[nodiscard]] double symmetry_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int l = 0; l < n_; ++l) {
            const double r = (*this)(i, j, k, l);
            worst = std::max({worst, std::abs(r + (*this)(j, i, k, l)), std::abs(r + (*this)(i, j, l, k)),
                              std::abs(r - (*this)(k, l, i, j)),
                              std::abs(r + (*this)(j, k, i, l) + (*this)(k, i, j, l))});
          }
    return worst;
  }

  /// Matrix of the curvature operator on Λ² in the basis e_i∧e_j (i<j):
  /// ⟨⟨ℛ(e_i∧e_j), e_k∧e_l⟩⟩ = R_ijlk, so that ⟨⟨ℛ(u∧v), u∧v⟩⟩ = R(u,v,v,u).
  [[nodiscard]] MatrixXd bivector_operator() const {
    const auto pairs = bivector_pairs(n_);
    const auto N = static_cast<Eigen::Index>(pairs.size());
    MatrixXd op(N, N);
    for (Eigen::Index p = 0; p < N; ++p)
      for (Eigen::Index q = 0; q < N; ++q) {
        const auto [i, j] = pairs[static_cast<std::size_t>(p)];
        const auto [k, l] = pairs[static_cast<std::size_t>(q)];
        op(p, q) = (*this)(i, j, l, k);
      }
    return op;
  }

 private:
  [[nodiscard]] std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }

  int n_;
  std::vector<double> data_;
};

/// Gauss equation:
/// R_ijkl = c(δ_jk δ_il − δ_ik δ_jl) + ⟨α_il, α_jk⟩ − ⟨α_ik, α_jl⟩.
inline CurvatureTensor gauss_curvature(const SecondFundamentalForm& sff, const AmbientSpace& amb) {
  const int n = sff.dim();
  CurvatureTensor R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double ambient = amb.c * (static_cast<double>(j == k && i == l) - static_cast<double>(i == k && j == l));
          R(i, j, k, l) = ambient + sff.inner(i, l, j, k) - sff.inner(i, k, j, l);
        }
  return R;
}

/// K(u∧v) = R(u,v,v,u) / (‖u‖²‖v‖² − ⟨u,v⟩²).
inline double sectional(const CurvatureTensor& R, const VectorXd& u, const VectorXd& v) {
  if (u.size() != R.dim() || v.size() != R.dim()) throw Error("sectional: vector dimension mismatch");
  const double area2 = u.squaredNorm() * v.squaredNorm() - u.dot(v) * u.dot(v);
  if (!(area2 > 1e-12)) throw Error("degenerate 2-plane");
  return R.contract(u, v, v, u) / area2;
}

/// Ric_ij = Σ_k R_ikkj
inline MatrixXd ricci(const CurvatureTensor& R) {
  const int n = R.dim();
  MatrixXd ric = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ric(i, j) += R(i, k, k, j);
  return ric;
}

inline MeanCurvature mean_curvature(const SecondFundamentalForm& sff) {
  MeanCurvature H;
  H.vector.resize(sff.codim());
  for (int a = 0; a < sff.codim(); ++a) H.vector(a) = sff.shape_operator(a).trace() / sff.dim();
  H.norm = H.vector.norm();
  return H;
}

/// b(n,H,c) = ½(c + nH²/4) for n ≥ 5 and ⅓(c + H²) for n = 4.
inline double pinching_bound(int n, double H, double c) {
  if (n < 4) throw Error("pinching bound requires n >= 4");
  if (n == 4) return (c + H * H) / 3.0;
  return 0.5 * (c + n * H * H / 4.0);
}

/// Change of tangent and normal frames:
/// h'[b][k][l] = Σ Qn[a][b] Qt[i][k] Qt[j][l] h[a][i][j].
inline SecondFundamentalForm rotate_sff(const SecondFundamentalForm& sff, const MatrixXd& q_tangent,
                                        const MatrixXd& q_normal) {
  require_square_orthogonal(q_tangent, sff.dim(), "rotate_sff tangent rotation");
  require_square_orthogonal(q_normal, sff.codim(), "rotate_sff normal rotation");
  std::vector<MatrixXd> turned;
  turned.reserve(static_cast<std::size_t>(sff.codim()));
  for (int a = 0; a < sff.codim(); ++a)
    turned.emplace_back(q_tangent.transpose() * sff.shape_operator(a) * q_tangent);
  std::vector<MatrixXd> out(static_cast<std::size_t>(sff.codim()), MatrixXd::Zero(sff.dim(), sff.dim()));
  for (int b = 0; b < sff.codim(); ++b)
    for (int a = 0; a < sff.codim(); ++a) out[static_cast<std::size_t>(b)] += q_normal(a, b) * turned[static_cast<std::size_t>(a)];
  for (auto& A : out) A = 0.5 * (A + A.transpose()).eval();
  return {sff.dim(), std::move(out)};
}

inline SecondFundamentalForm rotate_tangent(const SecondFundamentalForm& sff, const MatrixXd& q_tangent) {
  return rotate_sff(sff, q_tangent, MatrixXd::Identity(sff.codim(), sff.codim()));
}

/// Θ_p = Σ_{i≤p<j} (2‖α(f_i,f_j)‖² − ⟨α(f_i,f_i), α(f_j,f_j)⟩) in the frame f = Q e.
/// `p` counts the first block (1-based size); Q is an n×n orthogonal matrix.
inline double theta_p(const SecondFundamentalForm& sff, int p, const MatrixXd& Q) {
  const int n = sff.dim();
  if (p < 1 || p > n - 1) throw Error("theta_p: p must satisfy 1 <= p <= n-1");
  require_square_orthogonal(Q, n, "theta_p frame");
  double theta = 0.0;
  for (const auto& A : sff.shape_operators()) {
    const MatrixXd B = Q.transpose() * A * Q;
    for (int i = 0; i < p; ++i)
      for (int j = p; j < n; ++j) theta += 2.0 * B(i, j) * B(i, j) - B(i, i) * B(j, j);
  }
  return theta;
}

/// R_1331 + R_1441 + R_2332 + R_2442 − 2R_1234 in the orthonormal 4-frame F (n×4).
inline double isotropic_expression(const CurvatureTensor& R, const MatrixXd& F) {
  if (R.dim() < 4) throw Error("isotropic curvature needs n >= 4");
  if (F.rows() != R.dim() || F.cols() != 4) throw Error("isotropic_expression: frame must be n x 4");
  require_orthonormal_columns(F, "isotropic_expression frame");
  const VectorXd f1 = F.col(0), f2 = F.col(1), f3 = F.col(2), f4 = F.col(3);
  return R.contract(f1, f3, f3, f1) + R.contract(f1, f4, f4, f1) + R.contract(f2, f3, f3, f2) +
         R.contract(f2, f4, f4, f2) - 2.0 * R.contract(f1, f2, f3, f4);
}

}  // namespace pinchlab
