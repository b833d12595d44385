#pragma once

// Reference computations written independently of the library code paths
// they check: brute-force tensor rotation, closed-form curvature tensors,
// finite-difference gradients and hand-built second fundamental forms.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "pinchlab/pinchlab.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using pinchlab::CurvatureTensor;
using pinchlab::SecondFundamentalForm;

/// R'_ijkl = Σ Q_ai Q_bj Q_ck Q_dl R_abcd, eight nested loops.
inline CurvatureTensor rotate_bruteforce(const CurvatureTensor& R, const MatrixXd& Q) {
  const int n = R.dim();
  CurvatureTensor out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) s += Q(a, i) * Q(b, j) * Q(c, k) * Q(d, l) * R(a, b, c, d);
          out(i, j, k, l) = s;
        }
  return out;
}

/// Gauss equation written term by term from α(e_i, e_j) vectors.
inline double gauss_entry(const SecondFundamentalForm& sff, double c, int i, int j, int k, int l) {
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  return c * (d(j, k) * d(i, l) - d(i, k) * d(j, l)) + sff.alpha(i, l).dot(sff.alpha(j, k)) -
         sff.alpha(i, k).dot(sff.alpha(j, l));
}

/// Fubini–Study tensor with holomorphic curvature 4k and J e1 = e2, J e3 = e4:
/// R(X,Y)Z = k(⟨Y,Z⟩X − ⟨X,Z⟩Y + ⟨JY,Z⟩JX − ⟨JX,Z⟩JY + 2⟨X,JY⟩JZ).
inline CurvatureTensor fubini_study(double k) {
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(1, 0) = 1;
  J(0, 1) = -1;
  J(3, 2) = 1;
  J(2, 3) = -1;
  const Eigen::Matrix4d I = Eigen::Matrix4d::Identity();
  CurvatureTensor R(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int z = 0; z < 4; ++z) {
        const Eigen::Vector4d X = I.col(i), Y = I.col(j), Z = I.col(z);
        const Eigen::Vector4d v = k * (Y.dot(Z) * X - X.dot(Z) * Y + (J * Y).dot(Z) * (J * X) -
                                       (J * X).dot(Z) * (J * Y) + 2.0 * X.dot(J * Y) * (J * Z));
        for (int l = 0; l < 4; ++l) R(i, j, z, l) = v(l);
      }
  return R;
}

/// Central-difference Euclidean gradient, step h in every entry.
inline MatrixXd fd_gradient(const std::function<double(const MatrixXd&)>& f, const MatrixXd& X, double h = 1e-6) {
  MatrixXd g(X.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    MatrixXd P = X, M = X;
    P.data()[i] += h;
    M.data()[i] -= h;
    g.data()[i] = (f(P) - f(M)) / (2.0 * h);
  }
  return g;
}

/// Best sectional curvature among `samples` random planes.
inline double sampled_kmin(const CurvatureTensor& R, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  double best = 1e300;
  for (int s = 0; s < samples; ++s) {
    const MatrixXd X = pinchlab::random_stiefel(R.dim(), 2, rng);
    best = std::min(best, pinchlab::sectional(R, X.col(0), X.col(1)));
  }
  return best;
}

/// n = 5, p = 2, m = 6: α(e_i, e_j) = t ξ_ij for i ∈ {1,2}, j ∈ {3,4,5}
/// with six orthonormal normals, all other α = 0. With t² = c/2 this is
/// minimal, K_min = c/2 and Θ_2 = 6c at the standard frame.
inline SecondFundamentalForm prop23_equality_sff(double c) {
  const double t = std::sqrt(c / 2.0);
  std::vector<MatrixXd> h(6, MatrixXd::Zero(5, 5));
  int a = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 2; j < 5; ++j, ++a) h[a](i, j) = h[a](j, i) = t;
  return {5, h};
}

/// Shape operator of the level set Σ x_i²/a_i² = 1 at (0,…,0,a_{n+1}),
/// Hess F restricted to the tangent space over |∇F|: diag(a_{n+1}/a_i²).
inline VectorXd ellipsoid_pole_curvatures(const std::vector<double>& axes) {
  const int n = static_cast<int>(axes.size()) - 1;
  VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = axes[n] / (axes[i] * axes[i]);
  return out;
}

}  // namespace oracle
