#pragma once

// Dimension-4 structures: bivectors, the Hodge star, the Bochner–Weitzenböck
// operator on Λ² and its self-dual / anti-self-dual spectra, and pointwise
// certificates for the equality case of the isotropic-curvature estimate.
//
// Bivector coordinates are always taken in the ordered basis
// (e12, e13, e14, e23, e24, e34), e_ij = e_i∧e_j, with inner product
// ⟨⟨u∧v, w∧z⟩⟩ = det(⟨·,·⟩), for which this basis is orthonormal.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pinchlab/curvature.hpp"
#include "pinchlab/error.hpp"
#include "pinchlab/frame_search.hpp"
#include "pinchlab/linalg.hpp"

namespace pinchlab {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

inline constexpr std::array<std::pair<int, int>, 6> kBivectorBasis{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Hodge star on Λ²R⁴. orientation = +1 is the orientation of (e1,e2,e3,e4).
inline Matrix6d hodge_star(int orientation = +1) {
  Matrix6d S = Matrix6d::Zero();
  // *e12 = e34, *e13 = −e24, *e14 = e23 and the inverse relations.
  S(5, 0) = 1.0;
  S(4, 1) = -1.0;
  S(3, 2) = 1.0;
  S(2, 3) = 1.0;
  S(1, 4) = -1.0;
  S(0, 5) = 1.0;
  return orientation >= 0 ? S : Matrix6d(-S);
}

/// Columns η1..η6. η1..η3 are self-dual for the standard orientation,
///   η1 = (e12+e34)/√2, η2 = (e13−e24)/√2, η3 = (e14+e23)/√2,
/// and η4..η6 are their anti-self-dual partners (sign of the second term flipped).
inline Matrix6d eta_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix6d E = Matrix6d::Zero();
  E(0, 0) = s, E(5, 0) = s;
  E(1, 1) = s, E(4, 1) = -s;
  E(2, 2) = s, E(3, 2) = s;
  E(0, 3) = s, E(5, 3) = -s;
  E(1, 4) = s, E(4, 4) = s;
  E(2, 5) = s, E(3, 5) = -s;
  return E;
}

/// The η basis built on an arbitrary orthonormal frame F (4×4), expressed
/// in reference bivector coordinates.
inline Matrix6d eta_basis_in_frame(const MatrixXd& F) {
  Matrix6d W;  // columns f_a ∧ f_b in reference coordinates
  for (int p = 0; p < 6; ++p) {
    const auto [a, b] = kBivectorBasis[static_cast<std::size_t>(p)];
    W.col(p) = wedge(F.col(a), F.col(b));
  }
  return W * eta_basis();
}

struct BochnerMatrix {
  Matrix6d B = Matrix6d::Zero();
  int orientation = +1;
};

/// ⟨⟨ℬ(e_i∧e_j), e_k∧e_l⟩⟩ = Ric_ik δ_jl + Ric_jl δ_ik − Ric_il δ_jk − Ric_jk δ_il − 2R_ijlk.
inline BochnerMatrix bochner_matrix(const CurvatureTensor& R, int orientation = +1) {
  if (R.dim() != 4) throw Error("bochner_matrix requires n = 4");
  const MatrixXd ric = ricci(R);
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  BochnerMatrix out;
  out.orientation = orientation >= 0 ? +1 : -1;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const auto [i, j] = kBivectorBasis[static_cast<std::size_t>(p)];
      const auto [k, l] = kBivectorBasis[static_cast<std::size_t>(q)];
      out.B(p, q) = ric(i, k) * delta(j, l) + ric(j, l) * delta(i, k) - ric(i, l) * delta(j, k) -
                    ric(j, k) * delta(i, l) - 2.0 * R(i, j, l, k);
    }
  return out;
}

/// max |B∗ − ∗B|
inline double star_commutator(const BochnerMatrix& bm) {
  const Matrix6d S = hodge_star(bm.orientation);
  return (bm.B * S - S * bm.B).cwiseAbs().maxCoeff();
}

struct SpectrumReport {
  std::array<double, 3> mu_sd{};   // ascending
  std::array<double, 3> mu_asd{};  // ascending
  double min_eig = 0.0;
};

namespace detail {
inline std::array<double, 3> block_eigenvalues(const Eigen::Matrix3d& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(block, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();  // ascending
  return {ev(0), ev(1), ev(2)};
}
}  // namespace detail

/// Eigenvalues of ℬ restricted to Λ²₊ and Λ²₋ (ascending).
inline SpectrumReport sd_asd_spectra(const BochnerMatrix& bm) {
  if ((bm.B - bm.B.transpose()).cwiseAbs().maxCoeff() > 1e-8) throw Error("Bochner matrix is not symmetric");
  if (star_commutator(bm) > 1e-8) throw Error("star-invariance broken");
  const Matrix6d E = eta_basis();
  Matrix6d C = E.transpose() * bm.B * E;
  C = 0.5 * (C + C.transpose()).eval();
  const Eigen::Matrix3d plus = C.topLeftCorner<3, 3>();
  const Eigen::Matrix3d minus = C.bottomRightCorner<3, 3>();
  SpectrumReport out;
  out.mu_sd = detail::block_eigenvalues(bm.orientation > 0 ? plus : minus);
  out.mu_asd = detail::block_eigenvalues(bm.orientation > 0 ? minus : plus);
  out.min_eig = std::min(out.mu_sd[0], out.mu_asd[0]);
  return out;
}

// ---------------------------------------------------------------------------
// Lemma on frames where the four mixed planes are curvature-minimizing.

struct LemmaReport {
  double hypothesis_defect = 0.0;  // max |K(f_i∧f_j) − K_min|, i∈{1,2}, j∈{3,4}
  double max_component = 0.0;      // max |R_ijkl| with exactly three distinct indices
  bool pass = false;
};

/// Components of R in the frame F, i.e. R(f_i,f_j,f_k,f_l).
inline CurvatureTensor rotate_tensor(const CurvatureTensor& R, const MatrixXd& F) {
  const int n = R.dim();
  CurvatureTensor out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out(i, j, k, l) = R.contract(F.col(i), F.col(j), F.col(k), F.col(l));
  return out;
}

inline int distinct_indices(int i, int j, int k, int l) {
  std::array<int, 4> v{i, j, k, l};
  std::sort(v.begin(), v.end());
  return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
}

/// Given K(f_i∧f_j) = K_min for i∈{1,2}, j∈{3,4}, every component with
/// exactly three distinct indices must vanish. Throws HypothesisNotMet if the
/// frame does not satisfy the premise within `tol`.
inline LemmaReport check_lemma_r(const CurvatureTensor& R, const MatrixXd& frame, double kmin, double tol) {
  if (R.dim() != 4) throw Error("check_lemma_r requires n = 4");
  require_square_orthogonal(frame, 4, "check_lemma_r frame", 1e-8);
  const CurvatureTensor Rf = rotate_tensor(R, frame);
  LemmaReport out;
  for (int i : {0, 1})
    for (int j : {2, 3}) out.hypothesis_defect = std::max(out.hypothesis_defect, std::abs(Rf(i, j, j, i) - kmin));
  if (out.hypothesis_defect > tol) {
    throw HypothesisNotMet("mixed sectional curvatures differ from K_min by " + std::to_string(out.hypothesis_defect));
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          if (distinct_indices(i, j, k, l) == 3) out.max_component = std::max(out.max_component, std::abs(Rf(i, j, k, l)));
  out.pass = out.max_component <= tol;
  return out;
}

/// ∂F/∂x_k and ∂F/∂y_k at (x,y) = (e_i, e_j) for
/// F(x,y) = R(x,y,y,x) − K_min(‖x‖²‖y‖² − ⟨x,y⟩²):
/// 2R_kjji and 2R_kiij for k ≠ i,j. The k = i,j slots are returned as 0.
inline std::pair<Eigen::Vector4d, Eigen::Vector4d> lemma_r_gradient(const CurvatureTensor& R, double /*kmin*/, int i,
                                                                    int j) {
  if (R.dim() != 4) throw Error("lemma_r_gradient requires n = 4");
  if (i < 0 || i > 3 || j < 0 || j > 3 || i == j) throw Error("lemma_r_gradient: need distinct indices in 0..3");
  Eigen::Vector4d gx = Eigen::Vector4d::Zero(), gy = Eigen::Vector4d::Zero();
  for (int k = 0; k < 4; ++k) {
    if (k == i || k == j) continue;
    gx(k) = 2.0 * R(k, j, j, i);
    gy(k) = 2.0 * R(k, i, i, j);
  }
  return {gx, gy};
}

// ---------------------------------------------------------------------------
// Equality structure of the second fundamental form.

struct Residual {
  std::string name;
  double value = 0.0;
};

struct EqualityCheck {
  std::vector<Residual> residuals;
  double max_residual = 0.0;
  bool pass = false;
};

/// Conditions on α in the frame f = frame·e:
///   α11=α22, α33=α44, α12=α34=0, α13=α24, α14+α23=0,
///   ‖α13‖=‖α14‖, ⟨α13,α14⟩=0, ⟨α_jj,α_1i⟩=0 (j=1..4, i=3,4).
inline EqualityCheck check_equality_sff(const SecondFundamentalForm& sff, const MatrixXd& frame, double tol) {
  if (sff.dim() != 4) throw Error("check_equality_sff requires n = 4");
  const SecondFundamentalForm s = rotate_tangent(sff, frame);
  auto a = [&](int i, int j) { return s.alpha(i - 1, j - 1); };
  EqualityCheck out;
  auto add = [&](std::string name, double v) { out.residuals.push_back({std::move(name), std::abs(v)}); };
  add("a11-a22", (a(1, 1) - a(2, 2)).norm());
  add("a33-a44", (a(3, 3) - a(4, 4)).norm());
  add("a12", a(1, 2).norm());
  add("a34", a(3, 4).norm());
  add("a13-a24", (a(1, 3) - a(2, 4)).norm());
  add("a14+a23", (a(1, 4) + a(2, 3)).norm());
  add("|a13|-|a14|", a(1, 3).norm() - a(1, 4).norm());
  add("<a13,a14>", a(1, 3).dot(a(1, 4)));
  for (int i : {3, 4})
    for (int j = 1; j <= 4; ++j)
      add("<a" + std::to_string(j) + std::to_string(j) + ",a1" + std::to_string(i) + ">", a(j, j).dot(a(1, i)));
  for (const auto& r : out.residuals) out.max_residual = std::max(out.max_residual, r.value);
  out.pass = out.max_residual <= tol;
  return out;
}

namespace detail {

/// Residual vector of the equality conditions (squared-norm form for the
/// ‖α13‖=‖α14‖ condition so that the objective stays polynomial in the frame).
inline double equality_objective(const std::vector<MatrixXd>& shape, double c, double kmin, const MatrixXd& X) {
  std::vector<MatrixXd> B;
  B.reserve(shape.size());
  for (const auto& A : shape) B.emplace_back(X.transpose() * A * X);
  auto dot = [&](int i, int j, int k, int l) {
    double s = 0.0;
    for (const auto& M : B) s += M(i, j) * M(k, l);
    return s;
  };
  double total = 0.0;
  auto sq = [&](double v) { total += v * v; };
  for (int i : {0, 1})
    for (int j : {2, 3}) sq(c + dot(i, i, j, j) - dot(i, j, i, j) - kmin);
  for (const auto& M : B) {
    sq(M(0, 0) - M(1, 1));
    sq(M(2, 2) - M(3, 3));
    sq(M(0, 1));
    sq(M(2, 3));
    sq(M(0, 2) - M(1, 3));
    sq(M(0, 3) + M(1, 2));
  }
  sq(dot(0, 2, 0, 2) - dot(0, 3, 0, 3));
  sq(dot(0, 2, 0, 3));
  for (int i : {2, 3})
    for (int j = 0; j < 4; ++j) sq(dot(j, j, 0, i));
  return total;
}

}  // namespace detail

struct EqualityFrame {
  MatrixXd frame;            // 4×4 orthogonal, columns f1..f4
  double objective = 0.0;    // sum of squared residuals at `frame`
  double max_residual = 0.0; // max over check_equality_sff residuals and |K_ij − K_min|
  double kmin = 0.0;
};

/// Searches O(4) for a frame realizing the equality structure: mixed
/// sectional curvatures equal K_min and the α conditions above. Warm starts
/// are tried before the random restarts; the search stops early once the
/// objective reaches 1e-24.
inline EqualityFrame find_equality_frame(const SecondFundamentalForm& sff, const AmbientSpace& amb,
                                         const SearchConfig& cfg, std::optional<double> known_kmin = std::nullopt,
                                         std::vector<MatrixXd> warm_starts = {}) {
  if (sff.dim() != 4) throw Error("find_equality_frame requires n = 4");
  cfg.validate();
  const double kmin = known_kmin ? *known_kmin : k_min(gauss_curvature(sff, amb), cfg.reseeded(1)).value;
  const auto& shape = sff.shape_operators();
  const double c = amb.c;
  std::function<double(const MatrixXd&)> value = [&shape, c, kmin](const MatrixXd& X) {
    return detail::equality_objective(shape, c, kmin, X);
  };
  const StiefelObjective objective{value, [&value](const MatrixXd& X) { return finite_difference_gradient(value, X); }};
  MultiStartOptions opt{4, 4, cfg.restarts, cfg.max_iters, cfg.grad_tol, cfg.seed, std::move(warm_starts), 1e-24};
  LocalMinimum best = multistart_minimize(objective, opt);

  EqualityFrame out;
  out.frame = std::move(best.point);
  out.objective = best.value;
  out.kmin = kmin;
  out.max_residual = check_equality_sff(sff, out.frame, 0.0).max_residual;
  const CurvatureTensor R = gauss_curvature(sff, amb);
  for (int i : {0, 1})
    for (int j : {2, 3})
      out.max_residual =
          std::max(out.max_residual, std::abs(sectional(R, out.frame.col(i), out.frame.col(j)) - kmin));
  return out;
}

/// SearchConfig for the equality-frame search: 128 restarts unless overridden.
inline SearchConfig equality_search_config(const SearchConfig& base) {
  SearchConfig cfg = base.reseeded(7);
  cfg.restarts = std::max(base.restarts, 128);
  return cfg;
}

/// The almost complex structure with J f1 = f2, J f3 = f4 (reference coordinates).
inline MatrixXd complex_structure(const MatrixXd& frame) {
  Eigen::Matrix4d J0 = Eigen::Matrix4d::Zero();
  J0(1, 0) = 1.0;
  J0(0, 1) = -1.0;
  J0(3, 2) = 1.0;
  J0(2, 3) = -1.0;
  return frame * J0 * frame.transpose();
}

/// max_ij ‖α(Je_i, Je_j) − α(e_i, e_j)‖; zero iff α is J-invariant.
inline double kaehler_residual(const SecondFundamentalForm& sff, const MatrixXd& J) {
  const int n = sff.dim();
  if (J.rows() != n || J.cols() != n) throw Error("kaehler_residual: J has wrong size");
  const MatrixXd I = MatrixXd::Identity(n, n);
  if ((J.transpose() * J - I).cwiseAbs().maxCoeff() > 1e-10 || (J + J.transpose()).cwiseAbs().maxCoeff() > 1e-10 ||
      (J * J + I).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error("kaehler_residual: J must be orthogonal, skew and satisfy J^2 = -I");
  }
  MatrixXd diff2 = MatrixXd::Zero(n, n);
  for (const auto& A : sff.shape_operators()) diff2 += (J.transpose() * A * J - A).cwiseAbs2();
  return diff2.cwiseSqrt().maxCoeff();
}

// ---------------------------------------------------------------------------
// Closed-form eigenvalues in the equality case.

struct EigenvalueFormulaCheck {
  std::array<double, 6> predicted{};  // μ1..μ6 for η1..η6 of the frame
  std::array<double, 6> diagonal{};   // ⟨⟨ℬη_i, η_i⟩⟩
  double off_diagonal = 0.0;          // largest |⟨⟨ℬη_i, η_j⟩⟩|, i ≠ j
  double max_deviation = 0.0;         // max(|diagonal − predicted|, off_diagonal)
  bool pass = false;
};

/// μ1 = 4(K_min − ‖α13‖²), μ2 = μ3 = K12 + K34 + 2(K_min + ‖α13‖²),
/// μ4 = 4(K_min + ‖α13‖²), μ5 = μ6 = K12 + K34 + 2(K_min − ‖α13‖²),
/// compared against ℬ written in the η basis of `frame`.
inline EigenvalueFormulaCheck check_eigenvalue_formulas(const SecondFundamentalForm& sff, const AmbientSpace& amb,
                                                        const MatrixXd& frame, double kmin, double tol) {
  if (sff.dim() != 4) throw Error("check_eigenvalue_formulas requires n = 4");
  const CurvatureTensor R = gauss_curvature(sff, amb);
  const SecondFundamentalForm s = rotate_tangent(sff, frame);
  const double a13 = s.alpha(0, 2).squaredNorm();
  const double k12 = sectional(R, frame.col(0), frame.col(1));
  const double k34 = sectional(R, frame.col(2), frame.col(3));
  EigenvalueFormulaCheck out;
  out.predicted = {4.0 * (kmin - a13),        k12 + k34 + 2.0 * (kmin + a13), k12 + k34 + 2.0 * (kmin + a13),
                   4.0 * (kmin + a13),        k12 + k34 + 2.0 * (kmin - a13), k12 + k34 + 2.0 * (kmin - a13)};
  const Matrix6d E = eta_basis_in_frame(frame);
  const Matrix6d C = E.transpose() * bochner_matrix(R).B * E;
  for (int i = 0; i < 6; ++i) {
    out.diagonal[static_cast<std::size_t>(i)] = C(i, i);
    out.max_deviation =
        std::max(out.max_deviation, std::abs(C(i, i) - out.predicted[static_cast<std::size_t>(i)]));
    for (int j = 0; j < 6; ++j)
      if (i != j) out.off_diagonal = std::max(out.off_diagonal, std::abs(C(i, j)));
  }
  out.max_deviation = std::max(out.max_deviation, out.off_diagonal);
  out.pass = out.max_deviation <= tol;
  return out;
}

}  // namespace pinchlab
