#pragma once

// Parametrized immersions and pointwise second-fundamental-form extraction.
//
// A chart maps Rⁿ coordinates into R^N. Derivatives are central differences
// with one Richardson step (h and h/2). The tangent frame comes from modified
// Gram–Schmidt with column pivoting on the Jacobian, oriented like the chart
// coordinates; the normal frame completes it through a Householder QR. If the
// chart carries a sphere radius r, the image lies on S^{N-1}(r), the radial
// direction is removed from the normal space and the ambient curvature is 1/r².

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pinchlab/curvature.hpp"
#include "pinchlab/error.hpp"
#include "pinchlab/linalg.hpp"

namespace pinchlab {

struct ImmersionChart {
  std::string name;
  int n = 0;  // intrinsic dimension
  int N = 0;  // ambient Euclidean dimension
  std::function<VectorXd(const VectorXd&)> eval;
  std::optional<double> sphere_radius;
  double fd_step = 1e-3;
  VectorXd domain_lo;  // sampling box in chart coordinates
  VectorXd domain_hi;
};

struct PointData {
  VectorXd u;
  MatrixXd tangent;  // N×n, orthonormal
  MatrixXd normal;   // N×m, orthonormal
  SecondFundamentalForm sff;
  AmbientSpace amb;
};

struct ChartDerivatives {
  VectorXd value;
  MatrixXd jacobian;                 // N×n
  std::vector<VectorXd> second;      // n·n entries, ∂²f/∂u_k∂u_l at k*n+l
};

namespace detail {

inline ChartDerivatives differentiate_once(const ImmersionChart& chart, const VectorXd& u, double h) {
  const int n = chart.n;
  ChartDerivatives d;
  d.value = chart.eval(u);
  d.jacobian.resize(chart.N, n);
  d.second.assign(static_cast<std::size_t>(n * n), VectorXd());
  auto at = [&](int i, double si, int j, double sj) {
    VectorXd v = u;
    if (i >= 0) v(i) += si;
    if (j >= 0) v(j) += sj;
    return chart.eval(v);
  };
  for (int i = 0; i < n; ++i) {
    const VectorXd up = at(i, h, -1, 0.0);
    const VectorXd down = at(i, -h, -1, 0.0);
    d.jacobian.col(i) = (up - down) / (2.0 * h);
    d.second[static_cast<std::size_t>(i * n + i)] = (up - 2.0 * d.value + down) / (h * h);
    for (int j = 0; j < i; ++j) {
      const VectorXd mixed = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4.0 * h * h);
      d.second[static_cast<std::size_t>(i * n + j)] = mixed;
      d.second[static_cast<std::size_t>(j * n + i)] = mixed;
    }
  }
  return d;
}

}  // namespace detail

/// First and second derivatives of the chart, central differences at steps
/// h and h/2 combined by Richardson extrapolation.
inline ChartDerivatives differentiate(const ImmersionChart& chart, const VectorXd& u, double h) {
  const ChartDerivatives coarse = detail::differentiate_once(chart, u, h);
  ChartDerivatives fine = detail::differentiate_once(chart, u, h / 2.0);
  fine.jacobian = (4.0 * fine.jacobian - coarse.jacobian) / 3.0;
  for (std::size_t k = 0; k < fine.second.size(); ++k) fine.second[k] = (4.0 * fine.second[k] - coarse.second[k]) / 3.0;
  return fine;
}

/// Modified Gram–Schmidt with column pivoting: returns (E, T) with E = J·T
/// orthonormal and det T > 0.
inline std::pair<MatrixXd, MatrixXd> orthonormal_tangent_frame(const MatrixXd& J) {
  const auto N = J.rows();
  const auto n = J.cols();
  MatrixXd V = J;
  MatrixXd E(N, n);
  MatrixXd Rm = MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index best = k;
    for (Eigen::Index c = k + 1; c < n; ++c)
      if (V.col(perm[static_cast<std::size_t>(c)]).norm() > V.col(perm[static_cast<std::size_t>(best)]).norm()) best = c;
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(best)]);
    const Eigen::Index col = perm[static_cast<std::size_t>(k)];
    const double r = V.col(col).norm();
    Rm(k, col) = r;
    E.col(k) = V.col(col) / r;
    for (Eigen::Index c = k + 1; c < n; ++c) {
      const Eigen::Index cc = perm[static_cast<std::size_t>(c)];
      Rm(k, cc) = E.col(k).dot(V.col(cc));
      V.col(cc) -= Rm(k, cc) * E.col(k);
    }
  }
  // Rm is indexed by original column; J·P = E·(Rm·P) with Rm·P upper triangular.
  MatrixXd Rp(n, n);
  for (Eigen::Index c = 0; c < n; ++c) Rp.col(c) = Rm.col(perm[static_cast<std::size_t>(c)]);
  Rm = Rp;
  const MatrixXd Rinv = Rm.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(n, n));
  MatrixXd T(n, n);
  for (Eigen::Index k = 0; k < n; ++k) T.row(perm[static_cast<std::size_t>(k)]) = Rinv.row(k);
  if (T.determinant() < 0.0) {
    E.col(n - 1) *= -1.0;
    T.col(n - 1) *= -1.0;
  }
  return {E, T};
}

/// α(e_i,e_j) = normal projection of the second derivative along the frame.
inline PointData pointwise_sff(const ImmersionChart& chart, const VectorXd& u) {
  if (u.size() != chart.n) throw Error("pointwise_sff: coordinate dimension mismatch");
  const ChartDerivatives d = differentiate(chart, u, chart.fd_step);
  if (chart.sphere_radius) {
    const double r = *chart.sphere_radius;
    if (std::abs(d.value.norm() - r) > 1e-10 * std::max(1.0, r)) {
      throw Error("chart " + chart.name + " leaves the sphere of radius " + std::to_string(r));
    }
  }
  Eigen::JacobiSVD<MatrixXd> svd(d.jacobian);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(sv.size() - 1) / sv(0) <= 1e-8) throw Error("degenerate parametrization");

  auto [E, T] = orthonormal_tangent_frame(d.jacobian);
  const int n = chart.n;
  MatrixXd known = E;
  if (chart.sphere_radius) {
    known.conservativeResize(Eigen::NoChange, n + 1);
    known.col(n) = d.value.normalized();
  }
  const auto k = known.cols();
  const auto m = chart.N - k;
  if (m < 1) throw Error("pointwise_sff: chart has no normal directions");
  Eigen::HouseholderQR<MatrixXd> qr(known);
  const MatrixXd Q = qr.householderQ();
  MatrixXd normal = Q.rightCols(m);

  std::vector<MatrixXd> h;
  h.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index a = 0; a < m; ++a) {
    MatrixXd coord(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) coord(p, q) = normal.col(a).dot(d.second[static_cast<std::size_t>(p * n + q)]);
    MatrixXd A = T.transpose() * coord * T;
    h.emplace_back(0.5 * (A + A.transpose()));
  }
  const double c = chart.sphere_radius ? 1.0 / (*chart.sphere_radius * *chart.sphere_radius) : 0.0;
  return {u, std::move(E), std::move(normal), SecondFundamentalForm(n, std::move(h)), AmbientSpace(c)};
}

/// Eigenvalues of the shape operator of a hypersurface, ascending, with the
/// normal oriented so that the mean curvature is nonnegative.
inline VectorXd principal_curvatures(const SecondFundamentalForm& sff) {
  if (sff.codim() != 1) throw Error("principal_curvatures needs a hypersurface");
  MatrixXd A = sff.shape_operator(0);
  if (A.trace() < 0.0) A = -A;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// ---------------------------------------------------------------------------
// Sampling.

/// Cranley–Patterson-rotated Halton points in the chart's sampling box.
inline std::vector<VectorXd> low_discrepancy_points(const ImmersionChart& chart, int count, std::uint64_t seed) {
  static constexpr std::array<int, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (chart.n > static_cast<int>(kPrimes.size())) throw Error("low_discrepancy_points: dimension too large");
  std::mt19937_64 rng(derive_seed(seed, 3));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(chart.n));
  for (auto& s : shift) s = unit(rng);
  std::vector<VectorXd> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int idx = 1; idx <= count; ++idx) {
    VectorXd u(chart.n);
    for (int d = 0; d < chart.n; ++d) {
      const int base = kPrimes[static_cast<std::size_t>(d)];
      double f = 1.0, x = 0.0;
      for (int i = idx; i > 0; i /= base) {
        f /= base;
        x += f * (i % base);
      }
      x += shift[static_cast<std::size_t>(d)];
      x -= std::floor(x);
      u(d) = chart.domain_lo(d) + x * (chart.domain_hi(d) - chart.domain_lo(d));
    }
    pts.push_back(std::move(u));
  }
  return pts;
}

struct CurvatureExtremes {
  double min_lambda1 = 0.0;
  VectorXd argmin;
  double max_lambdan = 0.0;
  VectorXd argmax;
};

namespace detail {

/// Derivative-free compass search minimizing f inside the chart box.
inline std::pair<VectorXd, double> compass_search(const ImmersionChart& chart, VectorXd u, double fu,
                                                  const std::function<double(const VectorXd&)>& f) {
  double step = 0.05 * (chart.domain_hi - chart.domain_lo).maxCoeff();
  int evaluations = 0;
  while (step > 1e-7 && evaluations < 4000) {
    bool moved = false;
    for (int d = 0; d < chart.n && !moved; ++d)
      for (double sgn : {1.0, -1.0}) {
        VectorXd v = u;
        v(d) = std::clamp(v(d) + sgn * step, chart.domain_lo(d), chart.domain_hi(d));
        const double fv = f(v);
        ++evaluations;
        if (fv < fu) {
          u = std::move(v);
          fu = fv;
          moved = true;
          break;
        }
      }
    if (!moved) step *= 0.5;
  }
  return {u, fu};
}

}  // namespace detail

/// min λ₁ and max λ_n over a hypersurface chart: low-discrepancy sampling,
/// then a compass-search refinement from the best samples.
inline CurvatureExtremes principal_curvature_extremes(const ImmersionChart& chart, int samples, std::uint64_t seed) {
  const auto pts = low_discrepancy_points(chart, samples, seed);
  if (pts.empty()) throw Error("principal_curvature_extremes: need at least one sample");
  auto lambda1 = [&](const VectorXd& u) { return principal_curvatures(pointwise_sff(chart, u).sff)(0); };
  auto neg_lambdan = [&](const VectorXd& u) {
    const VectorXd l = principal_curvatures(pointwise_sff(chart, u).sff);
    return -l(l.size() - 1);
  };
  std::size_t best_lo = 0, best_hi = 0;
  double lo = lambda1(pts[0]), hi = neg_lambdan(pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const VectorXd l = principal_curvatures(pointwise_sff(chart, pts[i]).sff);
    if (l(0) < lo) lo = l(0), best_lo = i;
    if (-l(l.size() - 1) < hi) hi = -l(l.size() - 1), best_hi = i;
  }
  auto [umin, vmin] = detail::compass_search(chart, pts[best_lo], lo, lambda1);
  auto [umax, vmax] = detail::compass_search(chart, pts[best_hi], hi, neg_lambdan);
  return {vmin, umin, -vmax, umax};
}

// ---------------------------------------------------------------------------
// Generators.

/// Inverse stereographic projection onto the unit sphere Sⁿ ⊂ Rⁿ⁺¹ with y = 0
/// at the north pole (0,…,0,1) and |y| = 1 on the equator.
inline VectorXd unit_sphere_point(const VectorXd& y) {
  const double s = y.squaredNorm();
  VectorXd x(y.size() + 1);
  x.head(y.size()) = 2.0 * y / (1.0 + s);
  x(y.size()) = (1.0 - s) / (1.0 + s);
  return x;
}

namespace detail {
inline constexpr double kStereoBox = 1.2;

inline ImmersionChart stereographic_chart(std::string name, int n, int N) {
  ImmersionChart chart;
  chart.name = std::move(name);
  chart.n = n;
  chart.N = N;
  chart.domain_lo = VectorXd::Constant(n, -kStereoBox);
  chart.domain_hi = VectorXd::Constant(n, kStereoBox);
  return chart;
}
}  // namespace detail

/// Sⁿ(r) ⊂ Rⁿ⁺¹.
inline ImmersionChart gen_sphere(int n, double r) {
  if (n < 2) throw Error("gen_sphere: n must be >= 2");
  if (!(r > 0.0)) throw Error("gen_sphere: radius must be positive");
  ImmersionChart chart = detail::stereographic_chart("sphere", n, n + 1);
  chart.eval = [r](const VectorXd& y) { return VectorXd(r * unit_sphere_point(y)); };
  return chart;
}

/// x₁²/a₁² + … + x_{n+1}²/a_{n+1}² = 1, as diag(a) applied to the unit sphere.
inline ImmersionChart gen_ellipsoid(const std::vector<double>& axes) {
  if (axes.size() < 3) throw Error("gen_ellipsoid: need at least 3 axes");
  for (double a : axes)
    if (!(a > 0.0)) throw Error("gen_ellipsoid: axes must be positive");
  const int n = static_cast<int>(axes.size()) - 1;
  const VectorXd a = Eigen::Map<const VectorXd>(axes.data(), static_cast<Eigen::Index>(axes.size()));
  ImmersionChart chart = detail::stereographic_chart("ellipsoid", n, n + 1);
  chart.eval = [a](const VectorXd& y) { return VectorXd(a.cwiseProduct(unit_sphere_point(y))); };
  return chart;
}

/// S²(r₁)×S²(r₂) ⊂ R⁶; with `on_sphere` the image is regarded inside
/// S⁵(√(r₁²+r₂²)).
inline ImmersionChart gen_product_spheres(double r1, double r2, bool on_sphere = true) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw Error("gen_product_spheres: radii must be positive");
  ImmersionChart chart = detail::stereographic_chart("product-spheres", 4, 6);
  chart.eval = [r1, r2](const VectorXd& y) {
    VectorXd x(6);
    x.head(3) = r1 * unit_sphere_point(y.head(2));
    x.tail(3) = r2 * unit_sphere_point(y.tail(2));
    return x;
  };
  if (on_sphere) chart.sphere_radius = std::sqrt(r1 * r1 + r2 * r2);
  return chart;
}

namespace detail {
/// Orthonormal (Helmert) coordinates of the diagonal of a trace-free matrix.
inline VectorXd helmert(const VectorXd& diag) {
  const auto k = diag.size();
  VectorXd out(k - 1);
  double partial = 0.0;
  for (Eigen::Index j = 1; j < k; ++j) {
    partial += diag(j - 1);
    out(j - 1) = (partial - static_cast<double>(j) * diag(j)) / std::sqrt(static_cast<double>(j * (j + 1)));
  }
  return out;
}
}  // namespace detail

/// x ↦ √((n+1)/n)·(xxᵀ − I/(n+1)) from the unit Sⁿ into trace-free symmetric
/// matrices (Frobenius inner product, orthonormal coordinates); the image
/// lies on the unit sphere.
inline ImmersionChart gen_veronese(int n = 4) {
  if (n < 2) throw Error("gen_veronese: n must be >= 2");
  const int N = n * (n + 3) / 2;
  ImmersionChart chart = detail::stereographic_chart("veronese", n, N);
  chart.sphere_radius = 1.0;
  chart.eval = [n, N](const VectorXd& y) {
    const VectorXd x = unit_sphere_point(y);
    const double scale = std::sqrt((n + 1.0) / n);
    MatrixXd X = scale * (x * x.transpose() - MatrixXd::Identity(n + 1, n + 1) / (n + 1.0));
    VectorXd out(N);
    out.head(n) = detail::helmert(X.diagonal());
    int idx = n;
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) out(idx++) = std::sqrt(2.0) * X(i, j);
    return out;
  };
  return chart;
}

/// CP² → S⁷(√(2/3)): z = (1, w₁, w₂)/‖·‖ ↦ zz* − I/3 in trace-free Hermitian
/// 3×3 matrices with inner product tr(AB). Chart coordinates are
/// (Re w₁, Im w₁, Re w₂, Im w₂), which carry the complex orientation.
inline ImmersionChart gen_cp2() {
  ImmersionChart chart;
  chart.name = "cp2-s7";
  chart.n = 4;
  chart.N = 8;
  chart.sphere_radius = std::sqrt(2.0 / 3.0);
  chart.domain_lo = VectorXd::Constant(4, -1.5);
  chart.domain_hi = VectorXd::Constant(4, 1.5);
  chart.eval = [](const VectorXd& u) {
    using cd = std::complex<double>;
    Eigen::Vector3cd z(cd(1.0, 0.0), cd(u(0), u(1)), cd(u(2), u(3)));
    z /= z.norm();
    const Eigen::Matrix3cd X = z * z.adjoint() - Eigen::Matrix3cd::Identity() / 3.0;
    VectorXd out(8);
    out.head(2) = detail::helmert(X.diagonal().real());
    int idx = 2;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        out(idx++) = std::sqrt(2.0) * X(i, j).real();
        out(idx++) = std::sqrt(2.0) * X(i, j).imag();
      }
    return out;
  };
  return chart;
}

/// Appends `extra` zero coordinates (e.g. a great subsphere).
inline ImmersionChart padded(ImmersionChart chart, int extra) {
  const int N = chart.N;
  chart.N = N + extra;
  chart.eval = [inner = chart.eval, N, extra](const VectorXd& u) {
    VectorXd x = VectorXd::Zero(N + extra);
    x.head(N) = inner(u);
    return x;
  };
  return chart;
}

inline ImmersionChart with_sphere_flag(ImmersionChart chart, double r) {
  chart.sphere_radius = r;
  return chart;
}

/// The same map regarded as an immersion into Euclidean space (c = 0).
inline ImmersionChart composed_into_euclidean(ImmersionChart chart) {
  chart.sphere_radius.reset();
  return chart;
}

/// ε(n) with a_{n+1} ≤ a₁ε(n): (8/n)^{1/6} for 5 ≤ n ≤ 8, 3^{1/6} for n = 4.
inline double epsilon_bound(int n) {
  if (n < 4 || n > 8) throw Error("epsilon_bound: n must be in 4..8");
  if (n == 4) return std::pow(3.0, 1.0 / 6.0);
  return std::pow(8.0 / n, 1.0 / 6.0);
}

}  // namespace pinchlab
