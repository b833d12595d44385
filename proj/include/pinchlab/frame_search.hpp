#pragma once

// Extremization over frames. Every search runs a multi-start Riemannian
// gradient descent on a Stiefel manifold (QR retraction, Armijo
// backtracking with Barzilai–Borwein trial steps) and, independently, a pure
// random-sampling oracle on its own random stream. The optimizer must never
// lose to its oracle; `gap` reports how far apart they ended up.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "pinchlab/curvature.hpp"
#include "pinchlab/error.hpp"
#include "pinchlab/linalg.hpp"

namespace pinchlab {

struct SearchConfig {
  int restarts = 64;
  int max_iters = 500;
  double grad_tol = 1e-10;
  int oracle_samples = 100000;  // 0 skips the sampling oracle
  std::uint64_t seed = 0;

  void validate() const {
    if (restarts <= 0 || max_iters <= 0 || !(grad_tol > 0.0) || oracle_samples < 0) {
      throw Error("search config: restarts, max_iters and grad_tol must be positive, oracle_samples nonnegative");
    }
  }

  /// Same settings with an independent seed for sub-search `stream`.
  [[nodiscard]] SearchConfig reseeded(std::uint64_t stream) const {
    SearchConfig out = *this;
    out.seed = derive_seed(seed, 0x5EA5C4ULL + stream);
    return out;
  }
};

struct ExtremumResult {
  double value = 0.0;
  MatrixXd frame;  // orthonormal columns achieving `value`
  double oracle_value = 0.0;  // NaN when the oracle was skipped
  double gap = 0.0;           // |value − oracle_value|
  bool maximize = false;

  /// The optimizer result is at least as good as the oracle's, up to `slack`.
  [[nodiscard]] bool optimizer_dominates(double slack = 1e-8) const {
    if (std::isnan(oracle_value)) return true;
    return maximize ? value >= oracle_value - slack : value <= oracle_value + slack;
  }
};

namespace detail {
inline constexpr std::uint64_t kOptimizerStream = 1;
inline constexpr std::uint64_t kOracleStream = 2;
}  // namespace detail

/// A smooth function on n×k matrices, restricted to the Stiefel manifold.
/// `gradient` returns the Euclidean gradient.
struct StiefelObjective {
  std::function<double(const MatrixXd&)> value;
  std::function<MatrixXd(const MatrixXd&)> gradient;
};

struct LocalMinimum {
  double value = std::numeric_limits<double>::infinity();
  MatrixXd point;
  int iterations = 0;
  double grad_norm = 0.0;
};

/// Projection of a Euclidean gradient onto the tangent space at X.
inline MatrixXd riemannian_gradient(const MatrixXd& X, const MatrixXd& euclidean) {
  const MatrixXd XtG = X.transpose() * euclidean;
  return euclidean - X * (0.5 * (XtG + XtG.transpose()));
}

/// Central finite-difference Euclidean gradient.
inline MatrixXd finite_difference_gradient(const std::function<double(const MatrixXd&)>& f, const MatrixXd& X,
                                           double step = 1e-5) {
  MatrixXd grad(X.rows(), X.cols());
  MatrixXd probe = X;
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    const double saved = probe.data()[i];
    probe.data()[i] = saved + step;
    const double up = f(probe);
    probe.data()[i] = saved - step;
    const double down = f(probe);
    probe.data()[i] = saved;
    grad.data()[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

/// Projected gradient descent from one start point.
inline LocalMinimum descend_on_stiefel(const StiefelObjective& f, MatrixXd X, int max_iters, double grad_tol) {
  constexpr double kArmijo = 1e-4;
  X = qf(X);
  double fx = f.value(X);
  MatrixXd G = riemannian_gradient(X, f.gradient(X));
  double gnorm = G.norm();
  double step = 1.0 / std::max(1.0, gnorm);
  MatrixXd prev_X, prev_G;
  bool have_prev = false;
  int it = 0;
  for (; it < max_iters && gnorm > grad_tol; ++it) {
    if (have_prev) {
      const MatrixXd s = X - prev_X;
      const MatrixXd y = G - prev_G;
      const double sy = std::abs((s.array() * y.array()).sum());
      if (sy > 0.0) step = std::clamp(s.squaredNorm() / sy, 1e-12, 1e12);
    }
    double t = step;
    bool accepted = false;
    MatrixXd Xn;
    double fn = 0.0;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      Xn = qf(X - t * G);
      fn = f.value(Xn);
      if (fn <= fx - kArmijo * t * gnorm * gnorm) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no representable decrease left
    prev_X = std::move(X);
    prev_G = std::move(G);
    have_prev = true;
    X = std::move(Xn);
    fx = fn;
    G = riemannian_gradient(X, f.gradient(X));
    gnorm = G.norm();
  }
  return {fx, std::move(X), it, gnorm};
}

struct MultiStartOptions {
  int rows = 0;  // n
  int cols = 0;  // k
  int restarts = 64;
  int max_iters = 500;
  double grad_tol = 1e-10;
  std::uint64_t seed = 0;
  std::vector<MatrixXd> warm_starts;         // tried before the random starts
  std::optional<double> good_enough;         // stop restarting once reached
};

/// Best local minimum over warm starts plus `restarts` Haar-random starts.
/// Ties are broken towards the lexicographically smallest frame.
inline LocalMinimum multistart_minimize(const StiefelObjective& f, const MultiStartOptions& opt) {
  LocalMinimum best;
  auto consider = [&](LocalMinimum&& candidate) {
    if (candidate.value < best.value ||
        (candidate.value == best.value && lexicographically_less(candidate.point, best.point))) {
      best = std::move(candidate);
    }
  };
  auto done = [&] { return opt.good_enough && best.value <= *opt.good_enough; };
  for (const auto& start : opt.warm_starts) {
    consider(descend_on_stiefel(f, start, opt.max_iters, opt.grad_tol));
    if (done()) return best;
  }
  for (int r = 0; r < opt.restarts; ++r) {
    std::mt19937_64 rng(derive_seed(opt.seed, detail::kOptimizerStream, static_cast<std::uint64_t>(r)));
    consider(descend_on_stiefel(f, random_stiefel(opt.rows, opt.cols, rng), opt.max_iters, opt.grad_tol));
    if (done()) break;
  }
  return best;
}

/// Pure random sampling of V_k(Rⁿ); returns the best value seen, or NaN
/// for zero samples.
template <class Eval>
double sampling_oracle(int n, int k, int samples, std::uint64_t seed, bool maximize, Eval&& eval) {
  if (samples == 0) return std::numeric_limits<double>::quiet_NaN();
  std::mt19937_64 rng(derive_seed(seed, detail::kOracleStream));
  double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double v = eval(random_stiefel(n, k, rng));
    best = maximize ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

/// f(X) = Σ_t coef_t ⟨⟨ℛ(x_a∧x_b), x_c∧x_d⟩⟩ for the columns x of X, where ℛ
/// is the curvature operator on bivectors. Sectional and isotropic
/// curvature are both of this form.
class BivectorObjective {
 public:
  struct Term {
    double coef;
    int a, b, c, d;
  };

  BivectorObjective(const CurvatureTensor& R, std::vector<Term> terms)
      : n_(R.dim()), op_(R.bivector_operator()), terms_(std::move(terms)) {}

  [[nodiscard]] double value(const MatrixXd& X) const {
    double total = 0.0;
    for (const auto& t : terms_) {
      const VectorXd w1 = wedge(X.col(t.a), X.col(t.b));
      const VectorXd w2 = wedge(X.col(t.c), X.col(t.d));
      total += t.coef * w2.dot(op_ * w1);
    }
    return total;
  }

  [[nodiscard]] MatrixXd gradient(const MatrixXd& X) const {
    MatrixXd grad = MatrixXd::Zero(X.rows(), X.cols());
    for (const auto& t : terms_) {
      const VectorXd w1 = wedge(X.col(t.a), X.col(t.b));
      const VectorXd w2 = wedge(X.col(t.c), X.col(t.d));
      const MatrixXd g1 = skew_from_bivector(t.coef * (op_ * w2), n_);
      const MatrixXd g2 = skew_from_bivector(t.coef * (op_ * w1), n_);
      grad.col(t.a) += g1 * X.col(t.b);
      grad.col(t.b) -= g1 * X.col(t.a);
      grad.col(t.c) += g2 * X.col(t.d);
      grad.col(t.d) -= g2 * X.col(t.c);
    }
    return grad;
  }

  [[nodiscard]] StiefelObjective as_objective() const {
    return {[this](const MatrixXd& X) { return value(X); }, [this](const MatrixXd& X) { return gradient(X); }};
  }

 private:
  int n_;
  MatrixXd op_;
  std::vector<Term> terms_;
};

/// K_min = min{K(π) : π a 2-plane}. The frame holds an orthonormal basis
/// of the minimizing plane.
inline ExtremumResult k_min(const CurvatureTensor& R, const SearchConfig& cfg) {
  cfg.validate();
  const int n = R.dim();
  const BivectorObjective objective(R, {{1.0, 0, 1, 0, 1}});
  MultiStartOptions opt{n, 2, cfg.restarts, cfg.max_iters, cfg.grad_tol, cfg.seed, {}, {}};
  LocalMinimum best = multistart_minimize(objective.as_objective(), opt);

  ExtremumResult out;
  out.value = best.value;
  out.frame = std::move(best.point);
  out.oracle_value = sampling_oracle(n, 2, cfg.oracle_samples, cfg.seed, false, [&](const MatrixXd& X) {
    return sectional(R, X.col(0), X.col(1));
  });
  out.gap = std::abs(out.value - out.oracle_value);
  return out;
}

namespace detail {

/// Θ_p as a function of an orthonormal basis Y (n×p) of the first block:
/// Σ_a 2(tr(YᵀA²Y) − tr(M²)) − t(T − t), with M = YᵀAY, t = tr M, T = tr A.
/// Depends only on span(Y).
class ThetaOnGrassmannian {
 public:
  explicit ThetaOnGrassmannian(const SecondFundamentalForm& sff) {
    for (const auto& A : sff.shape_operators()) {
      shape_.push_back(A);
      squared_.push_back(A * A);
      traces_.push_back(A.trace());
    }
  }

  [[nodiscard]] double value(const MatrixXd& Y) const {
    double theta = 0.0;
    for (std::size_t a = 0; a < shape_.size(); ++a) {
      const MatrixXd M = Y.transpose() * shape_[a] * Y;
      const double t = M.trace();
      theta += 2.0 * ((Y.transpose() * squared_[a] * Y).trace() - M.squaredNorm()) - t * (traces_[a] - t);
    }
    return theta;
  }

  [[nodiscard]] MatrixXd gradient(const MatrixXd& Y) const {
    MatrixXd grad = MatrixXd::Zero(Y.rows(), Y.cols());
    for (std::size_t a = 0; a < shape_.size(); ++a) {
      const MatrixXd AY = shape_[a] * Y;
      const MatrixXd M = Y.transpose() * AY;
      const double t = M.trace();
      grad += 4.0 * squared_[a] * Y - 8.0 * AY * M + 2.0 * (2.0 * t - traces_[a]) * AY;
    }
    return grad;
  }

 private:
  std::vector<MatrixXd> shape_, squared_;
  std::vector<double> traces_;
};

}  // namespace detail

/// sup Θ_p over all orthonormal frames (equivalently over p-planes). The
/// frame is a full n×n orthonormal basis whose first p columns span the
/// maximizing p-plane.
inline ExtremumResult sup_theta(const SecondFundamentalForm& sff, int p, const SearchConfig& cfg) {
  cfg.validate();
  const int n = sff.dim();
  if (p < 1 || p > n - 1) throw Error("sup_theta: p must satisfy 1 <= p <= n-1");
  const detail::ThetaOnGrassmannian theta(sff);
  const StiefelObjective negated{[&](const MatrixXd& Y) { return -theta.value(Y); },
                                 [&](const MatrixXd& Y) { return MatrixXd(-theta.gradient(Y)); }};
  MultiStartOptions opt{n, p, cfg.restarts, cfg.max_iters, cfg.grad_tol, cfg.seed, {}, {}};
  LocalMinimum best = multistart_minimize(negated, opt);

  ExtremumResult out;
  out.maximize = true;
  out.value = -best.value;
  out.frame = complete_basis(best.point);
  out.oracle_value = sampling_oracle(n, n, cfg.oracle_samples, cfg.seed, true,
                                     [&](const MatrixXd& Q) { return theta_p(sff, p, Q); });
  out.gap = std::abs(out.value - out.oracle_value);
  return out;
}

/// Terms of R_1331 + R_1441 + R_2332 + R_2442 − 2R_1234 as bivector pairings
/// (⟨⟨ℛ(a∧b), c∧d⟩⟩ = R(a,b,d,c)).
inline std::vector<BivectorObjective::Term> isotropic_terms() {
  return {{1.0, 0, 2, 0, 2}, {1.0, 0, 3, 0, 3}, {1.0, 1, 2, 1, 2}, {1.0, 1, 3, 1, 3}, {2.0, 0, 1, 2, 3}};
}

/// Minimum of the isotropic expression over orthonormal 4-frames.
inline ExtremumResult min_isotropic(const CurvatureTensor& R, const SearchConfig& cfg) {
  cfg.validate();
  const int n = R.dim();
  if (n < 4) throw Error("min_isotropic requires n >= 4");
  const BivectorObjective objective(R, isotropic_terms());
  MultiStartOptions opt{n, 4, cfg.restarts, cfg.max_iters, cfg.grad_tol, cfg.seed, {}, {}};
  LocalMinimum best = multistart_minimize(objective.as_objective(), opt);

  ExtremumResult out;
  out.value = best.value;
  out.frame = std::move(best.point);
  // For n = 4 the sampled frames are Haar-random elements of O(4).
  out.oracle_value = sampling_oracle(n, 4, cfg.oracle_samples, cfg.seed, false,
                                     [&](const MatrixXd& F) { return isotropic_expression(R, F); });
  out.gap = std::abs(out.value - out.oracle_value);
  return out;
}

}  // namespace pinchlab
