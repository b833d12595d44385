#pragma once

// Certificates for the pinching statements, evaluated at single points and
// aggregated over sampled chart points.
//
// Every certificate reports a margin (larger is better) and a status:
// "pass", "fail", "hypothesis-fails" (an implication whose premise is not
// met, so nothing is claimed) or "not-applicable". These are hypothesis-level
// certificates: they check the pointwise conditions, never the topological
// conclusions.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "pinchlab/curvature.hpp"
#include "pinchlab/error.hpp"
#include "pinchlab/fourdim.hpp"
#include "pinchlab/frame_search.hpp"
#include "pinchlab/immersion.hpp"
#include "pinchlab/linalg.hpp"

namespace pinchlab {

inline constexpr std::string_view kScope = "hypothesis-level certificate";

enum class Certificate { Star, LawsonSimons, Isotropic, Bochner, EqualityCase, PropEll };

inline constexpr std::array<Certificate, 6> kAllCertificates{Certificate::Star,    Certificate::LawsonSimons,
                                                             Certificate::Isotropic, Certificate::Bochner,
                                                             Certificate::EqualityCase, Certificate::PropEll};

inline std::string_view certificate_name(Certificate c) {
  switch (c) {
    case Certificate::Star: return "star";
    case Certificate::LawsonSimons: return "lawson-simons";
    case Certificate::Isotropic: return "isotropic";
    case Certificate::Bochner: return "bochner";
    case Certificate::EqualityCase: return "equality-case";
    case Certificate::PropEll: return "prop-ell";
  }
  return "";
}

inline std::optional<Certificate> parse_certificate(std::string_view name) {
  for (Certificate c : kAllCertificates)
    if (certificate_name(c) == name) return c;
  return std::nullopt;
}

struct Tolerances {
  double certificate = 1e-6;  // margins ≥ −certificate pass
  double equality = 1e-5;     // equality band and equality-structure residuals

  /// Defaults for directly supplied second fundamental forms (no
  /// finite-difference error).
  static Tolerances direct() { return {1e-9, 1e-9}; }
};

/// PointData for a directly supplied second fundamental form.
inline PointData point_from_sff(SecondFundamentalForm sff, AmbientSpace amb) {
  const int n = sff.dim();
  const int m = sff.codim();
  return {VectorXd(), MatrixXd::Identity(n, n), MatrixXd::Identity(m, m), std::move(sff), amb};
}

// ---------------------------------------------------------------------------
// Pointwise certificates.

struct StarCertificate {
  double kmin = 0.0;
  double H = 0.0;
  double c = 0.0;
  double bound = 0.0;   // b(n, H, c)
  double margin = 0.0;  // kmin − bound
  MatrixXd plane;       // n×2 basis of a minimizing plane
};

inline StarCertificate certify_star(const PointData& pd, const SearchConfig& cfg) {
  const CurvatureTensor R = gauss_curvature(pd.sff, pd.amb);
  ExtremumResult km = k_min(R, cfg);
  StarCertificate out;
  out.kmin = km.value;
  out.H = mean_curvature(pd.sff).norm;
  out.c = pd.amb.c;
  out.bound = pinching_bound(pd.sff.dim(), out.H, out.c);
  out.margin = out.kmin - out.bound;
  out.plane = std::move(km.frame);
  return out;
}

struct LawsonSimonsCertificate {
  int p = 0;
  double sup_theta = 0.0;
  double bound = 0.0;   // p(n−p)c
  double margin = 0.0;  // bound − sup_theta
  MatrixXd frame;
};

inline LawsonSimonsCertificate certify_lawson_simons(const PointData& pd, int p, const SearchConfig& cfg) {
  const int n = pd.sff.dim();
  if (p < 2 || p > n - 2) throw Error("certify_lawson_simons: p must satisfy 2 <= p <= n-2");
  ExtremumResult sup = sup_theta(pd.sff, p, cfg);
  LawsonSimonsCertificate out;
  out.p = p;
  out.sup_theta = sup.value;
  out.bound = static_cast<double>(p * (n - p)) * pd.amb.c;
  out.margin = out.bound - out.sup_theta;
  out.frame = std::move(sup.frame);
  return out;
}

struct EqualityStructureReport {
  std::vector<Residual> residuals;
  double max_residual = 0.0;
  bool pass = false;
};

/// When Θ_p attains p(n−p)c at `frame` (within tol), the point must be
/// minimal with K(f_i∧f_j) = c/2 for i ≤ p < j. Throws NotEqualityPoint
/// otherwise.
inline EqualityStructureReport certify_prop23_equality(const PointData& pd, int p, const MatrixXd& frame, double tol) {
  const int n = pd.sff.dim();
  if (p < 1 || p > n - 1) throw Error("certify_prop23_equality: p must satisfy 1 <= p <= n-1");
  require_square_orthogonal(frame, n, "certify_prop23_equality frame", 1e-8);
  const double theta = theta_p(pd.sff, p, frame);
  const double bound = static_cast<double>(p * (n - p)) * pd.amb.c;
  if (std::abs(theta - bound) > tol) {
    throw NotEqualityPoint("Theta_" + std::to_string(p) + " = " + std::to_string(theta) + " differs from " +
                           std::to_string(bound));
  }
  const CurvatureTensor R = gauss_curvature(pd.sff, pd.amb);
  EqualityStructureReport out;
  out.residuals.push_back({"H", mean_curvature(pd.sff).norm});
  for (int i = 0; i < p; ++i)
    for (int j = p; j < n; ++j)
      out.residuals.push_back({"K(f" + std::to_string(i + 1) + ",f" + std::to_string(j + 1) + ")-c/2",
                               std::abs(sectional(R, frame.col(i), frame.col(j)) - pd.amb.c / 2.0)});
  for (const auto& r : out.residuals) out.max_residual = std::max(out.max_residual, r.value);
  out.pass = out.max_residual <= tol;
  return out;
}

struct EqualityCaseReport {
  MatrixXd frame;
  double kmin = 0.0;
  double sff_residual = 0.0;        // α conditions in the frame
  double mixed_curvature = 0.0;     // max |K(f_i∧f_j) − K_min|, i∈{1,2}, j∈{3,4}
  double lemma_components = 0.0;    // max |R_ijkl| with three distinct indices
  double eigenvalue_formulas = 0.0; // deviation of ℬ from the closed-form μ's
  double kaehler = 0.0;             // J-invariance defect of α
  double max_residual = 0.0;
  bool pass = false;
};

/// Searches for the adapted frame and checks the full equality structure.
inline EqualityCaseReport certify_equality_case(const PointData& pd, double kmin, const SearchConfig& cfg, double tol,
                                                std::vector<MatrixXd> warm_starts = {}) {
  if (pd.sff.dim() != 4) throw Error("certify_equality_case requires n = 4");
  const EqualityFrame ef =
      find_equality_frame(pd.sff, pd.amb, equality_search_config(cfg), kmin, std::move(warm_starts));
  const CurvatureTensor R = gauss_curvature(pd.sff, pd.amb);
  EqualityCaseReport out;
  out.frame = ef.frame;
  out.kmin = kmin;
  out.sff_residual = check_equality_sff(pd.sff, ef.frame, tol).max_residual;
  for (int i : {0, 1})
    for (int j : {2, 3})
      out.mixed_curvature = std::max(out.mixed_curvature, std::abs(sectional(R, ef.frame.col(i), ef.frame.col(j)) - kmin));
  if (out.mixed_curvature <= tol) {
    out.lemma_components = check_lemma_r(R, ef.frame, kmin, tol).max_component;
  } else {
    out.lemma_components = std::numeric_limits<double>::infinity();
  }
  out.eigenvalue_formulas = check_eigenvalue_formulas(pd.sff, pd.amb, ef.frame, kmin, tol).max_deviation;
  out.kaehler = kaehler_residual(pd.sff, complex_structure(ef.frame));
  out.max_residual = std::max({out.sff_residual, out.mixed_curvature, out.lemma_components, out.eigenvalue_formulas,
                               out.kaehler});
  out.pass = out.max_residual <= tol;
  return out;
}

struct NnicReport {
  StarCertificate star;
  bool hypothesis = false;  // (*) holds within tol
  double iso_min = 0.0;
  MatrixXd iso_frame;
  bool pass = false;  // vacuously true when the hypothesis fails
  std::optional<EqualityCaseReport> equality;
};

/// (*) ⇒ nonnegative isotropic curvature; at points where both (*) and the
/// isotropic minimum are in the equality band, also certifies the equality
/// structure.
inline NnicReport certify_nnic(const PointData& pd, const SearchConfig& cfg, const Tolerances& tol) {
  if (pd.sff.dim() != 4) throw Error("certify_nnic requires n = 4");
  NnicReport out;
  out.star = certify_star(pd, cfg.reseeded(1));
  out.hypothesis = out.star.margin >= -tol.certificate;
  ExtremumResult iso = min_isotropic(gauss_curvature(pd.sff, pd.amb), cfg.reseeded(2));
  out.iso_min = iso.value;
  out.iso_frame = std::move(iso.frame);
  out.pass = !out.hypothesis || out.iso_min >= -tol.certificate;
  if (out.hypothesis && std::abs(out.star.margin) <= tol.equality && out.iso_min <= tol.equality) {
    out.equality = certify_equality_case(pd, out.star.kmin, cfg.reseeded(3), tol.equality, {out.iso_frame});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convex hypersurfaces.

/// Right-hand side of the principal-curvature condition:
/// (4/n)(c + 2λ₁²) for n ≥ 5, 2c + 3λ₁² for n = 4.
inline double lambda_condition_rhs(int n, double c, double min_lambda1) {
  if (n < 4) throw Error("lambda condition requires n >= 4");
  const double l2 = min_lambda1 * min_lambda1;
  return n == 4 ? 2.0 * c + 3.0 * l2 : 4.0 / n * (c + 2.0 * l2);
}

struct PropEllReport {
  CurvatureExtremes extremes;
  double lhs = 0.0;  // (max λ_n)²
  double rhs = 0.0;
  double lambda_margin = 0.0;  // rhs − lhs
  bool hypothesis = false;     // lambda_margin ≥ −tol
  bool strict = false;         // lambda_margin > tol
  double worst_star_margin = std::numeric_limits<double>::quiet_NaN();
  int worst_point = -1;
  bool star_holds = false;
  std::string status;  // pass | fail | hypothesis-fails
  bool pass = false;
};

/// Combines sampled curvature extremes with per-point (*) margins.
inline PropEllReport prop_ell_verdict(const CurvatureExtremes& ex, int n, double c, const std::vector<double>& star_margins,
                                      double tol) {
  PropEllReport out;
  out.extremes = ex;
  if (!(ex.min_lambda1 > 0.0)) throw Error("prop-ell: hypersurface is not strictly convex (min principal curvature <= 0)");
  out.lhs = ex.max_lambdan * ex.max_lambdan;
  out.rhs = lambda_condition_rhs(n, c, ex.min_lambda1);
  out.lambda_margin = out.rhs - out.lhs;
  out.hypothesis = out.lambda_margin >= -tol;
  out.strict = out.lambda_margin > tol;
  if (!out.hypothesis) {
    out.status = "hypothesis-fails";
    out.pass = true;
    return out;
  }
  for (std::size_t i = 0; i < star_margins.size(); ++i) {
    if (out.worst_point < 0 || star_margins[i] < out.worst_star_margin) {
      out.worst_star_margin = star_margins[i];
      out.worst_point = static_cast<int>(i);
    }
  }
  out.star_holds = out.worst_point >= 0 && out.worst_star_margin >= -tol;
  out.pass = out.star_holds;
  out.status = out.pass ? "pass" : "fail";
  return out;
}

inline bool is_hypersurface(const ImmersionChart& chart) {
  return chart.N - chart.n - (chart.sphere_radius ? 1 : 0) == 1;
}

/// Checks the principal-curvature hypothesis from sampled extremes and, when
/// it holds, asserts (*) at every sampled point.
inline PropEllReport certify_prop_ell(const ImmersionChart& chart, int samples, std::uint64_t seed,
                                      const SearchConfig& cfg, double tol) {
  if (!is_hypersurface(chart)) throw Error("certify_prop_ell requires a hypersurface chart");
  const CurvatureExtremes ex = principal_curvature_extremes(chart, samples, seed);
  const double c = chart.sphere_radius ? 1.0 / (*chart.sphere_radius * *chart.sphere_radius) : 0.0;
  std::vector<double> margins;
  if (lambda_condition_rhs(chart.n, c, ex.min_lambda1) - ex.max_lambdan * ex.max_lambdan >= -tol) {
    const auto pts = low_discrepancy_points(chart, samples, seed);
    for (std::size_t i = 0; i < pts.size(); ++i)
      margins.push_back(certify_star(pointwise_sff(chart, pts[i]), cfg.reseeded(100 + i)).margin);
  }
  return prop_ell_verdict(ex, chart.n, c, margins, tol);
}

/// Ellipsoid x₁²/a₁² + … = 1 in R^{n+1} (c = 0).
inline PropEllReport certify_prop_ell(const std::vector<double>& axes, int samples, std::uint64_t seed,
                                      const SearchConfig& cfg, double tol) {
  return certify_prop_ell(gen_ellipsoid(axes), samples, seed, cfg, tol);
}

// ---------------------------------------------------------------------------
// Random second fundamental forms.

/// Symmetric shape operators with upper-triangular entries i.i.d. uniform in
/// [−scale, scale].
inline SecondFundamentalForm random_sff(int n, int m, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-scale, scale);
  std::vector<MatrixXd> h;
  for (int a = 0; a < m; ++a) {
    MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) A(i, j) = A(j, i) = unif(rng);
    h.push_back(std::move(A));
  }
  return {n, std::move(h)};
}

struct RejectionOptions {
  double c = 1.0;                   // ambient curvature offset
  double initial_scale = 1.0;
  double shrink = 0.7;
  double target_acceptance = 0.05;  // pilot acceptance needed before sampling
  int pilot = 200;
  double filter_tol = 1e-9;         // accept when K_min − b ≥ −filter_tol
  SearchConfig search{16, 500, 1e-10, 0, 0};
};

/// Rejection sampler for second fundamental forms satisfying (*) in
/// Q_c^{n+m}. The entry scale starts at `initial_scale` and shrinks by
/// `shrink` until a pilot batch reaches the target acceptance rate.
class PinchedSffSampler {
 public:
  PinchedSffSampler(int n, int m, std::uint64_t seed, RejectionOptions opt = {})
      : n_(n), m_(m), opt_(opt), amb_(opt.c), rng_(derive_seed(seed, 5)), scale_(opt.initial_scale) {
    if (n < 4) throw Error("pinched sampler requires n >= 4");
    if (m < 1) throw Error("pinched sampler requires m >= 1");
    if (!(opt.shrink > 0.0 && opt.shrink < 1.0) || opt.pilot < 1 || !(opt.target_acceptance > 0.0)) {
      throw Error("pinched sampler: invalid rejection options");
    }
    for (int round = 0; round < 200; ++round) {
      int ok = 0;
      for (int i = 0; i < opt_.pilot; ++i) ok += accepts(random_sff(n_, m_, scale_, rng_)) ? 1 : 0;
      pilot_acceptance_ = static_cast<double>(ok) / opt_.pilot;
      if (pilot_acceptance_ >= opt_.target_acceptance) return;
      scale_ *= opt_.shrink;
    }
    throw Error("pinched sampler: could not reach the target acceptance rate");
  }

  /// (*) within filter_tol: quick rejection on coordinate planes, then a
  /// full K_min search.
  [[nodiscard]] bool accepts(const SecondFundamentalForm& sff) {
    const CurvatureTensor R = gauss_curvature(sff, amb_);
    const double b = pinching_bound(n_, mean_curvature(sff).norm, amb_.c);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (R(i, j, j, i) < b - opt_.filter_tol) return false;
    SearchConfig cfg = opt_.search;
    cfg.seed = rng_();
    return k_min(R, cfg).value - b >= -opt_.filter_tol;
  }

  SecondFundamentalForm next() {
    for (int tries = 0; tries < 1000000; ++tries) {
      SecondFundamentalForm sff = random_sff(n_, m_, scale_, rng_);
      ++drawn_;
      if (accepts(sff)) {
        ++accepted_;
        return sff;
      }
    }
    throw Error("pinched sampler: no acceptable sample");
  }

  [[nodiscard]] const AmbientSpace& ambient() const { return amb_; }
  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] double pilot_acceptance() const { return pilot_acceptance_; }
  [[nodiscard]] double acceptance() const {
    return drawn_ == 0 ? pilot_acceptance_ : static_cast<double>(accepted_) / static_cast<double>(drawn_);
  }

 private:
  int n_, m_;
  RejectionOptions opt_;
  AmbientSpace amb_;
  std::mt19937_64 rng_;
  double scale_;
  double pilot_acceptance_ = 0.0;
  long long drawn_ = 0;
  long long accepted_ = 0;
};

// ---------------------------------------------------------------------------
// Aggregation over chart points.

/// out[i] = f(i) for i < count on up to `threads` workers. Results and the
/// first exception (by index) are independent of scheduling.
template <class T, class F>
std::vector<T> parallel_map(int count, int threads, F&& f) {
  std::vector<std::optional<T>> slots(static_cast<std::size_t>(std::max(count, 0)));
  std::vector<std::exception_ptr> errors(slots.size());
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(f(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(threads, 1, std::max(count, 1));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct RunOptions {
  int samples = 16;
  std::uint64_t seed = 0;
  Tolerances tol;
  std::vector<Certificate> certificates;
  SearchConfig search{32, 500, 1e-10, 0, 0};
  int threads = 1;

  [[nodiscard]] bool wants(Certificate c) const {
    return std::find(certificates.begin(), certificates.end(), c) != certificates.end();
  }
};

struct BochnerPoint {
  SpectrumReport spectra;
  bool consistent = true;  // sign agreement with the isotropic minimum
};

struct PointVerdict {
  int id = 0;
  VectorXd u;
  double kmin = 0.0;
  double H = 0.0;
  double c = 0.0;
  double bound = 0.0;
  double star_margin = 0.0;
  std::map<int, double> theta_margins;
  std::optional<double> iso_min;
  std::optional<BochnerPoint> bochner;
  std::optional<EqualityCaseReport> equality;
  std::map<Certificate, std::string> status;

  [[nodiscard]] bool passes(Certificate c) const {
    auto it = status.find(c);
    return it == status.end() || it->second != "fail";
  }
};

inline std::string status_of(bool ok) { return ok ? "pass" : "fail"; }

/// Throws if a requested certificate cannot be evaluated on this chart.
inline void check_applicable(const ImmersionChart& chart, const RunOptions& opt) {
  for (Certificate c : opt.certificates) {
    const std::string name(certificate_name(c));
    switch (c) {
      case Certificate::Star:
        if (chart.n < 4) throw Error("certificate star requires n >= 4");
        break;
      case Certificate::LawsonSimons:
        if (chart.n < 4) throw Error("certificate lawson-simons requires n >= 4");
        break;
      case Certificate::Isotropic:
      case Certificate::Bochner:
      case Certificate::EqualityCase:
        if (chart.n != 4) throw Error("certificate " + name + " requires n = 4");
        break;
      case Certificate::PropEll:
        if (!is_hypersurface(chart)) throw Error("certificate prop-ell requires a hypersurface example");
        break;
    }
  }
}

inline PointVerdict certify_point(const PointData& pd, int id, const RunOptions& opt, const SearchConfig& cfg) {
  const int n = pd.sff.dim();
  const double tol = opt.tol.certificate;
  PointVerdict v;
  v.id = id;
  v.u = pd.u;
  const StarCertificate star = certify_star(pd, cfg.reseeded(1));
  v.kmin = star.kmin;
  v.H = star.H;
  v.c = star.c;
  v.bound = star.bound;
  v.star_margin = star.margin;
  const bool hypothesis = v.star_margin >= -tol;
  if (opt.wants(Certificate::Star)) v.status[Certificate::Star] = status_of(hypothesis);
  if (opt.wants(Certificate::LawsonSimons)) {
    bool ok = true;
    for (int p = 2; p <= n - 2; ++p) {
      v.theta_margins[p] = certify_lawson_simons(pd, p, cfg.reseeded(10 + static_cast<std::uint64_t>(p))).margin;
      ok = ok && v.theta_margins[p] >= -tol;
    }
    v.status[Certificate::LawsonSimons] = status_of(ok);
  }
  const bool need_iso = opt.wants(Certificate::Isotropic) || opt.wants(Certificate::Bochner) ||
                        opt.wants(Certificate::EqualityCase);
  if (n == 4 && need_iso) {
    const CurvatureTensor R = gauss_curvature(pd.sff, pd.amb);
    ExtremumResult iso = min_isotropic(R, cfg.reseeded(2));
    v.iso_min = iso.value;
    if (opt.wants(Certificate::Isotropic)) {
      v.status[Certificate::Isotropic] = hypothesis ? status_of(iso.value >= -tol) : "hypothesis-fails";
    }
    if (opt.wants(Certificate::Bochner)) {
      BochnerPoint bp;
      bp.spectra = sd_asd_spectra(bochner_matrix(R));
      const double e = bp.spectra.min_eig;
      bp.consistent = !((e < -tol && iso.value > tol) || (e > tol && iso.value < -tol));
      v.status[Certificate::Bochner] = status_of(bp.consistent);
      v.bochner = bp;
    }
    if (opt.wants(Certificate::EqualityCase)) {
      const double band = opt.tol.equality;
      if (std::abs(v.star_margin) <= band && iso.value <= band) {
        v.equality = certify_equality_case(pd, v.kmin, cfg.reseeded(3), band, {iso.frame});
        v.status[Certificate::EqualityCase] = status_of(v.equality->pass);
      } else {
        v.status[Certificate::EqualityCase] = "not-applicable";
      }
    }
  }
  return v;
}

struct CertificateSummary {
  Certificate which = Certificate::Star;
  std::string status;
  double worst_margin = std::numeric_limits<double>::quiet_NaN();
  int worst_point = -1;  // −1 for manifold-level or empty summaries
  bool pass = true;
};

struct ManifoldReport {
  std::string example;
  std::vector<std::pair<std::string, std::string>> params;
  int samples = 0;
  std::uint64_t seed = 0;
  Tolerances tol;
  SearchConfig search;
  std::vector<CertificateSummary> certificates;
  std::vector<PointVerdict> points;
  std::optional<PropEllReport> prop_ell;
  bool pass = true;
  double runtime_seconds = 0.0;
};

namespace detail {

/// Margin of certificate `c` at a point, if the certificate applies there.
inline std::optional<double> point_margin(const PointVerdict& v, Certificate c) {
  if (!v.status.count(c)) return std::nullopt;
  switch (c) {
    case Certificate::Star: return v.star_margin;
    case Certificate::LawsonSimons: {
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& [p, m] : v.theta_margins) worst = std::min(worst, m);
      return worst;
    }
    case Certificate::Isotropic: return v.iso_min;
    case Certificate::Bochner: return v.bochner ? std::optional<double>(v.bochner->spectra.min_eig) : std::nullopt;
    case Certificate::EqualityCase:
      return v.equality ? std::optional<double>(-v.equality->max_residual) : std::nullopt;
    case Certificate::PropEll: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

/// Worst margins are exact minima over the point verdicts (first index on
/// ties). A certificate fails if any point fails it.
inline CertificateSummary summarize(const std::vector<PointVerdict>& points, Certificate c) {
  CertificateSummary s;
  s.which = c;
  bool any_applicable = false, any_hypothesis_failure = false;
  for (const auto& v : points) {
    auto it = v.status.find(c);
    if (it == v.status.end()) continue;
    if (it->second == "fail") s.pass = false;
    if (it->second == "hypothesis-fails") any_hypothesis_failure = true;
    if (it->second != "not-applicable") any_applicable = true;
    const auto m = detail::point_margin(v, c);
    if (m && (s.worst_point < 0 || *m < s.worst_margin)) {
      s.worst_margin = *m;
      s.worst_point = v.id;
    }
  }
  if (!s.pass) s.status = "fail";
  else if (!any_applicable) s.status = "not-applicable";
  else if (any_hypothesis_failure) s.status = "hypothesis-fails";
  else s.status = "pass";
  return s;
}

/// Samples the chart, certifies every point and folds the verdicts in point
/// order.
inline ManifoldReport certify_manifold(const ImmersionChart& chart, const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  if (opt.samples < 1) throw Error("samples must be >= 1");
  opt.search.validate();
  check_applicable(chart, opt);
  const auto pts = low_discrepancy_points(chart, opt.samples, opt.seed);
  ManifoldReport rep;
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  rep.tol = opt.tol;
  rep.search = opt.search;
  rep.points = parallel_map<PointVerdict>(opt.samples, opt.threads, [&](int i) {
    SearchConfig cfg = opt.search;
    cfg.seed = derive_seed(opt.seed, 4, static_cast<std::uint64_t>(i));
    return certify_point(pointwise_sff(chart, pts[static_cast<std::size_t>(i)]), i, opt, cfg);
  });
  for (Certificate c : kAllCertificates) {
    if (!opt.wants(c)) continue;
    if (c == Certificate::PropEll) {
      const double cc = chart.sphere_radius ? 1.0 / (*chart.sphere_radius * *chart.sphere_radius) : 0.0;
      std::vector<double> margins;
      for (const auto& v : rep.points) margins.push_back(v.star_margin);
      rep.prop_ell = prop_ell_verdict(principal_curvature_extremes(chart, opt.samples, opt.seed), chart.n, cc, margins,
                                      opt.tol.certificate);
      CertificateSummary s;
      s.which = c;
      s.status = rep.prop_ell->status;
      s.pass = rep.prop_ell->pass;
      s.worst_margin = rep.prop_ell->lambda_margin;
      rep.certificates.push_back(s);
      continue;
    }
    rep.certificates.push_back(summarize(rep.points, c));
  }
  for (const auto& s : rep.certificates) rep.pass = rep.pass && s.pass;
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace pinchlab
