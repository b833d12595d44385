#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pinchlab/harness.hpp"

using namespace pinchlab;

namespace {

SearchConfig config(std::uint64_t seed, int restarts = 16) { return {restarts, 500, 1e-10, 0, seed}; }

PointData unit_sphere(int n) { return point_from_sff(SecondFundamentalForm::umbilic(n, 1.0), AmbientSpace(0.0)); }

RunOptions run_options(std::vector<Certificate> certs, int samples, std::uint64_t seed = 1) {
  RunOptions o;
  o.samples = samples;
  o.seed = seed;
  o.certificates = std::move(certs);
  o.search.restarts = 16;
  return o;
}

}  // namespace

TEST(Star, UmbilicSpheresAroundTheCriticalDimension) {
  // b(n, 1, 0) = n/8 against K = 1.
  for (int n = 4; n <= 9; ++n) {
    const StarCertificate s = certify_star(unit_sphere(n), config(n));
    EXPECT_NEAR(s.kmin, 1.0, 1e-12);
    EXPECT_NEAR(s.H, 1.0, 1e-14);
    EXPECT_NEAR(s.margin, n == 4 ? 2.0 / 3.0 : 1.0 - n / 8.0, 1e-12) << n;
  }
}

TEST(Star, VeroneseMarginIsOneFifteenth) {
  const ImmersionChart chart = gen_veronese(4);
  for (const auto& u : low_discrepancy_points(chart, 5, 1))
    EXPECT_NEAR(certify_star(pointwise_sff(chart, u), config(2)).margin, 1.0 / 15.0, 1e-6);
}

TEST(LawsonSimons, SpheresHaveMarginPTimesNMinusP) {
  const PointData round = unit_sphere(6);
  const PointData equator = point_from_sff(SecondFundamentalForm::zero(6, 1), AmbientSpace(1.0));
  for (int p = 2; p <= 4; ++p) {
    EXPECT_NEAR(certify_lawson_simons(round, p, config(p)).margin, p * (6.0 - p), 1e-10);
    EXPECT_NEAR(certify_lawson_simons(equator, p, config(p)).margin, p * (6.0 - p), 1e-10);
  }
  EXPECT_THROW((void)certify_lawson_simons(round, 1, config(0)), Error);
  EXPECT_THROW((void)certify_lawson_simons(round, 5, config(0)), Error);
}

TEST(LawsonSimons, RandomPinchedFormsSatisfyTheBound) {
  PinchedSffSampler sampler(5, 2, 11);
  for (int t = 0; t < 5; ++t) {
    const PointData pd = point_from_sff(sampler.next(), sampler.ambient());
    EXPECT_GE(certify_lawson_simons(pd, 2, config(t, 32)).margin, -1e-9);
  }
}

TEST(EqualityStructure, SyntheticEqualityPoint) {
  const double c = 1.0;
  const PointData pd = point_from_sff(oracle::prop23_equality_sff(c), AmbientSpace(c));
  const MatrixXd I = MatrixXd::Identity(5, 5);
  EXPECT_NEAR(theta_p(pd.sff, 2, I), 6.0 * c, 1e-13);
  const EqualityStructureReport r = certify_prop23_equality(pd, 2, I, 1e-9);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.residuals.size(), 7u);
  EXPECT_LT(r.max_residual, 1e-13);
  // K_min = c/2 at this point and the supremum of Θ₂ is 6c.
  EXPECT_NEAR(k_min(gauss_curvature(pd.sff, pd.amb), config(3)).value, c / 2.0, 1e-10);
  EXPECT_NEAR(sup_theta(pd.sff, 2, config(4, 32)).value, 6.0 * c, 1e-8);
}

TEST(EqualityStructure, TotallyGeodesicEquatorAndNonEqualityPoints) {
  const PointData flat = point_from_sff(SecondFundamentalForm::zero(5, 1), AmbientSpace(0.0));
  EXPECT_TRUE(certify_prop23_equality(flat, 2, MatrixXd::Identity(5, 5), 1e-9).pass);
  EXPECT_THROW((void)certify_prop23_equality(unit_sphere(5), 2, MatrixXd::Identity(5, 5), 1e-9), NotEqualityPoint);
  EXPECT_THROW((void)certify_prop23_equality(flat, 2, 2.0 * MatrixXd::Identity(5, 5), 1e-9), Error);
}

TEST(Nnic, UnitSphereAndCp2) {
  const NnicReport s = certify_nnic(unit_sphere(4), config(1), Tolerances::direct());
  EXPECT_TRUE(s.hypothesis);
  EXPECT_TRUE(s.pass);
  EXPECT_NEAR(s.iso_min, 4.0, 1e-10);
  EXPECT_FALSE(s.equality);

  const PointData cp2 = pointwise_sff(gen_cp2(), low_discrepancy_points(gen_cp2(), 1, 2)[0]);
  const NnicReport r = certify_nnic(cp2, config(2), Tolerances{});
  EXPECT_TRUE(r.hypothesis);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.iso_min, 0.0, 1e-5);
  ASSERT_TRUE(r.equality);
  EXPECT_TRUE(r.equality->pass) << r.equality->max_residual;
  EXPECT_THROW((void)certify_nnic(unit_sphere(5), config(0), Tolerances{}), Error);
}

TEST(Nnic, ProductControlFailsTheHypothesis) {
  const ImmersionChart chart = gen_product_spheres(std::sqrt(0.5), std::sqrt(0.5));
  const NnicReport r = certify_nnic(pointwise_sff(chart, VectorXd::Zero(4)), config(3), Tolerances{});
  EXPECT_NEAR(r.star.margin, -1.0 / 3.0, 1e-5);
  EXPECT_FALSE(r.hypothesis);
  EXPECT_TRUE(r.pass);
}

TEST(PropEll, LambdaConditionRhs) {
  EXPECT_DOUBLE_EQ(lambda_condition_rhs(4, 1.0, 2.0), 14.0);
  EXPECT_DOUBLE_EQ(lambda_condition_rhs(5, 1.0, 1.0), 2.4);
  EXPECT_THROW((void)lambda_condition_rhs(3, 0.0, 1.0), Error);
}

TEST(PropEll, ThresholdEllipsoidAndControl) {
  const double eps = epsilon_bound(4);
  const PropEllReport at = certify_prop_ell({1, 1, 1, 1, eps}, 60, 1, config(1), 1e-6);
  EXPECT_EQ(at.status, "pass");
  EXPECT_TRUE(at.hypothesis);
  EXPECT_GE(at.lambda_margin, -1e-6);
  EXPECT_LT(at.lambda_margin, 1e-3);
  EXPECT_GE(at.worst_star_margin, -1e-6);

  const PropEllReport round = certify_prop_ell({1, 1, 1, 1, 1}, 20, 2, config(2), 1e-6);
  EXPECT_TRUE(round.strict);
  EXPECT_NEAR(round.lambda_margin, 2.0, 1e-5);
  EXPECT_EQ(round.status, "pass");

  const PropEllReport control = certify_prop_ell({1, 1, 1, 1, 1.5}, 20, 3, config(3), 1e-6);
  EXPECT_FALSE(control.hypothesis);
  EXPECT_EQ(control.status, "hypothesis-fails");
  EXPECT_TRUE(control.pass);

  EXPECT_THROW((void)certify_prop_ell(gen_veronese(4), 5, 1, config(1), 1e-6), Error);
}

TEST(PropEll, VerdictLogic) {
  CurvatureExtremes ex;
  ex.min_lambda1 = 1.0;
  ex.max_lambdan = 1.0;
  const PropEllReport bad = prop_ell_verdict(ex, 5, 0.0, {0.1, -0.5, 0.2}, 1e-6);
  EXPECT_EQ(bad.status, "fail");
  EXPECT_EQ(bad.worst_point, 1);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(prop_ell_verdict(ex, 5, 0.0, {0.1, 0.0}, 1e-6).status, "pass");
  ex.min_lambda1 = 0.0;
  EXPECT_THROW((void)prop_ell_verdict(ex, 5, 0.0, {}, 1e-6), Error);
}

TEST(Sampler, AcceptedFormsSatisfyTheHypothesis) {
  PinchedSffSampler sampler(4, 2, 7);
  EXPECT_GE(sampler.pilot_acceptance(), 0.05);
  for (int t = 0; t < 10; ++t) {
    const PointData pd = point_from_sff(sampler.next(), sampler.ambient());
    EXPECT_GE(certify_star(pd, config(100 + t, 32)).margin, -1e-8);
  }
  PinchedSffSampler again(4, 2, 7);
  EXPECT_EQ(again.scale(), sampler.scale());
  EXPECT_THROW(PinchedSffSampler(3, 1, 0), Error);
}

TEST(ParallelMap, OrderAndErrorsIndependentOfThreads) {
  auto f = [](int i) { return i * i; };
  EXPECT_EQ(parallel_map<int>(20, 1, f), parallel_map<int>(20, 4, f));
  auto g = [](int i) -> int {
    if (i == 3 || i == 7) throw Error("boom " + std::to_string(i));
    return i;
  };
  for (int threads : {1, 4}) {
    try {
      (void)parallel_map<int>(10, threads, g);
      FAIL();
    } catch (const Error& e) {
      EXPECT_STREQ(e.what(), "boom 3");
    }
  }
}

TEST(Summary, WorstMarginIsTheMinimum) {
  std::vector<PointVerdict> pts(4);
  const double margins[] = {0.3, -0.2, 0.1, -0.2};
  for (int i = 0; i < 4; ++i) {
    pts[i].id = i;
    pts[i].star_margin = margins[i];
    pts[i].status[Certificate::Star] = margins[i] >= 0 ? "pass" : "fail";
  }
  const CertificateSummary s = summarize(pts, Certificate::Star);
  EXPECT_EQ(s.worst_margin, -0.2);
  EXPECT_EQ(s.worst_point, 1);
  EXPECT_EQ(s.status, "fail");

  for (auto& v : pts) v.status[Certificate::EqualityCase] = "not-applicable";
  EXPECT_EQ(summarize(pts, Certificate::EqualityCase).status, "not-applicable");
  pts[2].status[Certificate::Isotropic] = "hypothesis-fails";
  pts[2].iso_min = -1.0;
  const CertificateSummary iso = summarize(pts, Certificate::Isotropic);
  EXPECT_EQ(iso.status, "hypothesis-fails");
  EXPECT_TRUE(iso.pass);
}

TEST(Manifold, VeroneseAndCriticalSpheres) {
  const ManifoldReport v = certify_manifold(gen_veronese(4), run_options({Certificate::Star}, 6));
  EXPECT_TRUE(v.pass);
  ASSERT_EQ(v.certificates.size(), 1u);
  EXPECT_NEAR(v.certificates[0].worst_margin, 1.0 / 15.0, 1e-6);

  const ManifoldReport s9 = certify_manifold(gen_sphere(9, 1.0), run_options({Certificate::Star}, 3));
  EXPECT_FALSE(s9.pass);
  EXPECT_NEAR(s9.certificates[0].worst_margin, -0.125, 1e-6);
}

TEST(Manifold, ProductControlAndApplicability) {
  const ManifoldReport r = certify_manifold(
      gen_product_spheres(std::sqrt(0.5), std::sqrt(0.5)),
      run_options({Certificate::Star, Certificate::Isotropic, Certificate::EqualityCase}, 3));
  EXPECT_EQ(r.certificates[0].status, "fail");
  EXPECT_EQ(r.certificates[1].status, "hypothesis-fails");
  EXPECT_EQ(r.certificates[2].status, "not-applicable");
  EXPECT_FALSE(r.pass);

  EXPECT_THROW((void)certify_manifold(gen_sphere(5, 1.0), run_options({Certificate::Isotropic}, 1)), Error);
  EXPECT_THROW((void)certify_manifold(gen_veronese(4), run_options({Certificate::PropEll}, 1)), Error);
  EXPECT_THROW((void)certify_manifold(gen_veronese(4), run_options({Certificate::Star}, 0)), Error);
}

TEST(Manifold, ThreadCountDoesNotChangeResults) {
  RunOptions o = run_options({Certificate::Star, Certificate::Isotropic, Certificate::Bochner}, 4, 9);
  const ManifoldReport a = certify_manifold(gen_cp2(), o);
  o.threads = 3;
  const ManifoldReport b = certify_manifold(gen_cp2(), o);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].star_margin, b.points[i].star_margin);
    EXPECT_EQ(*a.points[i].iso_min, *b.points[i].iso_min);
  }
}
