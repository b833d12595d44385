#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pinchlab/fourdim.hpp"
#include "pinchlab/harness.hpp"
#include "pinchlab/immersion.hpp"

using namespace pinchlab;

namespace {

SearchConfig config(std::uint64_t seed, int restarts = 16) { return {restarts, 500, 1e-10, 500, seed}; }

/// Data of the CP² embedding at the chart origin, where the chart frame is
/// complex-adapted (J e1 = e2, J e3 = e4).
PointData cp2_origin() { return pointwise_sff(gen_cp2(), VectorXd::Zero(4)); }

}  // namespace

TEST(Hodge, StarIsAnIsometricInvolution) {
  for (int orientation : {+1, -1}) {
    const Matrix6d S = hodge_star(orientation);
    EXPECT_LT((S * S - Matrix6d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((S - S.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  }
  const Matrix6d E = eta_basis();
  EXPECT_LT((E.transpose() * E - Matrix6d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  const Matrix6d D = E.transpose() * hodge_star() * E;
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(D(i, i), i < 3 ? 1.0 : -1.0, 1e-15);
}

TEST(Hodge, StarMatchesVolumeFormPairing) {
  // α ∧ *β = ⟨α, β⟩ vol, checked through ω ∧ η = ⟨*ω, η⟩ vol.
  auto wedge_top = [](const Vector6d& a, const Vector6d& b) {
    return a(0) * b(5) - a(1) * b(4) + a(2) * b(3) + a(3) * b(2) - a(4) * b(1) + a(5) * b(0);
  };
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int t = 0; t < 10; ++t) {
    Vector6d a, b;
    for (int i = 0; i < 6; ++i) a(i) = g(rng), b(i) = g(rng);
    EXPECT_NEAR(wedge_top(a, b), (hodge_star() * a).dot(b), 1e-12);
  }
}

TEST(Bochner, ConstantCurvatureIsScalar) {
  const BochnerMatrix bm = bochner_matrix(CurvatureTensor::constant_curvature(4, 1.0));
  EXPECT_LT((bm.B - 4.0 * Matrix6d::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  const SpectrumReport s = sd_asd_spectra(bm);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(s.mu_sd[i], 4.0, 1e-14);
    EXPECT_NEAR(s.mu_asd[i], 4.0, 1e-14);
  }
}

TEST(Bochner, CommutesWithStarForRandomGaussTensors) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const CurvatureTensor R = gauss_curvature(random_sff(4, 1 + t % 4, 1.0, rng), AmbientSpace(0.5 * (t % 3) - 0.5));
    EXPECT_LT(star_commutator(bochner_matrix(R)), 1e-12);
  }
}

TEST(Bochner, OrientationSwapsBlocks) {
  std::mt19937_64 rng(3);
  const CurvatureTensor R = gauss_curvature(random_sff(4, 2, 1.0, rng), AmbientSpace(0.2));
  const SpectrumReport plus = sd_asd_spectra(bochner_matrix(R, +1));
  const SpectrumReport minus = sd_asd_spectra(bochner_matrix(R, -1));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(plus.mu_sd[i], minus.mu_asd[i], 1e-13);
    EXPECT_NEAR(plus.mu_asd[i], minus.mu_sd[i], 1e-13);
  }
  EXPECT_THROW((void)bochner_matrix(CurvatureTensor::constant_curvature(5, 1.0)), Error);
}

TEST(Bochner, FubiniStudySpectra) {
  // Holomorphic curvature 2 (k = 1/2): K_min = 1/2, SD {0, 6, 6}, ASD {4, 4, 4}.
  const CurvatureTensor R = oracle::fubini_study(0.5);
  EXPECT_LT(R.symmetry_defect(), 1e-14);
  const SpectrumReport s = sd_asd_spectra(bochner_matrix(R));
  EXPECT_NEAR(s.mu_sd[0], 0.0, 1e-13);
  EXPECT_NEAR(s.mu_sd[1], 6.0, 1e-13);
  EXPECT_NEAR(s.mu_sd[2], 6.0, 1e-13);
  for (double v : s.mu_asd) EXPECT_NEAR(v, 4.0, 1e-13);
  EXPECT_NEAR(k_min(R, config(1)).value, 0.5, 1e-12);
  EXPECT_NEAR(min_isotropic(R, config(2)).value, 0.0, 1e-10);
}

TEST(Bochner, SignMatchesIsotropicMinimum) {
  // Nonnegative ℬ on 2-forms exactly when the isotropic curvature is nonnegative.
  std::mt19937_64 rng(4);
  int discordant = 0;
  for (int t = 0; t < 60; ++t) {
    const CurvatureTensor R = gauss_curvature(random_sff(4, 1 + t % 3, 0.6, rng), AmbientSpace(0.5));
    const double e = sd_asd_spectra(bochner_matrix(R)).min_eig;
    const double iso = min_isotropic(R, config(100 + t, 32)).value;
    if ((e > 1e-8 && iso < -1e-8) || (e < -1e-8 && iso > 1e-8)) ++discordant;
  }
  EXPECT_EQ(discordant, 0);
}

TEST(Lemma, DistinctIndexCount) {
  EXPECT_EQ(distinct_indices(0, 1, 2, 3), 4);
  EXPECT_EQ(distinct_indices(0, 1, 1, 2), 3);
  EXPECT_EQ(distinct_indices(0, 1, 1, 0), 2);
}

TEST(Lemma, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  const CurvatureTensor R = gauss_curvature(random_sff(4, 2, 1.0, rng), AmbientSpace(0.3));
  const double kmin = 0.1;
  auto F = [&](const VectorXd& x, const VectorXd& y) {
    return R.contract(x, y, y, x) - kmin * (x.squaredNorm() * y.squaredNorm() - x.dot(y) * x.dot(y));
  };
  const int i = 0, j = 2;
  const auto [gx, gy] = lemma_r_gradient(R, kmin, i, j);
  const double h = 1e-6;
  for (int k = 0; k < 4; ++k) {
    if (k == i || k == j) continue;
    VectorXd ei = VectorXd::Unit(4, i), ej = VectorXd::Unit(4, j), dk = h * VectorXd::Unit(4, k);
    EXPECT_NEAR(gx(k), (F(ei + dk, ej) - F(ei - dk, ej)) / (2 * h), 1e-7);
    EXPECT_NEAR(gy(k), (F(ei, ej + dk) - F(ei, ej - dk)) / (2 * h), 1e-7);
  }
}

TEST(Lemma, RejectsFramesOffTheMinimum) {
  const CurvatureTensor R = oracle::fubini_study(0.5);
  // e1, e2 span a complex line (K = 2), so the mixed planes of the
  // permuted frame (e1, e3, e2, e4) include K(e1∧e2) = 2 ≠ K_min.
  MatrixXd F = MatrixXd::Identity(4, 4);
  F.col(1).swap(F.col(2));
  EXPECT_THROW((void)check_lemma_r(R, F, 0.5, 1e-8), HypothesisNotMet);
  const LemmaReport ok = check_lemma_r(R, MatrixXd::Identity(4, 4), 0.5, 1e-12);
  EXPECT_TRUE(ok.pass);
  EXPECT_LT(ok.max_component, 1e-14);
}

TEST(EqualityStructure, Cp2AdaptedFrame) {
  const PointData pd = cp2_origin();
  // At the chart origin the coordinate frame is already adapted.
  const EqualityCheck direct = check_equality_sff(pd.sff, MatrixXd::Identity(4, 4), 1e-6);
  EXPECT_TRUE(direct.pass) << direct.max_residual;
  EXPECT_LT(kaehler_residual(pd.sff, complex_structure(MatrixXd::Identity(4, 4))), 1e-6);

  const EqualityFrame ef = find_equality_frame(pd.sff, pd.amb, equality_search_config(config(3)), 0.5);
  EXPECT_LT(ef.max_residual, 1e-6);
  EXPECT_LT(orthogonality_defect(ef.frame), 1e-8);
  const EigenvalueFormulaCheck ev = check_eigenvalue_formulas(pd.sff, pd.amb, ef.frame, 0.5, 1e-5);
  EXPECT_TRUE(ev.pass) << ev.max_deviation;
}

TEST(EqualityStructure, RandomFormFails) {
  std::mt19937_64 rng(6);
  const SecondFundamentalForm sff = random_sff(4, 3, 1.0, rng);
  EXPECT_FALSE(check_equality_sff(sff, MatrixXd::Identity(4, 4), 1e-6).pass);
  EXPECT_THROW((void)kaehler_residual(sff, MatrixXd::Identity(4, 4)), Error);
}
