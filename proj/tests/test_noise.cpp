#include "qswitch/noise.hpp"
#include "qswitch/switch_model.hpp"

#include "oracles/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qswitch;

TEST(Werner, EndpointsAndValidity) {
  EXPECT_LT((werner_state(1.0).matrix() - phi_plus().matrix()).norm(), 1e-15);
  EXPECT_LT((werner_state(0.0).matrix() - Matrix::Identity(4, 4) / 4.0).norm(), 1e-15);
  for (double v : {0.0, 0.3, 0.9, 1.0}) EXPECT_TRUE(is_density(werner_state(v)));
  EXPECT_THROW(werner_state(1.2), std::invalid_argument);
  EXPECT_THROW(werner_state(-0.1), std::invalid_argument);
}

TEST(Werner, FidelityRoundTrip) {
  for (double f : {0.25, 0.5, 0.9884, 1.0}) {
    const double v = visibility_from_fidelity(f);
    EXPECT_NEAR(fidelity_with_phi_plus(werner_state(v)), f, 1e-14);
  }
  EXPECT_NEAR(visibility_from_fidelity(0.9884), (4 * 0.9884 - 1) / 3, 1e-15);
  EXPECT_THROW(visibility_from_fidelity(0.2), std::invalid_argument);
}

TEST(Dephasing, ScalesControlCoherenceOnly) {
  const LinearOperator rho = phi_plus();
  const LinearOperator d = dephase_control(rho, 0.4);
  // phi+ has coherence |00><11|: both B and C flip, so it is scaled.
  EXPECT_NEAR(d.matrix()(0, 3).real(), 0.5 * 0.6, 1e-15);
  EXPECT_NEAR(d.matrix()(0, 0).real(), 0.5, 1e-15);
  EXPECT_TRUE(is_density(d));
  // Coherence on B alone is untouched.
  Matrix bonly = Matrix::Zero(4, 4);
  bonly(0, 0) = bonly(2, 2) = bonly(0, 2) = bonly(2, 0) = 0.5;
  const LinearOperator b(bonly, {2, 2});
  EXPECT_LT((dephase_control(b, 1.0).matrix() - bonly).norm(), 1e-15);
  EXPECT_THROW(dephase_control(rho, 1.5), std::invalid_argument);
  EXPECT_THROW(dephase_control(rho, 0.5, 2), std::out_of_range);
}

// The switch is block diagonal in the control, so dephasing before or after
// it gives the same statistics.
TEST(Dephasing, CommutesWithTheSwitch) {
  for (double v : {0.4, 1.0})
    for (double g : {0.0, 0.3, 1.0}) {
      const CorrelationTable before = full_table(dephase_control(werner_state(v), g));
      const CorrelationTable after = noisy_table({v, g, 0.0});
      EXPECT_LT(max_abs_difference(before, after), 1e-14) << v << " " << g;
    }
}

TEST(Noise, TableMatchesPathOracleWithDephasing) {
  for (double v : {0.0, 0.7, 1.0})
    for (double g : {0.0, 0.25, 1.0}) {
      const CorrelationTable t = noisy_table({v, g, 0.0});
      const oracle::Table o = oracle::switch_table(oracle::werner(v), g);
      for (int s = 0; s < 16; ++s)
        for (int k = 0; k < 16; ++k) ASSERT_NEAR(t.row(s)[k], o[s][k], 1e-13);
      EXPECT_TRUE(check_no_signaling(t).ok(1e-10));
    }
}

TEST(Noise, ClosedFormOnGrid) {
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double v = i / 20.0, g = j / 20.0;
      const double oracle_total = oracle::terms(oracle::switch_table(oracle::werner(v), g)).total();
      const double model = vbc_under_noise({v, g, 0.0}).total;
      worst = std::max(worst, std::abs(model - oracle_total));
      worst = std::max(worst, std::abs(model - vbc_closed_form(v, g)));
    }
  EXPECT_LT(worst, 1e-10);
}

TEST(Noise, AffineInVisibility) {
  for (double g : {0.0, 0.5}) {
    const double t0 = vbc_under_noise({0.0, g, 0.0}).total;
    const double t1 = vbc_under_noise({1.0, g, 0.0}).total;
    for (double v : {0.1, 0.37, 0.8}) {
      EXPECT_NEAR(vbc_under_noise({v, g, 0.0}).total, (1 - v) * t0 + v * t1, 1e-13);
    }
  }
}

TEST(Noise, ThresholdVisibility) {
  EXPECT_NEAR(threshold_visibility(0.0), 2 * (std::sqrt(2.0) - 1), 1e-8);
  // Closed form solved for total = 7/4.
  for (double g : {0.1, 0.4}) {
    const double expected = 0.5 / (0.25 + std::sqrt(2.0) * (2 - g) / 8);
    EXPECT_NEAR(threshold_visibility(g), expected, 1e-8);
  }
  double prev = 0.0;
  for (double g = 0.0; g < 2 - std::sqrt(2.0) - 0.01; g += 0.05) {
    const double v = threshold_visibility(g);
    EXPECT_GT(v, prev);
    prev = v;
  }
  // Beyond 2 - sqrt2 even the pure state stays classical.
  EXPECT_THROW(threshold_visibility(1.0), NoCrossing);
  EXPECT_THROW(threshold_visibility(0.6), NoCrossing);
}

TEST(Noise, FitDephasingInvertsClosedForm) {
  const double v = visibility_from_fidelity(0.9884);
  const double g = fit_dephasing(v, 1.8090);
  EXPECT_NEAR(vbc_closed_form(v, g), 1.8090, 1e-9);
  EXPECT_THROW(fit_dephasing(v, 1.9), NoCrossing);
}

TEST(Jitter, ReducesCorrelationsSmoothly) {
  const double ideal = vbc_under_noise({}).total;
  const double small = vbc_under_noise({1.0, 0.0, 0.01}, 3).total;
  const double large = vbc_under_noise({1.0, 0.0, 0.1}, 3).total;
  EXPECT_LT(small, ideal);
  EXPECT_LT(large, small);
  // Averaging over N(0, s^2) angle noise shortens each Bloch vector by
  // exp(-s^2 / 2); the sampled average must land on that.
  for (double sigma : {0.05, 0.1, 0.3}) {
    oracle::Angles ang;
    ang.shrink = std::exp(-sigma * sigma / 2);
    const oracle::Terms o = oracle::terms(oracle::switch_table(oracle::werner(1.0), 0.0, ang));
    const VbcBreakdown m = vbc_under_noise({1.0, 0.0, sigma}, 3);
    EXPECT_NEAR(m.term1, o.t1, 2e-3) << sigma;
    EXPECT_NEAR(m.term2, o.t2, 2e-3) << sigma;
    EXPECT_NEAR(m.term3, o.t3, 2e-3) << sigma;
  }
  EXPECT_TRUE(check_no_signaling(noisy_table({0.9, 0.1, 0.05}, 11)).ok(1e-10));
}

TEST(Jitter, DeterministicInSeed) {
  const NoiseParams p{0.95, 0.1, 0.05};
  EXPECT_EQ(noisy_table(p, 42), noisy_table(p, 42));
  EXPECT_NE(noisy_table(p, 42), noisy_table(p, 43));
  EXPECT_THROW(noisy_table({1.0, 0.0, -0.1}), std::invalid_argument);
}
