#include <cmath>

#include <gtest/gtest.h>

#include "test_helpers.hpp"
#include "volnet/hybrid.hpp"
#include "volnet/synthetic.hpp"

using namespace volnet;

namespace {

SyntheticSpec correlated_pair(double rho, Eigen::Index n) {
  SyntheticSpec s;
  s.assets = {"A", "B"};
  s.length = n;
  s.own = {{0.1, 0.4, 0.3, 0.2}, {0.1, 0.4, 0.3, 0.2}};
  s.innovation_cov.resize(2, 2);
  s.innovation_cov << 1e-4, rho * 1e-4, rho * 1e-4, 1e-4;
  s.seed = 8;
  return s;
}

}  // namespace

TEST(Synthetic, DeterministicInSeed) {
  const SyntheticSpec s = correlated_pair(0.3, 400);
  const RvPanel a = generate_synthetic_panel(s);
  const RvPanel b = generate_synthetic_panel(s);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.dates, b.dates);
  ASSERT_EQ(a.rows(), 400u);
  for (const Date& d : a.dates) EXPECT_FALSE(d.is_weekend());
  SyntheticSpec other = s;
  other.seed = 9;
  EXPECT_NE(a.values, generate_synthetic_panel(other).values);
}

TEST(Synthetic, RefusesExplosiveSpecs) {
  SyntheticSpec s = correlated_pair(0.0, 100);
  s.own[0] = {0.1, 0.6, 0.4, 0.2};
  EXPECT_VOLNET_ERROR(generate_synthetic_panel(s), ErrorCode::kExplosiveSpec);
  // Each own persistence is 0.9 but the coupled system is not stable.
  s = correlated_pair(0.0, 100);
  s.edges = {{0, 1, Horizon::kDaily, 0.5}, {1, 0, Horizon::kDaily, 0.5}};
  EXPECT_VOLNET_ERROR(generate_synthetic_panel(s), ErrorCode::kExplosiveSpec);
}

TEST(Synthetic, SpectralRadiusOfSimpleModels) {
  SyntheticSpec s;
  s.assets = {"A"};
  s.length = 10;
  s.own = {{0.2, 0.5, 0.0, 0.0}};
  s.innovation_cov = Eigen::MatrixXd::Identity(1, 1);
  const HybridModel m = true_model(s);
  EXPECT_NEAR(spectral_radius(m), 0.5, 1e-12);
  EXPECT_NEAR(unconditional_mean(m)(0), 0.4, 1e-12);

  const HybridModel pair = true_model(correlated_pair(0.0, 10));
  EXPECT_LT(spectral_radius(pair), 1.0);
  EXPECT_NEAR(unconditional_mean(pair)(1), 1.0, 1e-12);
}

TEST(Synthetic, TrueModelCarriesEdges) {
  SyntheticSpec s = correlated_pair(0.0, 10);
  s.edges = {{1, 0, Horizon::kWeekly, -0.07}};
  const HybridModel m = true_model(s);
  EXPECT_EQ(m.cross_coef(0, 1, Horizon::kWeekly), -0.07);
  EXPECT_EQ(m.cross_coef(1, 0, Horizon::kWeekly), 0.0);
  EXPECT_EQ(m.residual_cov, s.innovation_cov);
}

TEST(Synthetic, InnovationCorrelationIsReproduced) {
  for (double rho : {-0.4, 0.0, 0.6}) {
    const SyntheticSpec s = correlated_pair(rho, 5000);
    const RvPanel p = generate_synthetic_panel(s);
    const Eigen::MatrixXd e = in_sample_residuals(true_model(s), p);
    const Eigen::MatrixXd c = sample_covariance(e);
    const double r = c(0, 1) / std::sqrt(c(0, 0) * c(1, 1));
    EXPECT_NEAR(r, rho, 0.05) << "rho=" << rho;
    EXPECT_NEAR(c(0, 0), 1e-4, 1e-5);
  }
}
