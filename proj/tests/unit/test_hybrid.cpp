#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_helpers.hpp"
#include "volnet/hybrid.hpp"
#include "volnet/random.hpp"
#include "volnet/synthetic.hpp"

using namespace volnet;

namespace {

SyntheticSpec independent_spec(std::size_t k, Eigen::Index n, std::uint64_t seed) {
  SyntheticSpec s;
  for (std::size_t i = 0; i < k; ++i) s.assets.push_back(std::string(1, static_cast<char>('A' + i)));
  s.length = n;
  for (std::size_t i = 0; i < k; ++i) s.own.push_back({0.05, 0.4, 0.3, 0.2});
  s.innovation_cov = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) * 1e-4;
  s.seed = seed;
  return s;
}

// Two-asset model with hand-set coefficients.
HybridModel toy_model() {
  HybridModel m;
  m.assets = {"X", "Y"};
  m.own = {{0.02, 0.5, 0.2, 0.1}, {0.01, 0.3, 0.3, 0.2}};
  m.cross = {Eigen::Vector3d(0.05, 0.0, -0.02), Eigen::Vector3d(0.1, 0.04, 0.0)};
  m.cross_intercept = {0.001, -0.002};
  m.selected_lambda = {0.0, 0.0};
  m.residual_cov = Eigen::Matrix2d::Identity();
  return m;
}

}  // namespace

TEST(Hybrid, CrossIndexOrdering) {
  // Target 2 of 4: sources 0, 1, 3 in order, each daily/weekly/monthly.
  EXPECT_EQ(HybridModel::cross_index(2, 0, Horizon::kDaily), 0);
  EXPECT_EQ(HybridModel::cross_index(2, 1, Horizon::kMonthly), 5);
  EXPECT_EQ(HybridModel::cross_index(2, 3, Horizon::kWeekly), 7);
  const HybridModel m = toy_model();
  EXPECT_VOLNET_ERROR(m.cross_coef(0, 0, Horizon::kDaily), ErrorCode::kInvalidArgument);
  EXPECT_EQ(m.cross_coef(0, 1, Horizon::kMonthly), -0.02);
}

TEST(Hybrid, HorizonNames) {
  for (auto h : {Horizon::kDaily, Horizon::kWeekly, Horizon::kMonthly}) {
    EXPECT_EQ(parse_horizon(horizon_name(h)), h);
  }
  EXPECT_VOLNET_ERROR(parse_horizon("hourly"), ErrorCode::kInvalidArgument);
}

TEST(Hybrid, CrossDesignDropsOwnColumns) {
  Eigen::MatrixXd reg(2, 9);
  for (Eigen::Index c = 0; c < 9; ++c) reg.col(c).setConstant(static_cast<double>(c));
  const Eigen::MatrixXd x = cross_design(reg, 1);
  ASSERT_EQ(x.cols(), 6);
  EXPECT_EQ(x(0, 2), 2.0);
  EXPECT_EQ(x(0, 3), 6.0);
}

TEST(Hybrid, OwnStepEqualsUnivariateHar) {
  const RvPanel rv = generate_synthetic_panel(independent_spec(3, 800, 1));
  const HybridFit fit = fit_hybrid(rv);
  for (Eigen::Index k = 0; k < 3; ++k) {
    const HarFit har = fit_har_ols(build_har_features(rv.values.col(k)));
    EXPECT_EQ(fit.model.own[k], har.coef);
  }
}

TEST(Hybrid, OtherAssetsNeverMoveOwnCoefficients) {
  RvPanel rv = generate_synthetic_panel(independent_spec(3, 600, 2));
  const HybridFit before = fit_hybrid(rv);
  Rng rng(3);
  for (Eigen::Index t = 0; t < rv.values.rows(); ++t) rv.values(t, 2) *= 1.0 + 0.1 * rng.uniform();
  const HybridFit after = fit_hybrid(rv);
  EXPECT_EQ(before.model.own[0], after.model.own[0]);
  EXPECT_EQ(before.model.own[1], after.model.own[1]);
}

TEST(Hybrid, ReconstructionAndCovariance) {
  const RvPanel rv = generate_synthetic_panel(independent_spec(3, 700, 4));
  const HybridFit fit = fit_hybrid(rv);
  const Eigen::MatrixXd resid = in_sample_residuals(fit.model, rv);
  EXPECT_LT((resid - fit.residuals).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd cov = residual_covariance(fit.model, rv);
  EXPECT_LT((cov - fit.model.residual_cov).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((cov - cov.transpose()).cwiseAbs().maxCoeff(), 1e-18);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov).eigenvalues().minCoeff(), -1e-15);
  for (Eigen::Index k = 0; k < 3; ++k) EXPECT_GE(cov(k, k), 0.0);
}

TEST(Hybrid, ZeroCrossPanelIsMostlyEmpty) {
  const RvPanel rv = generate_synthetic_panel(independent_spec(4, 3000, 5));
  const HybridFit fit = fit_hybrid(rv);
  std::size_t zeros = 0;
  std::size_t total = 0;
  for (const auto& c : fit.model.cross) {
    zeros += static_cast<std::size_t>((c.array() == 0.0).count());
    total += static_cast<std::size_t>(c.size());
  }
  EXPECT_GE(static_cast<double>(zeros) / static_cast<double>(total), 0.9);
}

TEST(Hybrid, PlantedEdgesRecovered) {
  SyntheticSpec s = independent_spec(4, 5000, 6);
  for (auto& o : s.own) o = {0.03, 0.4, 0.35, 0.22};
  s.edges = {{0, 2, Horizon::kDaily, 0.2}, {1, 3, Horizon::kDaily, -0.15}};
  s.own[2].intercept -= 0.2;
  s.own[3].intercept += 0.15;
  const HybridFit fit = fit_hybrid(generate_synthetic_panel(s));
  EXPECT_GT(fit.model.cross_coef(2, 0, Horizon::kDaily), 0.0);
  EXPECT_LT(fit.model.cross_coef(3, 1, Horizon::kDaily), 0.0);
}

TEST(Hybrid, FixedLambdaMatchesCvFit) {
  const RvPanel rv = generate_synthetic_panel(independent_spec(3, 600, 7));
  const HybridFit cv = fit_hybrid(rv);
  const HybridFit fixed = fit_hybrid_fixed(rv, {}, cv.model.selected_lambda);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(cv.model.cross[i], fixed.model.cross[i]);
  EXPECT_TRUE(fixed.cv.empty());
  EXPECT_VOLNET_ERROR(fit_hybrid_fixed(rv, {}, {0.1}), ErrorCode::kLengthMismatch);
}

TEST(Hybrid, SegmentsKeepWindowsInside) {
  const RvPanel rv = generate_synthetic_panel(independent_spec(2, 300, 8));
  const std::vector<double> lambdas{0.01, 0.01};
  const HybridFit whole = fit_hybrid_fixed(rv, {}, lambdas);
  const std::vector<Eigen::Index> one{0};
  const HybridFit same = fit_hybrid_fixed(rv, {}, lambdas, one);
  EXPECT_EQ(whole.residuals, same.residuals);
  const std::vector<Eigen::Index> three{0, 100, 200};
  const HybridFit split = fit_hybrid_fixed(rv, {}, lambdas, three);
  EXPECT_EQ(split.residuals.rows(), 3 * (100 - 22));
}

TEST(Hybrid, NonFinitePanelRejected) {
  RvPanel rv = generate_synthetic_panel(independent_spec(2, 200, 9));
  rv.values(50, 1) = std::nan("");
  EXPECT_VOLNET_ERROR(fit_hybrid(rv), ErrorCode::kNonFiniteInput);
}

TEST(Predict, ToyModelByHand) {
  const HybridModel m = toy_model();
  Eigen::MatrixXd hist(22, 2);
  for (Eigen::Index t = 0; t < 22; ++t) {
    hist(t, 0) = 0.2 + 0.01 * t;
    hist(t, 1) = 0.5 - 0.005 * t;
  }
  // X: daily 0.41, weekly mean of 0.37..0.41 = 0.39, monthly mean 0.305.
  // Y: daily 0.395, weekly 0.405, monthly 0.4475.
  const double x = 0.02 + 0.5 * 0.41 + 0.2 * 0.39 + 0.1 * 0.305 + 0.001 + 0.05 * 0.395 - 0.02 * 0.4475;
  const double y = 0.01 + 0.3 * 0.395 + 0.3 * 0.405 + 0.2 * 0.4475 - 0.002 + 0.1 * 0.41 + 0.04 * 0.39;
  const Eigen::VectorXd p = predict_one_step(m, hist);
  EXPECT_NEAR(p(0), x, 1e-14);
  EXPECT_NEAR(p(1), y, 1e-14);
}

TEST(Predict, FixedPointAndZeroCross) {
  HybridModel m = toy_model();
  m.own = {{0.0, 0.5, 0.3, 0.2}, {0.0, 0.6, 0.3, 0.1}};
  m.cross = {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
  m.cross_intercept = {0.0, 0.0};
  const Eigen::MatrixXd hist = Eigen::MatrixXd::Constant(30, 2, 0.37);
  const Eigen::VectorXd p = predict_one_step(m, hist);
  EXPECT_NEAR(p(0), 0.37, 1e-15);
  EXPECT_NEAR(p(1), 0.37, 1e-15);
}

TEST(Predict, Errors) {
  const HybridModel m = toy_model();
  EXPECT_VOLNET_ERROR(predict_one_step(m, Eigen::MatrixXd::Ones(21, 2)), ErrorCode::kHistoryTooShort);
  EXPECT_VOLNET_ERROR(predict_one_step(m, Eigen::MatrixXd::Ones(22, 3)), ErrorCode::kLengthMismatch);
}

TEST(Network, EdgesAreTheNonzeros) {
  const HybridModel m = toy_model();
  const NetworkSummary net = spillover_network(m);
  ASSERT_EQ(net.edges.size(), 4u);
  EXPECT_EQ(net.edges[0].source, "Y");
  EXPECT_EQ(net.edges[0].target, "X");
  EXPECT_NEAR(net.sparsity, 2.0 / 6.0, 1e-15);
  EXPECT_NEAR(net.out_strength[1], 0.07, 1e-15);
  EXPECT_NEAR(net.in_strength[1], 0.14, 1e-15);
}

TEST(Network, EmptyCrossTensor) {
  HybridModel m = toy_model();
  m.cross = {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
  const NetworkSummary net = spillover_network(m);
  EXPECT_TRUE(net.edges.empty());
  EXPECT_EQ(net.sparsity, 1.0);
}

TEST(Covariance, PerfectFitIsZero) {
  const Eigen::MatrixXd same = Eigen::MatrixXd::Constant(10, 3, 0.0);
  EXPECT_EQ(sample_covariance(same), Eigen::MatrixXd::Zero(3, 3));
}
