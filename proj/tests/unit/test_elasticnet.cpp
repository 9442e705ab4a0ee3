#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_helpers.hpp"
#include "volnet/elasticnet.hpp"
#include "volnet/random.hpp"

using namespace volnet;

namespace {

struct Problem {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

Problem random_problem(Rng& rng, Eigen::Index m, Eigen::Index p, double noise = 0.5) {
  Problem pr{Eigen::MatrixXd(m, p), Eigen::VectorXd(m)};
  Eigen::VectorXd beta(p);
  for (Eigen::Index j = 0; j < p; ++j) beta(j) = rng.uniform() < 0.5 ? 0.0 : 2.0 * rng.normal();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) pr.x(i, j) = (1.0 + j) * rng.normal() + 0.3 * j;
  }
  pr.y = pr.x * beta;
  for (Eigen::Index i = 0; i < m; ++i) pr.y(i) += noise * rng.normal();
  return pr;
}

}  // namespace

TEST(SoftThreshold, Values) {
  EXPECT_EQ(soft_threshold(3, 1), 2);
  EXPECT_EQ(soft_threshold(-0.5, 1), 0);
  EXPECT_EQ(soft_threshold(-3, 1), -2);
  static_assert(soft_threshold(1.0, 1.0) == 0.0);
}

TEST(ElasticNet, ZeroLambdaIsLeastSquares) {
  Rng rng(1);
  const Problem pr = random_problem(rng, 60, 4);
  const EnetResult r = fit_elastic_net(pr.x, pr.y, {0.0, 0.5}, {.tol = 1e-12});
  const Eigen::VectorXd ols = oracle::normal_equations(pr.x, pr.y);
  EXPECT_LT((r.coef - ols).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(ElasticNet, LargeLambdaZeroesEverything) {
  Rng rng(2);
  Problem pr = random_problem(rng, 40, 5);
  const auto s = oracle::standardize(pr.x, pr.y, false);
  const double inner = (s.z.transpose() * pr.y).cwiseAbs().maxCoeff();
  const EnetResult r = fit_elastic_net(s.z, pr.y, {10.0 * inner, 1.0});
  EXPECT_TRUE((r.coef.array() == 0.0).all());
}

TEST(ElasticNet, SingleFeatureClosedForm) {
  Rng rng(3);
  const Problem pr = random_problem(rng, 35, 1);
  const auto s = oracle::standardize(pr.x, pr.y, false);
  const double m = 35.0;
  for (double lambda : {0.0, 0.05, 0.5, 2.0, 50.0}) {
    const double alpha = 0.5;
    const double zy = s.z.col(0).dot(pr.y);
    const double zz = s.z.col(0).squaredNorm();
    const double b = soft_threshold(2.0 * zy / m, lambda * alpha) / (2.0 * zz / m + lambda * (1 - alpha));
    const EnetResult r = fit_elastic_net(pr.x, pr.y, {lambda, alpha});
    EXPECT_NEAR(r.scaled_coef(0), b, 1e-12) << lambda;
    EXPECT_NEAR(r.coef(0), b / s.sd(0), 1e-12) << lambda;
  }
}

TEST(ElasticNet, MatchesProjectedGradientOracleAndKkt) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index m = 10 + static_cast<Eigen::Index>(rng.below(41));
    const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.below(5));
    const Problem pr = random_problem(rng, m, p);
    const double alpha = rng.uniform();
    const bool centre = trial % 2 == 1;
    const auto s = oracle::standardize(pr.x, pr.y, centre);
    const double lmax = 2.0 * (s.z.transpose() * s.y).cwiseAbs().maxCoeff() / m;
    const double lambda = lmax * std::pow(10.0, -3.0 * rng.uniform());
    const EnetOptions opts{.fit_intercept = centre};
    const EnetResult r = require_converged(fit_elastic_net(pr.x, pr.y, {lambda, alpha}, opts));

    const Eigen::VectorXd ref = oracle::projected_gradient_enet(s.z, s.y, lambda, alpha);
    const double f_ref = oracle::enet_objective(s.z, s.y, ref, lambda, alpha);
    const double f_cd = oracle::enet_objective(s.z, s.y, r.scaled_coef, lambda, alpha);
    EXPECT_LE(std::abs(f_cd - f_ref), 1e-6 * std::abs(f_ref)) << "trial " << trial;
    EXPECT_NEAR(r.objective, f_cd, 1e-10 * std::max(1.0, f_cd));
    EXPECT_LE(oracle::kkt_violation(s.z, s.y, r.scaled_coef, lambda, alpha), 10 * opts.tol);
  }
}

TEST(ElasticNet, ObjectiveNeverIncreasesAcrossSweeps) {
  Rng rng(5);
  const Problem pr = random_problem(rng, 50, 5);
  const EnetResult r = fit_elastic_net(pr.x, pr.y, {0.01, 0.3}, {.tol = 1e-12, .record_objective = true});
  ASSERT_GE(r.objective_trace.size(), 2u);
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
    // The Gram form of the objective carries a few ulps of cancellation.
    EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] * (1 + 1e-12));
  }
}

TEST(ElasticNet, ZeroSetGrowsWithLambdaOnOrthonormalDesign) {
  Rng rng(6);
  Eigen::MatrixXd a(40, 5);
  for (auto& v : a.reshaped()) v = rng.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                            Eigen::MatrixXd::Identity(40, 5);
  Eigen::VectorXd y = q * Eigen::VectorXd::LinSpaced(5, -2, 2);
  for (auto& v : y) v += 0.1 * rng.normal();
  const EnetOptions opts{.standardize = false};
  std::vector<bool> zero(5, false);
  for (double lambda = 1e-4; lambda < 1.0; lambda *= 1.3) {
    const EnetResult r = fit_elastic_net(q, y, {lambda, 1.0}, opts);
    for (int j = 0; j < 5; ++j) {
      if (zero[j]) {
        EXPECT_EQ(r.coef(j), 0.0) << "resurrected at " << lambda;
      }
      zero[j] = zero[j] || r.coef(j) == 0.0;
    }
  }
}

TEST(ElasticNet, LambdaMaxIsTight) {
  Rng rng(7);
  const Problem pr = random_problem(rng, 45, 4);
  const ScaledDesign d = scale_design(pr.x, pr.y, {});
  const double lmax = lambda_max(d, 0.5);
  EXPECT_TRUE((fit_elastic_net(pr.x, pr.y, {lmax, 0.5}).coef.array() == 0.0).all());
  EXPECT_FALSE((fit_elastic_net(pr.x, pr.y, {0.98 * lmax, 0.5}).coef.array() == 0.0).all());
}

TEST(ElasticNet, GridShape) {
  Rng rng(8);
  const Problem pr = random_problem(rng, 45, 3);
  const ScaledDesign d = scale_design(pr.x, pr.y, {});
  const auto grid = lambda_grid(d, 0.5);
  ASSERT_EQ(grid.size(), 60u);
  EXPECT_DOUBLE_EQ(grid.front(), lambda_max(d, 0.5));
  EXPECT_NEAR(grid.back() / grid.front(), 1e-4, 1e-12);
  for (std::size_t i = 2; i < grid.size(); ++i) {
    EXPECT_NEAR(grid[i] / grid[i - 1], grid[1] / grid[0], 1e-9);
  }
}

TEST(ElasticNet, InterceptAbsorbsLevel) {
  Rng rng(9);
  Problem pr = random_problem(rng, 80, 3, 0.01);
  pr.y.array() += 5.0;
  const EnetResult r = fit_elastic_net(pr.x, pr.y, {1e-6, 0.5}, {.tol = 1e-12, .fit_intercept = true});
  Eigen::MatrixXd design(80, 4);
  design << Eigen::VectorXd::Ones(80), pr.x;
  const Eigen::VectorXd ols = oracle::normal_equations(design, pr.y);
  EXPECT_NEAR(r.intercept, ols(0), 1e-4);
  EXPECT_LT((r.coef - ols.tail(3)).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(ElasticNet, ErrorsAndConvergenceFlag) {
  Rng rng(10);
  Problem pr = random_problem(rng, 30, 3);
  EXPECT_VOLNET_ERROR(fit_elastic_net(pr.x, pr.y, {-1.0, 0.5}), ErrorCode::kInvalidArgument);
  EXPECT_VOLNET_ERROR(fit_elastic_net(pr.x, pr.y, {1.0, 1.5}), ErrorCode::kInvalidArgument);
  const EnetResult capped = fit_elastic_net(pr.x, pr.y, {1e-6, 0.5}, {.tol = 1e-15, .max_iter = 1});
  EXPECT_FALSE(capped.converged);
  EXPECT_VOLNET_ERROR(require_converged(capped), ErrorCode::kDidNotConverge);
  pr.x(3, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_VOLNET_ERROR(fit_elastic_net(pr.x, pr.y, {1.0, 0.5}), ErrorCode::kNonFiniteInput);
}

TEST(CrossValidation, SingleLambdaIsSelected) {
  Rng rng(11);
  const Problem pr = random_problem(rng, 200, 4);
  const CvResult cv = cross_validate_lambda(pr.x, pr.y, {0.123}, 0.5, 5);
  EXPECT_EQ(cv.selected_lambda, 0.123);
}

TEST(CrossValidation, PureNoiseSelectsEmptyModel) {
  Rng rng(12);
  Eigen::MatrixXd x(500, 15);
  Eigen::VectorXd y(500);
  for (auto& v : x.reshaped()) v = rng.normal();
  for (auto& v : y) v = rng.normal();
  const ScaledDesign d = scale_design(x, y, {});
  const CvResult cv = cross_validate_lambda(x, y, lambda_grid(d, 0.5), 0.5, 5);
  const EnetResult r = fit_elastic_net(x, y, {cv.selected_lambda, 0.5});
  const auto zeros = (r.coef.array() == 0.0).count();
  EXPECT_GE(static_cast<double>(zeros) / 15.0, 0.95);
}

TEST(CrossValidation, OneStandardErrorRulePicksLargestEligible) {
  Rng rng(13);
  const Problem pr = random_problem(rng, 300, 5, 1.0);
  const ScaledDesign d = scale_design(pr.x, pr.y, {});
  const CvResult cv = cross_validate_lambda(pr.x, pr.y, lambda_grid(d, 0.5, 30), 0.5, 5);
  const auto best = std::min_element(cv.mean_val_mse.begin(), cv.mean_val_mse.end()) - cv.mean_val_mse.begin();
  const double limit = cv.mean_val_mse[best] + cv.se_val_mse[best];
  double expected = 0.0;
  for (std::size_t i = 0; i < cv.lambda_grid.size(); ++i) {
    if (cv.mean_val_mse[i] <= limit) expected = std::max(expected, cv.lambda_grid[i]);
  }
  EXPECT_EQ(cv.selected_lambda, expected);
}

TEST(CrossValidation, FoldsRunForward) {
  const auto blocks = sequential_blocks(103, 5);
  ASSERT_EQ(blocks.size(), 5u);
  EXPECT_EQ(blocks.front().first, 0);
  EXPECT_EQ(blocks.back().second, 103);
  for (std::size_t k = 1; k < blocks.size(); ++k) {
    EXPECT_EQ(blocks[k].first, blocks[k - 1].second);
    // Training data for fold k is every row before blocks[k].first.
    EXPECT_GT(blocks[k].first, blocks[k - 1].first);
  }
}

TEST(CrossValidation, Errors) {
  Rng rng(14);
  const Problem pr = random_problem(rng, 50, 3);
  EXPECT_VOLNET_ERROR(cross_validate_lambda(pr.x, pr.y, {}, 0.5, 5), ErrorCode::kGridEmpty);
  EXPECT_VOLNET_ERROR(cross_validate_lambda(pr.x.topRows(4), pr.y.head(4), {0.1}, 0.5, 5),
                      ErrorCode::kTooFewObservations);
}

TEST(CrossValidation, WarnsOnSmallSamples) {
  Rng rng(15);
  const Problem pr = random_problem(rng, 30, 5);
  const CvResult cv = cross_validate_lambda(pr.x, pr.y, {0.1, 0.01}, 0.5, 5);
  EXPECT_FALSE(cv.warnings.empty());
}
