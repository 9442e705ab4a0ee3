#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace volnet {

/// Penalty weights of the ElasticNet objective
///
///   (1/M) * ||y - Z b||^2 + lambda * (alpha * ||b||_1 + (1 - alpha)/2 * ||b||_2^2)
///
/// where Z is the column-scaled design and b the coefficients on that scale.
/// The residual sum of squares is averaged over the M rows so that lambda
/// does not depend on the sample length.
struct PenaltySpec {
  double lambda = 0.0;
  double alpha = 0.5;
};

void validate(const PenaltySpec& pen);

struct EnetOptions {
  double tol = 1e-7;        // max absolute change of a scaled coefficient per sweep
  int max_iter = 10000;     // sweeps
  bool standardize = true;  // scale columns to unit sample variance
  bool fit_intercept = false;
  bool record_objective = false;
};

/// Scaled problem the coordinate descent actually solves.
struct ScaledDesign {
  Eigen::MatrixXd z;       // (X - x_mean) / scale
  Eigen::VectorXd y;       // y - y_mean
  Eigen::VectorXd scale;   // per-column divisor (1 where the column has no spread)
  Eigen::VectorXd x_mean;  // zeros unless fit_intercept
  double y_mean = 0.0;     // zero unless fit_intercept
};

[[nodiscard]] ScaledDesign scale_design(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                        const Eigen::Ref<const Eigen::VectorXd>& y,
                                        const EnetOptions& opts);

/// Objective value on the scaled problem for scaled coefficients `b`.
[[nodiscard]] double enet_objective(const ScaledDesign& design, const Eigen::VectorXd& b,
                                    const PenaltySpec& pen);

struct EnetResult {
  Eigen::VectorXd coef;         // original feature scale
  Eigen::VectorXd scaled_coef;  // scale used by the solver
  double intercept = 0.0;       // zero unless fit_intercept
  double objective = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // one entry per sweep when requested
};

/// sign(z) * max(|z| - t, 0).
[[nodiscard]] constexpr double soft_threshold(double z, double t) noexcept {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

/// Cyclic coordinate descent. A result with `converged == false` carries the
/// last iterate after `max_iter` sweeps; see require_converged(). Throws
/// NonFiniteInput on NaN/Inf data and InvalidArgument on a bad penalty.
[[nodiscard]] EnetResult fit_elastic_net(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                         const Eigen::Ref<const Eigen::VectorXd>& y,
                                         const PenaltySpec& pen, const EnetOptions& opts = {});

/// Throws DidNotConverge when the result hit the sweep limit.
const EnetResult& require_converged(const EnetResult& result);

/// Smallest lambda at which every scaled coefficient is exactly zero. Alpha is
/// floored at 1e-3 so the value stays finite for ridge-like penalties.
[[nodiscard]] double lambda_max(const ScaledDesign& design, double alpha);

/// `points` log-spaced values from lambda_max down to lambda_max * ratio,
/// descending. Falls back to a grid ending at `ratio` when lambda_max is 0.
[[nodiscard]] std::vector<double> lambda_grid(const ScaledDesign& design, double alpha,
                                              int points = 60, double ratio = 1e-4);

struct CvResult {
  std::vector<double> lambda_grid;
  std::vector<double> mean_val_mse;
  std::vector<double> se_val_mse;
  double selected_lambda = 0.0;
  /// Row ranges [begin, end) of the contiguous blocks; block k >= 1 is
  /// validated with blocks 0..k-1 as training data.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> fold_boundaries;
  std::vector<std::string> warnings;
};

/// Forward-chaining time-series CV. The sample is cut into `n_folds`
/// contiguous blocks; each block after the first is scored with a model fit
/// on all earlier blocks. Among grid values whose mean validation MSE is within
/// one standard error of the minimum, the largest is selected.
/// Throws GridEmpty or TooFewObservations.
[[nodiscard]] CvResult cross_validate_lambda(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                             const Eigen::Ref<const Eigen::VectorXd>& y,
                                             std::vector<double> grid, double alpha, int n_folds,
                                             const EnetOptions& opts = {});

/// Block boundaries used by cross_validate_lambda.
[[nodiscard]] std::vector<std::pair<Eigen::Index, Eigen::Index>> sequential_blocks(Eigen::Index rows,
                                                                                   int n_folds);

}  // namespace volnet
