#include "volnet/elasticnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "volnet/error.hpp"
#include "volnet/parallel.hpp"

namespace volnet {

namespace {

// Sufficient statistics of the scaled problem; one coordinate update costs
// O(P) instead of O(M).
struct Gram {
  Eigen::MatrixXd zz;  // Z'Z / M
  Eigen::VectorXd zy;  // Z'y / M
  double yy = 0.0;     // y'y / M
};

Gram make_gram(const ScaledDesign& d) {
  const double inv_m = 1.0 / static_cast<double>(d.z.rows());
  Gram g;
  g.zz = (d.z.transpose() * d.z) * inv_m;
  g.zy = (d.z.transpose() * d.y) * inv_m;
  g.yy = d.y.squaredNorm() * inv_m;
  return g;
}

double penalty(const Eigen::VectorXd& b, const PenaltySpec& pen) {
  return pen.lambda * (pen.alpha * b.lpNorm<1>() + 0.5 * (1.0 - pen.alpha) * b.squaredNorm());
}

double gram_objective(const Gram& g, const Eigen::VectorXd& b, const PenaltySpec& pen) {
  return g.yy - 2.0 * b.dot(g.zy) + b.dot(g.zz * b) + penalty(b, pen);
}

struct Solve {
  Eigen::VectorXd b;
  int sweeps = 0;
  bool converged = false;
};

Solve coordinate_descent(const Gram& g, const PenaltySpec& pen, const EnetOptions& opts,
                         Eigen::VectorXd b, std::vector<double>* trace) {
  const Eigen::Index p = g.zy.size();
  Eigen::VectorXd gb = g.zz * b;
  const double l1 = 0.5 * pen.lambda * pen.alpha;
  const double l2 = 0.5 * pen.lambda * (1.0 - pen.alpha);

  Solve out;
  for (out.sweeps = 1; out.sweeps <= opts.max_iter; ++out.sweeps) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double diag = g.zz(j, j);
      const double denom = diag + l2;
      double next = 0.0;
      if (denom > 0.0) {
        const double rho = g.zy(j) - gb(j) + diag * b(j);
        next = soft_threshold(rho, l1) / denom;
      }
      const double delta = next - b(j);
      if (delta != 0.0) {
        gb += g.zz.col(j) * delta;
        b(j) = next;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (trace != nullptr) trace->push_back(gram_objective(g, b, pen));
    if (max_change < opts.tol) {
      out.converged = true;
      break;
    }
  }
  out.sweeps = std::min(out.sweeps, opts.max_iter);
  out.b = std::move(b);
  return out;
}

void check_finite(const Eigen::Ref<const Eigen::MatrixXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (!x.allFinite() || !y.allFinite()) {
    throw Error(ErrorCode::kNonFiniteInput, "ElasticNet input contains NaN or Inf");
  }
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "ElasticNet design and target lengths differ");
  }
  if (x.rows() < 2) throw Error(ErrorCode::kTooFewObservations, "ElasticNet needs >= 2 rows");
}

EnetResult unscale(const ScaledDesign& d, Solve solve) {
  EnetResult r;
  r.scaled_coef = std::move(solve.b);
  r.coef = r.scaled_coef.cwiseQuotient(d.scale);
  r.intercept = d.y_mean - r.coef.dot(d.x_mean);
  r.sweeps = solve.sweeps;
  r.converged = solve.converged;
  return r;
}

}  // namespace

void validate(const PenaltySpec& pen) {
  if (!(pen.lambda >= 0.0) || !std::isfinite(pen.lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be finite and >= 0");
  }
  if (!(pen.alpha >= 0.0 && pen.alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  }
}

ScaledDesign scale_design(const Eigen::Ref<const Eigen::MatrixXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y, const EnetOptions& opts) {
  const Eigen::Index m = x.rows();
  const Eigen::Index p = x.cols();
  ScaledDesign d;
  d.x_mean = Eigen::VectorXd::Zero(p);
  d.scale = Eigen::VectorXd::Ones(p);
  if (opts.fit_intercept) {
    d.x_mean = x.colwise().mean().transpose();
    d.y_mean = y.mean();
  }
  if (opts.standardize && m > 1) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double mean = x.col(j).mean();
      const double var = (x.col(j).array() - mean).square().sum() / static_cast<double>(m - 1);
      if (var > 0.0) d.scale(j) = std::sqrt(var);
    }
  }
  d.z = (x.rowwise() - d.x_mean.transpose()).array().rowwise() / d.scale.transpose().array();
  d.y = y.array() - d.y_mean;
  return d;
}

double enet_objective(const ScaledDesign& design, const Eigen::VectorXd& b,
                      const PenaltySpec& pen) {
  const Eigen::VectorXd r = design.y - design.z * b;
  return r.squaredNorm() / static_cast<double>(design.z.rows()) + penalty(b, pen);
}

EnetResult fit_elastic_net(const Eigen::Ref<const Eigen::MatrixXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y, const PenaltySpec& pen,
                           const EnetOptions& opts) {
  validate(pen);
  check_finite(x, y);
  const ScaledDesign d = scale_design(x, y, opts);
  const Gram g = make_gram(d);
  std::vector<double> trace;
  Solve solve = coordinate_descent(g, pen, opts, Eigen::VectorXd::Zero(x.cols()),
                                   opts.record_objective ? &trace : nullptr);
  EnetResult r = unscale(d, std::move(solve));
  r.objective = enet_objective(d, r.scaled_coef, pen);
  r.objective_trace = std::move(trace);
  return r;
}

const EnetResult& require_converged(const EnetResult& result) {
  if (!result.converged) {
    throw Error(ErrorCode::kDidNotConverge,
                "coordinate descent stopped after " + std::to_string(result.sweeps) + " sweeps");
  }
  return result;
}

double lambda_max(const ScaledDesign& design, double alpha) {
  const double inv_m = 1.0 / static_cast<double>(design.z.rows());
  const double max_corr = (design.z.transpose() * design.y).cwiseAbs().maxCoeff() * inv_m;
  return 2.0 * max_corr / std::max(alpha, 1e-3);
}

std::vector<double> lambda_grid(const ScaledDesign& design, double alpha, int points,
                                double ratio) {
  if (points < 1) throw Error(ErrorCode::kGridEmpty, "lambda grid needs at least one point");
  double top = design.z.cols() > 0 ? lambda_max(design, alpha) : 0.0;
  if (!(top > 0.0)) top = 1.0;
  std::vector<double> grid(static_cast<std::size_t>(points));
  if (points == 1) {
    grid[0] = top;
    return grid;
  }
  const double log_top = std::log(top);
  const double log_step = std::log(ratio) / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(log_top + log_step * i);
  }
  grid.front() = top;
  return grid;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> sequential_blocks(Eigen::Index rows,
                                                                     int n_folds) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
  for (int k = 0; k < n_folds; ++k) {
    blocks.emplace_back(rows * k / n_folds, rows * (k + 1) / n_folds);
  }
  return blocks;
}

CvResult cross_validate_lambda(const Eigen::Ref<const Eigen::MatrixXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y, std::vector<double> grid,
                               double alpha, int n_folds, const EnetOptions& opts) {
  if (grid.empty()) throw Error(ErrorCode::kGridEmpty, "lambda grid is empty");
  validate(PenaltySpec{0.0, alpha});
  for (double l : grid) validate(PenaltySpec{l, alpha});
  check_finite(x, y);
  if (n_folds < 2) throw Error(ErrorCode::kInvalidArgument, "CV needs at least 2 folds");
  const Eigen::Index m = x.rows();
  if (m < 2 * static_cast<Eigen::Index>(n_folds)) {
    throw Error(ErrorCode::kTooFewObservations,
                "CV with " + std::to_string(n_folds) + " folds needs >= " +
                    std::to_string(2 * n_folds) + " rows");
  }

  CvResult cv;
  cv.lambda_grid = grid;
  cv.fold_boundaries = sequential_blocks(m, n_folds);
  if (m < static_cast<Eigen::Index>(n_folds) * (x.cols() + 5)) {
    cv.warnings.push_back("fewer than n_folds*(P+5) observations for cross-validation");
  }

  // Warm-started path per fold, traversed from the largest lambda down.
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });

  const std::size_t evals = static_cast<std::size_t>(n_folds - 1);
  std::vector<std::vector<double>> mse(evals, std::vector<double>(grid.size()));
  parallel_for(evals, [&](std::size_t f) {
    const auto [val_begin, val_end] = cv.fold_boundaries[f + 1];
    const auto train_x = x.topRows(val_begin);
    const auto train_y = y.head(val_begin);
    const auto val_x = x.middleRows(val_begin, val_end - val_begin);
    const auto val_y = y.segment(val_begin, val_end - val_begin);

    const ScaledDesign d = scale_design(train_x, train_y, opts);
    const Gram g = make_gram(d);
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(x.cols());
    for (std::size_t idx : order) {
      Solve solve = coordinate_descent(g, PenaltySpec{grid[idx], alpha}, opts, warm, nullptr);
      warm = solve.b;
      const EnetResult r = unscale(d, std::move(solve));
      const Eigen::VectorXd resid = (val_y - val_x * r.coef).array() - r.intercept;
      mse[f][idx] = resid.squaredNorm() / static_cast<double>(resid.size());
    }
  });

  cv.mean_val_mse.assign(grid.size(), 0.0);
  cv.se_val_mse.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double mean = 0.0;
    for (std::size_t f = 0; f < evals; ++f) mean += mse[f][i];
    mean /= static_cast<double>(evals);
    double ss = 0.0;
    for (std::size_t f = 0; f < evals; ++f) ss += (mse[f][i] - mean) * (mse[f][i] - mean);
    cv.mean_val_mse[i] = mean;
    cv.se_val_mse[i] =
        evals > 1 ? std::sqrt(ss / static_cast<double>(evals - 1) / static_cast<double>(evals)) : 0.0;
  }

  const auto best = static_cast<std::size_t>(
      std::min_element(cv.mean_val_mse.begin(), cv.mean_val_mse.end()) - cv.mean_val_mse.begin());
  const double threshold = cv.mean_val_mse[best] + cv.se_val_mse[best];
  cv.selected_lambda = grid[best];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (cv.mean_val_mse[i] <= threshold && grid[i] > cv.selected_lambda) {
      cv.selected_lambda = grid[i];
    }
  }
  return cv;
}

}  // namespace volnet
