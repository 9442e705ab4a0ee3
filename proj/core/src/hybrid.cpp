#include "volnet/hybrid.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <span>

#include "volnet/error.hpp"
#include "volnet/parallel.hpp"

namespace volnet {

namespace {

constexpr Eigen::Index kHorizons = 3;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

using LambdaPicker =
    std::function<double(std::size_t asset, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         CvResult* cv)>;

/// Regressor rows whose whole lag window lies inside the segment of its
/// target. Segments start at the given row offsets of the panel.
std::vector<Eigen::Index> rows_within_segments(Eigen::Index n, Eigen::Index lead,
                                               std::span<const Eigen::Index> starts) {
  std::vector<Eigen::Index> keep;
  std::size_t seg = 0;
  for (Eigen::Index t = lead; t < n; ++t) {
    while (seg + 1 < starts.size() && starts[seg + 1] <= t) ++seg;
    if (starts.empty() || t - lead >= starts[seg]) keep.push_back(t - lead);
  }
  return keep;
}

HybridFit fit_impl(const RvPanel& rv, const HybridConfig& cfg, bool run_cv,
                   const LambdaPicker& pick_lambda,
                   std::span<const Eigen::Index> segment_starts = {}) {
  validate(cfg.lags);
  const std::size_t K = rv.cols();
  if (K == 0) throw Error(ErrorCode::kInvalidArgument, "RV panel has no assets");
  if (!rv.values.allFinite()) throw Error(ErrorCode::kNonFiniteInput, "RV panel has NaN or Inf");

  Eigen::MatrixXd regressors = har_regressor_panel(rv.values, cfg.lags);
  const Eigen::Index lead = cfg.lags.span();
  Eigen::MatrixXd targets = rv.values.bottomRows(regressors.rows());
  std::vector<Date> stamps(rv.dates.begin() + lead, rv.dates.end());
  if (!segment_starts.empty()) {
    const auto keep = rows_within_segments(idx(rv.rows()), lead, segment_starts);
    regressors = regressors(keep, Eigen::all).eval();
    targets = targets(keep, Eigen::all).eval();
    std::vector<Date> kept;
    kept.reserve(keep.size());
    for (const auto r : keep) kept.push_back(stamps[static_cast<std::size_t>(r)]);
    stamps = std::move(kept);
  }
  const Eigen::Index m = regressors.rows();

  HybridFit fit;
  HybridModel& model = fit.model;
  model.assets = rv.assets;
  model.lags = cfg.lags;
  model.alpha = cfg.alpha;
  model.own.resize(K);
  model.cross.resize(K);
  model.cross_intercept.assign(K, 0.0);
  model.selected_lambda.assign(K, 0.0);
  fit.residuals.resize(m, idx(K));
  if (run_cv) fit.cv.resize(K);
  std::vector<std::vector<std::string>> warnings(K);

  parallel_for(K, [&](std::size_t i) {
    // Step 1: univariate HAR by OLS.
    HarFeatures features;
    features.dates = stamps;
    features.target = targets.col(idx(i));
    features.regressors = regressors.middleCols(idx(i) * kHorizons, kHorizons);
    const HarFit own = fit_har_ols(features);
    model.own[i] = own.coef;
    if (own.nonstationary_warning) {
      warnings[i].push_back(rv.assets[i] + ": HAR persistence >= 1");
    }

    // Step 2: ElasticNet of the OLS residuals on the other assets' regressors.
    const Eigen::MatrixXd x = cross_design(regressors, i);
    if (x.cols() == 0) {
      model.cross[i] = Eigen::VectorXd::Zero(0);
      fit.residuals.col(idx(i)) = own.residuals;
      return;
    }
    const double lambda = pick_lambda(i, x, own.residuals, run_cv ? &fit.cv[i] : nullptr);
    const EnetResult enet = fit_elastic_net(x, own.residuals, {lambda, cfg.alpha}, cfg.enet);
    if (!enet.converged) {
      warnings[i].push_back(rv.assets[i] + ": ElasticNet hit the sweep limit");
    }
    model.cross[i] = enet.coef;
    model.cross_intercept[i] = enet.intercept;
    model.selected_lambda[i] = lambda;
    fit.residuals.col(idx(i)) = (own.residuals - x * enet.coef).array() - enet.intercept;
  });

  for (auto& w : warnings) fit.warnings.insert(fit.warnings.end(), w.begin(), w.end());
  for (const auto& cv : fit.cv) fit.warnings.insert(fit.warnings.end(), cv.warnings.begin(), cv.warnings.end());

  model.residual_cov = sample_covariance(fit.residuals);
  model.sample_start = rv.dates.empty() ? Date{} : rv.dates.front();
  model.sample_end = rv.dates.empty() ? Date{} : rv.dates.back();
  model.observations = idx(rv.rows());
  model.seed_history = rv.values.bottomRows(cfg.lags.span());
  return fit;
}

}  // namespace

std::string_view horizon_name(Horizon h) noexcept {
  switch (h) {
    case Horizon::kDaily: return "daily";
    case Horizon::kWeekly: return "weekly";
    case Horizon::kMonthly: return "monthly";
  }
  return "daily";
}

Horizon parse_horizon(std::string_view name) {
  if (name == "daily") return Horizon::kDaily;
  if (name == "weekly") return Horizon::kWeekly;
  if (name == "monthly") return Horizon::kMonthly;
  throw Error(ErrorCode::kInvalidArgument, "unknown horizon '" + std::string(name) + "'");
}

Eigen::Index HybridModel::cross_index(std::size_t target, std::size_t source, Horizon h) {
  const std::size_t slot = source < target ? source : source - 1;
  return idx(slot) * kHorizons + static_cast<Eigen::Index>(h);
}

double HybridModel::cross_coef(std::size_t target, std::size_t source, Horizon h) const {
  if (target == source) {
    throw Error(ErrorCode::kInvalidArgument, "cross loadings exclude the target's own lags");
  }
  return cross.at(target)(cross_index(target, source, h));
}

double HybridModel::max_persistence() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : own) worst = std::max(worst, persistence(c));
  return worst;
}

Eigen::MatrixXd har_regressor_panel(const Eigen::Ref<const Eigen::MatrixXd>& rv,
                                    const HarLags& lags) {
  validate(lags);
  const Eigen::Index lead = lags.span();
  if (rv.rows() <= lead) {
    throw Error(ErrorCode::kSeriesTooShort,
                "HAR features need more than " + std::to_string(lead) + " observations");
  }
  const Eigen::Index m = rv.rows() - lead;
  Eigen::MatrixXd out(m, rv.cols() * kHorizons);
  for (Eigen::Index k = 0; k < rv.cols(); ++k) {
    const Eigen::VectorXd column = rv.col(k);
    for (Eigen::Index r = 0; r < m; ++r) {
      out.block(r, k * kHorizons, 1, kHorizons) = har_regressors(column, lead + r, lags).transpose();
    }
  }
  return out;
}

Eigen::MatrixXd cross_design(const Eigen::MatrixXd& regressors, std::size_t target) {
  const Eigen::Index k = regressors.cols() / kHorizons;
  const Eigen::Index t = idx(target);
  Eigen::MatrixXd x(regressors.rows(), (k - 1) * kHorizons);
  x.leftCols(t * kHorizons) = regressors.leftCols(t * kHorizons);
  x.rightCols((k - 1 - t) * kHorizons) = regressors.rightCols((k - 1 - t) * kHorizons);
  return x;
}

HybridFit fit_hybrid(const RvPanel& rv, const HybridConfig& cfg) {
  return fit_impl(rv, cfg, true,
                  [&](std::size_t, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      CvResult* cv) {
                    std::vector<double> grid = cfg.lambda_grid;
                    if (grid.empty()) {
                      grid = lambda_grid(scale_design(x, y, cfg.enet), cfg.alpha,
                                         cfg.grid_points, cfg.grid_ratio);
                    }
                    *cv = cross_validate_lambda(x, y, std::move(grid), cfg.alpha, cfg.cv_folds,
                                                cfg.enet);
                    return cv->selected_lambda;
                  });
}

HybridFit fit_hybrid_fixed(const RvPanel& rv, const HybridConfig& cfg,
                           const std::vector<double>& lambdas,
                           std::span<const Eigen::Index> segment_starts) {
  if (lambdas.size() != rv.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "one lambda per asset required");
  }
  return fit_impl(
      rv, cfg, false,
      [&](std::size_t i, const Eigen::MatrixXd&, const Eigen::VectorXd&, CvResult*) {
        return lambdas[i];
      },
      segment_starts);
}

Eigen::VectorXd predict_one_step(const HybridModel& model,
                                 const Eigen::Ref<const Eigen::MatrixXd>& history) {
  const std::size_t K = model.size();
  if (history.cols() != idx(K)) {
    throw Error(ErrorCode::kLengthMismatch, "history column count differs from model assets");
  }
  if (history.rows() < model.lags.span()) {
    throw Error(ErrorCode::kHistoryTooShort,
                "need at least " + std::to_string(model.lags.span()) + " history rows");
  }
  if (!history.allFinite()) throw Error(ErrorCode::kNonFiniteInput, "history has NaN or Inf");

  Eigen::VectorXd regressors(idx(K) * kHorizons);
  for (std::size_t k = 0; k < K; ++k) {
    const Eigen::VectorXd column = history.col(idx(k));
    regressors.segment(idx(k) * kHorizons, kHorizons) =
        har_regressors(column, history.rows(), model.lags);
  }

  Eigen::VectorXd out(idx(K));
  for (std::size_t i = 0; i < K; ++i) {
    double value = model.own[i].predict(regressors.segment<3>(idx(i) * kHorizons));
    value += model.cross_intercept[i];
    for (std::size_t j = 0; j < K; ++j) {
      if (j == i) continue;
      for (Eigen::Index h = 0; h < kHorizons; ++h) {
        value += model.cross[i](HybridModel::cross_index(i, j, static_cast<Horizon>(h))) *
                 regressors(idx(j) * kHorizons + h);
      }
    }
    out(idx(i)) = value;
  }
  return out;
}

Eigen::MatrixXd in_sample_residuals(const HybridModel& model, const RvPanel& rv) {
  const Eigen::MatrixXd regressors = har_regressor_panel(rv.values, model.lags);
  Eigen::MatrixXd resid(regressors.rows(), idx(model.size()));
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& c = model.own[i];
    const auto own_cols = regressors.middleCols(idx(i) * kHorizons, kHorizons);
    Eigen::VectorXd fitted = (own_cols * Eigen::Vector3d(c.beta_d, c.beta_w, c.beta_m)).array() +
                             c.intercept + model.cross_intercept[i];
    if (model.cross[i].size() > 0) fitted += cross_design(regressors, i) * model.cross[i];
    resid.col(idx(i)) = rv.values.col(idx(i)).tail(regressors.rows()) - fitted;
  }
  return resid;
}

Eigen::MatrixXd residual_covariance(const HybridModel& model, const RvPanel& rv) {
  return sample_covariance(in_sample_residuals(model, rv));
}

Eigen::MatrixXd sample_covariance(const Eigen::Ref<const Eigen::MatrixXd>& data) {
  const Eigen::Index n = data.rows();
  if (n < 2) return Eigen::MatrixXd::Zero(data.cols(), data.cols());
  const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  return 0.5 * (cov + cov.transpose());
}

NetworkSummary spillover_network(const HybridModel& model) {
  const std::size_t K = model.size();
  NetworkSummary net;
  net.out_strength.assign(K, 0.0);
  net.in_strength.assign(K, 0.0);
  std::size_t zeros = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      if (j == i) continue;
      for (Eigen::Index h = 0; h < kHorizons; ++h) {
        const auto horizon = static_cast<Horizon>(h);
        const double coef = model.cross_coef(i, j, horizon);
        ++total;
        if (coef == 0.0) {
          ++zeros;
          continue;
        }
        net.edges.push_back({model.assets[j], model.assets[i], horizon, coef});
        net.out_strength[j] += std::abs(coef);
        net.in_strength[i] += std::abs(coef);
      }
    }
  }
  net.sparsity = total > 0 ? static_cast<double>(zeros) / static_cast<double>(total) : 1.0;
  return net;
}

}  // namespace volnet
