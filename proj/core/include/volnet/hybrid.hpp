#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "volnet/date.hpp"
#include "volnet/elasticnet.hpp"
#include "volnet/har.hpp"
#include "volnet/rv.hpp"

namespace volnet {

enum class Horizon { kDaily = 0, kWeekly = 1, kMonthly = 2 };

[[nodiscard]] std::string_view horizon_name(Horizon h) noexcept;
[[nodiscard]] Horizon parse_horizon(std::string_view name);

/// Tag describing the cross-feature ordering: for target i, sources j != i in
/// asset order, each contributing (daily, weekly, monthly).
inline constexpr std::string_view kFeatureOrdering = "source-major/daily-weekly-monthly/v1";

struct HybridConfig {
  HarLags lags;
  double alpha = 0.5;
  int cv_folds = 5;
  int grid_points = 60;
  double grid_ratio = 1e-4;
  std::vector<double> lambda_grid;  // overrides the data-driven grid when non-empty
  // Cross step centres residuals and regressors; the level of the other
  // assets' lags otherwise leaks into every cross coefficient.
  EnetOptions enet{.fit_intercept = true};
};

/// Two-step HAR + ElasticNet system: OLS own-lag dynamics per asset plus a
/// sparse set of cross-market loadings fit on the OLS residuals.
struct HybridModel {
  std::vector<std::string> assets;
  HarLags lags;
  double alpha = 0.5;
  std::vector<HarCoefficients> own;
  /// cross[i] holds 3(K-1) loadings of target i on the other assets' HAR
  /// regressors, ordered per kFeatureOrdering. Zeros are explicit.
  std::vector<Eigen::VectorXd> cross;
  /// Constant of the cross step; zero unless the ElasticNet fit an intercept.
  std::vector<double> cross_intercept;
  std::vector<double> selected_lambda;
  Eigen::MatrixXd residual_cov;

  // Fit metadata.
  Date sample_start;
  Date sample_end;
  Eigen::Index observations = 0;
  /// Final lags.span() rows of the estimation panel; default JIRF seed.
  Eigen::MatrixXd seed_history;

  [[nodiscard]] std::size_t size() const noexcept { return assets.size(); }
  /// Loading of target on source at a horizon. Throws InvalidArgument when
  /// source == target: own effects live in `own`.
  [[nodiscard]] double cross_coef(std::size_t target, std::size_t source, Horizon h) const;
  /// Position of (source, horizon) inside cross[target].
  [[nodiscard]] static Eigen::Index cross_index(std::size_t target, std::size_t source, Horizon h);
  [[nodiscard]] double max_persistence() const;
};

/// HAR regressors of every asset: an M x 3K matrix whose column 3k+h is
/// horizon h of asset k, for targets at rows lags.span()..N-1.
[[nodiscard]] Eigen::MatrixXd har_regressor_panel(const Eigen::Ref<const Eigen::MatrixXd>& rv,
                                                  const HarLags& lags);

/// Cross design of target i: the regressor panel without asset i's columns.
[[nodiscard]] Eigen::MatrixXd cross_design(const Eigen::MatrixXd& regressors, std::size_t target);

struct HybridFit {
  HybridModel model;
  std::vector<CvResult> cv;   // one per asset; empty for fixed-lambda fits
  Eigen::MatrixXd residuals;  // M x K final in-sample residuals
  std::vector<std::string> warnings;
};

/// Full estimation with per-asset lambda chosen by forward-chaining CV.
[[nodiscard]] HybridFit fit_hybrid(const RvPanel& rv, const HybridConfig& cfg = {});

/// Estimation with given per-asset lambda (no CV); used by the bootstrap.
/// With `segment_starts` (ascending row offsets, first 0) the panel is a
/// concatenation of segments and only targets whose lag window stays inside
/// one segment enter the fit; `residuals` then has fewer rows.
[[nodiscard]] HybridFit fit_hybrid_fixed(const RvPanel& rv, const HybridConfig& cfg,
                                         const std::vector<double>& lambdas,
                                         std::span<const Eigen::Index> segment_starts = {});

/// One-step prediction for every asset from the trailing rows of `history`
/// (rows = time, cols = assets). Throws HistoryTooShort.
[[nodiscard]] Eigen::VectorXd predict_one_step(const HybridModel& model,
                                               const Eigen::Ref<const Eigen::MatrixXd>& history);

/// In-sample one-step residuals (M x K) of a model on a panel.
[[nodiscard]] Eigen::MatrixXd in_sample_residuals(const HybridModel& model, const RvPanel& rv);

/// Sample covariance (M-1 denominator) of the in-sample residuals.
[[nodiscard]] Eigen::MatrixXd residual_covariance(const HybridModel& model, const RvPanel& rv);

/// Sample covariance (n-1 denominator) of the columns of a matrix.
[[nodiscard]] Eigen::MatrixXd sample_covariance(const Eigen::Ref<const Eigen::MatrixXd>& data);

struct NetworkEdge {
  std::string source;
  std::string target;
  Horizon horizon = Horizon::kDaily;
  double coefficient = 0.0;
};

struct NetworkSummary {
  std::vector<NetworkEdge> edges;
  std::vector<double> out_strength;  // sum of |coef| leaving each asset
  std::vector<double> in_strength;   // sum of |coef| entering each asset
  double sparsity = 1.0;             // zero cross entries / 3K(K-1)
};

/// Edges are exactly the nonzero cross loadings, ordered by target then
/// source then horizon.
[[nodiscard]] NetworkSummary spillover_network(const HybridModel& model);

}  // namespace volnet
