#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "volnet/date.hpp"

namespace volnet {

/// Averaging windows of the three HAR regressors. Each regressor is the mean
/// of the most recent `daily`, `weekly` or `monthly` observations.
struct HarLags {
  int daily = 1;
  int weekly = 5;
  int monthly = 22;

  /// Leading observations consumed before the first feature row.
  [[nodiscard]] int span() const noexcept { return monthly; }
  friend bool operator==(const HarLags&, const HarLags&) = default;
};

/// Validates 1 <= daily <= weekly <= monthly; throws InvalidArgument otherwise.
void validate(const HarLags& lags);

/// Regressor triple (daily, weekly, monthly) for predicting position `t` of
/// `series` from observations strictly before `t`. Requires t >= lags.span().
[[nodiscard]] Eigen::Vector3d har_regressors(const Eigen::Ref<const Eigen::VectorXd>& series,
                                             Eigen::Index t, const HarLags& lags);

struct HarFeatures {
  std::vector<Date> dates;    // stamp of each target
  Eigen::VectorXd target;     // RV_t
  Eigen::MatrixXd regressors; // columns: daily, weekly, monthly

  [[nodiscard]] Eigen::Index rows() const noexcept { return target.size(); }
  [[nodiscard]] auto daily() const { return regressors.col(0); }
  [[nodiscard]] auto weekly() const { return regressors.col(1); }
  [[nodiscard]] auto monthly() const { return regressors.col(2); }
};

/// Builds HAR rows for every t >= lags.span(). `dates` may be empty, in which
/// case the feature dates are left empty. Throws SeriesTooShort when the series
/// has no more than lags.span() observations.
[[nodiscard]] HarFeatures build_har_features(const Eigen::Ref<const Eigen::VectorXd>& series,
                                             std::span<const Date> dates = {},
                                             const HarLags& lags = {});

struct HarCoefficients {
  double intercept = 0.0;
  double beta_d = 0.0;
  double beta_w = 0.0;
  double beta_m = 0.0;

  [[nodiscard]] double predict(const Eigen::Vector3d& regressors) const noexcept {
    return intercept + beta_d * regressors(0) + beta_w * regressors(1) + beta_m * regressors(2);
  }
  friend bool operator==(const HarCoefficients&, const HarCoefficients&) = default;
};

/// Sum of the three slopes.
[[nodiscard]] constexpr double persistence(const HarCoefficients& c) noexcept {
  return c.beta_d + c.beta_w + c.beta_m;
}

struct HarFit {
  HarCoefficients coef;
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
  /// Set when persistence >= 1; the fit is still returned.
  bool nonstationary_warning = false;
};

/// Least squares on [1, daily, weekly, monthly] via column-pivoted QR.
/// Throws RankDeficientDesign when the design is rank deficient and
/// TooFewObservations when fewer than 4 rows are supplied.
[[nodiscard]] HarFit fit_har_ols(const HarFeatures& features);

/// Dense OLS helper shared by the HAR and ADF regressions: solves
/// min ||y - X b|| with rank checking. Throws RankDeficientDesign.
[[nodiscard]] Eigen::VectorXd least_squares(const Eigen::Ref<const Eigen::MatrixXd>& design,
                                            const Eigen::Ref<const Eigen::VectorXd>& target);

}  // namespace volnet
