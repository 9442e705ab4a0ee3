#include "volnet/har.hpp"

#include <string>

#include "volnet/error.hpp"

namespace volnet {

void validate(const HarLags& lags) {
  if (lags.daily < 1 || lags.weekly < lags.daily || lags.monthly < lags.weekly) {
    throw Error(ErrorCode::kInvalidArgument,
                "HAR lags must satisfy 1 <= daily <= weekly <= monthly");
  }
}

Eigen::Vector3d har_regressors(const Eigen::Ref<const Eigen::VectorXd>& series, Eigen::Index t,
                               const HarLags& lags) {
  // Plain left-to-right sums: the result must not depend on how the series
  // happens to be aligned in memory.
  const auto mean_back = [&](int window) {
    double sum = 0.0;
    for (Eigen::Index s = t - window; s < t; ++s) sum += series(s);
    return sum / static_cast<double>(window);
  };
  return {mean_back(lags.daily), mean_back(lags.weekly), mean_back(lags.monthly)};
}

HarFeatures build_har_features(const Eigen::Ref<const Eigen::VectorXd>& series,
                               std::span<const Date> dates, const HarLags& lags) {
  validate(lags);
  const Eigen::Index n = series.size();
  const Eigen::Index lead = lags.span();
  if (n <= lead) {
    throw Error(ErrorCode::kSeriesTooShort,
                "HAR features need more than " + std::to_string(lead) + " observations");
  }
  const Eigen::Index m = n - lead;
  HarFeatures out;
  out.target = series.tail(m);
  out.regressors.resize(m, 3);
  for (Eigen::Index r = 0; r < m; ++r) {
    out.regressors.row(r) = har_regressors(series, lead + r, lags).transpose();
  }
  if (!dates.empty()) out.dates.assign(dates.begin() + lead, dates.end());
  return out;
}

Eigen::VectorXd least_squares(const Eigen::Ref<const Eigen::MatrixXd>& design,
                              const Eigen::Ref<const Eigen::VectorXd>& target) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < design.cols()) {
    throw Error(ErrorCode::kRankDeficientDesign,
                "design rank " + std::to_string(qr.rank()) + " < " +
                    std::to_string(design.cols()) + " columns");
  }
  return qr.solve(target);
}

HarFit fit_har_ols(const HarFeatures& features) {
  const Eigen::Index m = features.rows();
  if (m < 4) throw Error(ErrorCode::kTooFewObservations, "HAR OLS needs at least 4 rows");

  Eigen::MatrixXd design(m, 4);
  design.col(0).setOnes();
  design.rightCols(3) = features.regressors;
  const Eigen::VectorXd beta = least_squares(design, features.target);

  HarFit fit;
  fit.coef = {beta(0), beta(1), beta(2), beta(3)};
  fit.fitted = design * beta;
  fit.residuals = features.target - fit.fitted;
  fit.nonstationary_warning = persistence(fit.coef) >= 1.0;
  return fit;
}

}  // namespace volnet
