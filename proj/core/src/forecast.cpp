#include "volnet/forecast.hpp"

#include <cmath>

#include "volnet/error.hpp"
#include "volnet/parallel.hpp"

namespace volnet {

std::size_t train_rows(std::size_t n, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kDegenerateSplit, "split ratio must lie strictly between 0 and 1");
  }
  // The epsilon keeps exact products such as 0.8 * 10 from rounding down.
  const auto train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
  if (train == 0 || train >= n) {
    throw Error(ErrorCode::kDegenerateSplit, "split leaves an empty train or test set");
  }
  return train;
}

std::pair<RvPanel, RvPanel> split_train_test(const RvPanel& panel, double ratio) {
  const std::size_t n = panel.rows();
  const std::size_t train = train_rows(n, ratio);
  return {panel.slice(0, train), panel.slice(train, n)};
}

ForecastMetrics forecast_metrics(std::span<const double> actual, std::span<const double> forecast) {
  if (actual.size() != forecast.size() || actual.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "actual and forecast must have equal, non-zero length");
  }
  double se = 0.0;
  double ae = 0.0;
  double ape = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) {
      throw Error(ErrorCode::kZeroActualForMape, "MAPE undefined for a zero actual value");
    }
    const double err = actual[i] - forecast[i];
    se += err * err;
    ae += std::abs(err);
    ape += std::abs(err / actual[i]);
  }
  const auto n = static_cast<double>(actual.size());
  return {std::sqrt(se / n), ae / n, 100.0 * ape / n};
}

Eigen::MatrixXd rolling_forecast(const HybridModel& model, const RvPanel& panel,
                                 std::size_t test_start) {
  const Eigen::Index span = model.lags.span();
  const auto start = static_cast<Eigen::Index>(test_start);
  const auto n = static_cast<Eigen::Index>(panel.rows());
  if (start < span || start > n) {
    throw Error(ErrorCode::kHistoryTooShort,
                "test start must leave " + std::to_string(span) + " rows of history");
  }
  Eigen::MatrixXd out(n - start, panel.values.cols());
  parallel_for(static_cast<std::size_t>(n - start), [&](std::size_t r) {
    const Eigen::Index t = start + static_cast<Eigen::Index>(r);
    out.row(static_cast<Eigen::Index>(r)) =
        predict_one_step(model, panel.values.middleRows(t - span, span)).transpose();
  });
  return out;
}

Eigen::MatrixXd rolling_forecast(std::span<const HarCoefficients> har, const HarLags& lags,
                                 const RvPanel& panel, std::size_t test_start) {
  if (har.size() != panel.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "one HAR fit per panel column required");
  }
  const Eigen::Index span = lags.span();
  const auto start = static_cast<Eigen::Index>(test_start);
  const auto n = static_cast<Eigen::Index>(panel.rows());
  if (start < span || start > n) {
    throw Error(ErrorCode::kHistoryTooShort,
                "test start must leave " + std::to_string(span) + " rows of history");
  }
  Eigen::MatrixXd out(n - start, panel.values.cols());
  for (Eigen::Index k = 0; k < panel.values.cols(); ++k) {
    const Eigen::VectorXd column = panel.values.col(k);
    for (Eigen::Index t = start; t < n; ++t) {
      out(t - start, k) = har[static_cast<std::size_t>(k)].predict(har_regressors(column, t, lags));
    }
  }
  return out;
}

std::vector<HarCoefficients> fit_har_set(const RvPanel& panel, const HarLags& lags) {
  std::vector<HarCoefficients> out(panel.cols());
  parallel_for(panel.cols(), [&](std::size_t k) {
    const auto col = static_cast<Eigen::Index>(k);
    out[k] = fit_har_ols(build_har_features(panel.values.col(col), panel.dates, lags)).coef;
  });
  return out;
}

ForecastReport evaluate_forecasts(std::string label, const RvPanel& panel, std::size_t test_start,
                                  const Eigen::MatrixXd& forecasts) {
  const auto start = static_cast<Eigen::Index>(test_start);
  const Eigen::Index rows = static_cast<Eigen::Index>(panel.rows()) - start;
  if (forecasts.rows() != rows || forecasts.cols() != panel.values.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "forecast matrix does not match the test block");
  }
  ForecastReport report;
  report.model_label = std::move(label);
  report.assets = panel.assets;
  report.test_start = panel.dates[test_start];
  report.test_end = panel.dates.back();
  for (Eigen::Index k = 0; k < forecasts.cols(); ++k) {
    const Eigen::VectorXd actual = panel.values.col(k).tail(rows);
    const Eigen::VectorXd predicted = forecasts.col(k);
    const ForecastMetrics m = forecast_metrics({actual.data(), static_cast<std::size_t>(rows)},
                                               {predicted.data(), static_cast<std::size_t>(rows)});
    report.per_asset.push_back(m);
    report.average.rmse += m.rmse;
    report.average.mae += m.mae;
    report.average.mape += m.mape;
  }
  const auto k = static_cast<double>(report.per_asset.size());
  if (k > 0) {
    report.average.rmse /= k;
    report.average.mae /= k;
    report.average.mape /= k;
  }
  return report;
}

}  // namespace volnet
