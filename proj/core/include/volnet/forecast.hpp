#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "volnet/har.hpp"
#include "volnet/hybrid.hpp"
#include "volnet/rv.hpp"

namespace volnet {

/// Chronological split: the first floor(ratio * N) rows train, the rest test.
/// Throws DegenerateSplit when either side would be empty.
[[nodiscard]] std::pair<RvPanel, RvPanel> split_train_test(const RvPanel& panel, double ratio);

/// Number of training rows split_train_test would produce.
[[nodiscard]] std::size_t train_rows(std::size_t n, double ratio);

struct ForecastMetrics {
  double rmse = 0.0;
  double mae = 0.0;
  double mape = 0.0;  // percent
};

/// RMSE, MAE and MAPE (percent). Throws LengthMismatch or ZeroActualForMape.
[[nodiscard]] ForecastMetrics forecast_metrics(std::span<const double> actual,
                                               std::span<const double> forecast);

/// One-step forecasts for rows test_start..N-1 of `panel` with fixed
/// parameters; the forecast for row t only reads rows before t.
/// Throws HistoryTooShort when test_start < lags.span().
[[nodiscard]] Eigen::MatrixXd rolling_forecast(const HybridModel& model, const RvPanel& panel,
                                               std::size_t test_start);

/// Same for a set of univariate HAR fits (one per panel column).
[[nodiscard]] Eigen::MatrixXd rolling_forecast(std::span<const HarCoefficients> har,
                                               const HarLags& lags, const RvPanel& panel,
                                               std::size_t test_start);

/// Per-asset univariate HAR fits.
[[nodiscard]] std::vector<HarCoefficients> fit_har_set(const RvPanel& panel,
                                                       const HarLags& lags = {});

struct ForecastReport {
  std::string model_label;
  std::vector<std::string> assets;
  std::vector<ForecastMetrics> per_asset;
  ForecastMetrics average;
  Date test_start;
  Date test_end;
};

/// Scores forecasts for rows test_start..N-1 of `panel`.
[[nodiscard]] ForecastReport evaluate_forecasts(std::string label, const RvPanel& panel,
                                                std::size_t test_start,
                                                const Eigen::MatrixXd& forecasts);

}  // namespace volnet
