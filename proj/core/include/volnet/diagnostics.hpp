#pragma once

#include <optional>
#include <span>

namespace volnet {

struct AdfOptions {
  /// Highest number of lagged differences; default ceil(12 * (n/100)^(1/4)).
  std::optional<int> max_lags;
  /// Select the lag count by AIC over 0..max_lags on a common sample; when
  /// false, exactly max_lags lagged differences are used.
  bool autolag = true;
  /// Include a constant in the test regression. Without it the no-constant
  /// response surface is used.
  bool constant = true;
};

struct AdfResult {
  double statistic = 0.0;  // t-ratio on the lagged level
  double p_value = 1.0;    // MacKinnon response-surface approximation
  int lags = 0;            // lagged differences used
  long nobs = 0;           // rows of the final regression
};

/// Augmented Dickey-Fuller unit-root test: regresses the first difference on
/// the lagged level, lagged differences and (optionally) a constant.
/// Throws SeriesTooShort below 25 observations.
[[nodiscard]] AdfResult adf_test(std::span<const double> series, const AdfOptions& opts = {});

/// MacKinnon (1994) approximate p-value of a single-series ADF t statistic.
[[nodiscard]] double mackinnon_p(double statistic, bool constant = true);

struct KpssResult {
  double statistic = 0.0;
  double p_value = 0.1;  // interpolated, clipped to [0.01, 0.10]
  int lags = 0;
};

/// KPSS level-stationarity test with a Bartlett long-run variance. Without an
/// explicit lag count the bandwidth follows the Hobijn-Franses-Ooms rule.
/// Throws SeriesTooShort below 25 observations.
[[nodiscard]] KpssResult kpss_test(std::span<const double> series,
                                   std::optional<int> lags = std::nullopt);

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

/// Moment summary (sample sd with n-1; skewness and kurtosis from central
/// moments with the n denominator).
[[nodiscard]] SummaryStats summarize(std::span<const double> series);

}  // namespace volnet
