#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volnet/date.hpp"
#include "volnet/ingest.hpp"

namespace volnet {

/// Date-aligned annualized volatility. `values(t, k)` is asset k on `dates[t]`.
struct RvPanel {
  std::vector<Date> dates;
  std::vector<std::string> assets;
  Eigen::MatrixXd values;

  [[nodiscard]] std::size_t rows() const noexcept { return dates.size(); }
  [[nodiscard]] std::size_t cols() const noexcept { return assets.size(); }
  /// Rows [begin, end) as a new panel.
  [[nodiscard]] RvPanel slice(std::size_t begin, std::size_t end) const;
};

struct YzConfig {
  int window = 30;
  double annualization = 252.0;
};

/// One asset's RV series plus the number of windows whose variance sum was
/// clamped at zero before the square root.
struct RvSeries {
  std::string asset;
  std::vector<Date> dates;
  std::vector<double> values;
  std::size_t clamped = 0;
};

/// Yang-Zhang open-to-close weight k = 0.34 / (1.34 + (n+1)/(n-1)).
/// Throws WindowTooSmall for n < 2.
[[nodiscard]] double yz_weight(int n);

/// Rogers-Satchell daily variance ln(H/C)ln(H/O) + ln(L/C)ln(L/O).
[[nodiscard]] double rogers_satchell_var(const OhlcBar& bar) noexcept;

/// Rolling Yang-Zhang volatility. The value stamped at bar t uses bars
/// t-n+1..t and the close of bar t-n, so the first n bars produce no output.
/// Window variances use the n-1 denominator. Throws SeriesTooShort when the
/// series has no more than `window` bars.
[[nodiscard]] RvSeries yang_zhang_rv(const OhlcSeries& series, const YzConfig& cfg = {});

/// Applies yang_zhang_rv to every column of an aligned panel.
[[nodiscard]] RvPanel yang_zhang_panel(const OhlcPanel& panel, const YzConfig& cfg = {},
                                       std::size_t* clamped_total = nullptr);

}  // namespace volnet
