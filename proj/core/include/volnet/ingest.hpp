#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "volnet/date.hpp"

namespace volnet {

struct OhlcBar {
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
};

/// True when all prices are positive and finite and the high/low bracket
/// both open and close.
[[nodiscard]] bool is_valid_bar(const OhlcBar& bar) noexcept;

/// Dated bars for one asset, ascending by date with no duplicates.
struct OhlcSeries {
  std::string asset;
  std::vector<OhlcBar> bars;
};

/// Date-aligned bars for K assets. `bars[t][k]` is asset k on `dates[t]`.
struct OhlcPanel {
  std::vector<Date> dates;
  std::vector<std::string> assets;
  std::vector<std::vector<OhlcBar>> bars;

  [[nodiscard]] std::size_t rows() const noexcept { return dates.size(); }
  [[nodiscard]] std::size_t cols() const noexcept { return assets.size(); }
  /// Column k as a standalone series.
  [[nodiscard]] OhlcSeries column(std::size_t k) const;
};

/// Reads a `date,open,high,low,close` CSV (header required, column names
/// case-insensitive, extra columns ignored). Rows are sorted ascending.
/// Throws Error with MissingColumn, UnparseableRow, PriceInvariantViolation or
/// DuplicateDate.
[[nodiscard]] OhlcSeries load_ohlc_csv(const std::filesystem::path& path, std::string asset = {});

/// Intersects the date sets of all series; dates missing for any asset are
/// dropped. Column order follows the input order. Throws EmptyIntersection.
[[nodiscard]] OhlcPanel align_panel(std::span<const OhlcSeries> series);

/// Loads `<dir>/<ASSET>.csv` for each asset and aligns them. With an empty
/// asset list every `*.csv` in the directory is loaded in lexicographic order.
[[nodiscard]] OhlcPanel load_panel_dir(const std::filesystem::path& dir,
                                       std::vector<std::string> assets = {});

}  // namespace volnet
