#include "volnet/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "volnet/error.hpp"

namespace volnet {

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::string lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> parse_double(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

bool is_valid_bar(const OhlcBar& bar) noexcept {
  const std::array prices{bar.open, bar.high, bar.low, bar.close};
  for (double p : prices) {
    if (!std::isfinite(p) || p <= 0.0) return false;
  }
  return bar.low <= std::min(bar.open, bar.close) && bar.high >= std::max(bar.open, bar.close);
}

OhlcSeries OhlcPanel::column(std::size_t k) const {
  OhlcSeries series{assets.at(k), {}};
  series.bars.reserve(rows());
  for (const auto& row : bars) series.bars.push_back(row.at(k));
  return series;
}

OhlcSeries load_ohlc_csv(const std::filesystem::path& path, std::string asset) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  if (asset.empty()) asset = path.stem().string();

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMissingColumn, path.string() + ": empty file, header required");
  }
  const auto header = split_csv_line(line);
  constexpr std::array<std::string_view, 5> kRequired{"date", "open", "high", "low", "close"};
  std::array<std::size_t, 5> index{};
  for (std::size_t r = 0; r < kRequired.size(); ++r) {
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) { return lower(h) == kRequired[r]; });
    if (it == header.end()) {
      throw Error(ErrorCode::kMissingColumn,
                  path.string() + ": missing column '" + std::string(kRequired[r]) + "'");
    }
    index[r] = static_cast<std::size_t>(it - header.begin());
  }
  const std::size_t needed = *std::max_element(index.begin(), index.end()) + 1;

  OhlcSeries series{std::move(asset), {}};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    const auto fail = [&] {
      return Error(ErrorCode::kUnparseableRow,
                   path.string() + ": line " + std::to_string(line_no));
    };
    if (fields.size() < needed) throw fail();
    const auto date = Date::parse_iso(fields[index[0]]);
    const auto open = parse_double(fields[index[1]]);
    const auto high = parse_double(fields[index[2]]);
    const auto low = parse_double(fields[index[3]]);
    const auto close = parse_double(fields[index[4]]);
    if (!date || !open || !high || !low || !close) throw fail();
    OhlcBar bar{*date, *open, *high, *low, *close};
    if (!is_valid_bar(bar)) {
      throw Error(ErrorCode::kPriceInvariantViolation,
                  path.string() + ": " + date->iso());
    }
    series.bars.push_back(bar);
  }

  std::stable_sort(series.bars.begin(), series.bars.end(),
                   [](const OhlcBar& a, const OhlcBar& b) { return a.date < b.date; });
  auto dup = std::adjacent_find(series.bars.begin(), series.bars.end(),
                                [](const OhlcBar& a, const OhlcBar& b) { return a.date == b.date; });
  if (dup != series.bars.end()) {
    throw Error(ErrorCode::kDuplicateDate, path.string() + ": " + dup->date.iso());
  }
  return series;
}

OhlcPanel align_panel(std::span<const OhlcSeries> series) {
  if (series.empty()) throw Error(ErrorCode::kInvalidArgument, "align_panel: no series");

  std::vector<Date> common;
  for (const auto& bar : series.front().bars) common.push_back(bar.date);
  for (const auto& s : series.subspan(1)) {
    std::vector<Date> dates;
    for (const auto& bar : s.bars) dates.push_back(bar.date);
    std::vector<Date> next;
    std::set_intersection(common.begin(), common.end(), dates.begin(), dates.end(),
                          std::back_inserter(next));
    common = std::move(next);
  }
  if (common.empty()) throw Error(ErrorCode::kEmptyIntersection, "no date common to all assets");

  OhlcPanel panel;
  panel.dates = common;
  panel.bars.assign(common.size(), std::vector<OhlcBar>(series.size()));
  for (std::size_t k = 0; k < series.size(); ++k) {
    panel.assets.push_back(series[k].asset);
    std::size_t t = 0;
    for (const auto& bar : series[k].bars) {
      if (t < common.size() && bar.date == common[t]) panel.bars[t++][k] = bar;
    }
  }
  return panel;
}

OhlcPanel load_panel_dir(const std::filesystem::path& dir, std::vector<std::string> assets) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  if (assets.empty()) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        assets.push_back(entry.path().stem().string());
      }
    }
    std::sort(assets.begin(), assets.end());
  }
  if (assets.empty()) throw Error(ErrorCode::kIo, "no CSV files in " + dir.string());

  std::vector<OhlcSeries> series;
  series.reserve(assets.size());
  for (const auto& asset : assets) series.push_back(load_ohlc_csv(dir / (asset + ".csv"), asset));
  return align_panel(series);
}

}  // namespace volnet
