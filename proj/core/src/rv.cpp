#include "volnet/rv.hpp"

#include <cmath>

#include "volnet/error.hpp"
#include "volnet/parallel.hpp"

namespace volnet {

namespace {

/// Two-pass sample variance (n-1) of values[first, first+n).
double window_variance(const std::vector<double>& values, std::size_t first, std::size_t n) {
  double mean = 0.0;
  for (std::size_t i = first; i < first + n; ++i) mean += values[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = first; i < first + n; ++i) {
    const double d = values[i] - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(n - 1);
}

}  // namespace

RvPanel RvPanel::slice(std::size_t begin, std::size_t end) const {
  RvPanel out;
  out.assets = assets;
  out.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(begin),
                   dates.begin() + static_cast<std::ptrdiff_t>(end));
  out.values = values.middleRows(static_cast<Eigen::Index>(begin),
                                 static_cast<Eigen::Index>(end - begin));
  return out;
}

double yz_weight(int n) {
  if (n < 2) throw Error(ErrorCode::kWindowTooSmall, "Yang-Zhang window must be >= 2");
  const double nd = n;
  return 0.34 / (1.34 + (nd + 1.0) / (nd - 1.0));
}

double rogers_satchell_var(const OhlcBar& bar) noexcept {
  const double hc = std::log(bar.high / bar.close);
  const double ho = std::log(bar.high / bar.open);
  const double lc = std::log(bar.low / bar.close);
  const double lo = std::log(bar.low / bar.open);
  return hc * ho + lc * lo;
}

RvSeries yang_zhang_rv(const OhlcSeries& series, const YzConfig& cfg) {
  const double k = yz_weight(cfg.window);
  const auto n = static_cast<std::size_t>(cfg.window);
  const std::size_t total = series.bars.size();
  if (total <= n) {
    throw Error(ErrorCode::kSeriesTooShort,
                series.asset + ": need more than " + std::to_string(n) + " bars");
  }

  // Index s holds the quantity for bar s; overnight returns start at bar 1.
  std::vector<double> overnight(total, 0.0);
  std::vector<double> open_close(total);
  std::vector<double> rs(total);
  for (std::size_t s = 0; s < total; ++s) {
    const auto& bar = series.bars[s];
    if (s > 0) overnight[s] = std::log(bar.open / series.bars[s - 1].close);
    open_close[s] = std::log(bar.close / bar.open);
    rs[s] = rogers_satchell_var(bar);
  }

  RvSeries out;
  out.asset = series.asset;
  out.dates.reserve(total - n);
  out.values.reserve(total - n);
  const double scale = std::sqrt(cfg.annualization);
  for (std::size_t t = n; t < total; ++t) {
    const std::size_t first = t - n + 1;
    const double var_o = window_variance(overnight, first, n);
    const double var_oc = window_variance(open_close, first, n);
    double rs_mean = 0.0;
    for (std::size_t s = first; s <= t; ++s) rs_mean += rs[s];
    rs_mean /= static_cast<double>(n);

    double radicand = var_o + k * var_oc + (1.0 - k) * rs_mean;
    if (radicand < 0.0) {
      radicand = 0.0;
      ++out.clamped;
    }
    out.dates.push_back(series.bars[t].date);
    out.values.push_back(std::sqrt(radicand) * scale);
  }
  return out;
}

RvPanel yang_zhang_panel(const OhlcPanel& panel, const YzConfig& cfg, std::size_t* clamped_total) {
  const std::size_t K = panel.cols();
  std::vector<RvSeries> columns(K);
  parallel_for(K, [&](std::size_t k) { columns[k] = yang_zhang_rv(panel.column(k), cfg); });

  RvPanel out;
  out.assets = panel.assets;
  out.dates = K > 0 ? columns.front().dates : std::vector<Date>{};
  out.values.resize(static_cast<Eigen::Index>(out.dates.size()), static_cast<Eigen::Index>(K));
  std::size_t clamped = 0;
  for (std::size_t k = 0; k < K; ++k) {
    clamped += columns[k].clamped;
    for (std::size_t t = 0; t < out.dates.size(); ++t) {
      out.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = columns[k].values[t];
    }
  }
  if (clamped_total != nullptr) *clamped_total = clamped;
  return out;
}

}  // namespace volnet
