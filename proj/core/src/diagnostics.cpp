#include "volnet/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "volnet/error.hpp"

namespace volnet {

namespace {

constexpr std::size_t kMinLength = 25;

void require_length(std::span<const double> series, const char* test) {
  if (series.size() < kMinLength) {
    throw Error(ErrorCode::kSeriesTooShort,
                std::string(test) + " needs at least " + std::to_string(kMinLength) + " observations");
  }
  for (double v : series) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteInput, std::string(test) + ": NaN or Inf");
  }
}

struct OlsStats {
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  double ssr = 0.0;
};

OlsStats ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::Index k = x.cols();
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(r(i, i)) <= 1e-12 * std::abs(r(0, 0))) {
      throw Error(ErrorCode::kRankDeficientDesign, "unit-root regression is rank deficient");
    }
  }
  OlsStats out;
  out.beta = qr.solve(y);
  out.ssr = (y - x * out.beta).squaredNorm();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const double sigma2 = out.ssr / static_cast<double>(x.rows() - k);
  out.se = (r_inv.rowwise().squaredNorm() * sigma2).cwiseSqrt();
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Design for `lags` lagged differences over the rows whose target index is
// s in [first, n_diff). Column 0 is the lagged level; the constant (if any)
// is last.
Eigen::MatrixXd adf_design(std::span<const double> y, const std::vector<double>& diff,
                           std::size_t first, int lags, bool constant) {
  const auto rows = static_cast<Eigen::Index>(diff.size() - first);
  const Eigen::Index cols = 1 + lags + (constant ? 1 : 0);
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t s = first + static_cast<std::size_t>(r);
    x(r, 0) = y[s];
    for (int j = 1; j <= lags; ++j) x(r, j) = diff[s - static_cast<std::size_t>(j)];
    if (constant) x(r, cols - 1) = 1.0;
  }
  return x;
}

Eigen::VectorXd tail_vector(const std::vector<double>& diff, std::size_t first) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(diff.size() - first));
  for (std::size_t s = first; s < diff.size(); ++s) out(static_cast<Eigen::Index>(s - first)) = diff[s];
  return out;
}

}  // namespace

double mackinnon_p(double statistic, bool constant) {
  // Single-series response-surface coefficients (constant / no constant).
  const double tau_max = constant ? 2.74 : std::numeric_limits<double>::infinity();
  const double tau_min = constant ? -18.83 : -19.04;
  const double tau_star = constant ? -1.61 : -1.04;
  const std::array<double, 3> small =
      constant ? std::array{2.1659, 1.4412, 3.8269e-2} : std::array{0.6344, 1.2378, 3.2496e-2};
  const std::array<double, 4> large = constant ? std::array{1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2}
                                               : std::array{0.4797, 9.3557e-1, -0.6999e-1, 3.3066e-2};
  if (statistic > tau_max) return 1.0;
  if (statistic < tau_min) return 0.0;
  double z = 0.0;
  if (statistic <= tau_star) {
    z = small[0] + statistic * (small[1] + statistic * small[2]);
  } else {
    z = large[0] + statistic * (large[1] + statistic * (large[2] + statistic * large[3]));
  }
  return normal_cdf(z);
}

AdfResult adf_test(std::span<const double> series, const AdfOptions& opts) {
  require_length(series, "ADF");
  const std::size_t n = series.size();
  const int ntrend = opts.constant ? 1 : 0;
  int max_lags = opts.max_lags.value_or(
      static_cast<int>(std::ceil(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))));
  max_lags = std::min(max_lags, static_cast<int>(n / 2) - ntrend - 1);
  if (max_lags < 0) throw Error(ErrorCode::kSeriesTooShort, "ADF: series too short for the lags");

  std::vector<double> diff(n - 1);
  for (std::size_t s = 0; s + 1 < n; ++s) diff[s] = series[s + 1] - series[s];

  int lags = max_lags;
  if (opts.autolag) {
    // Common sample for every candidate so the AIC values are comparable.
    const auto first = static_cast<std::size_t>(max_lags);
    const Eigen::VectorXd target = tail_vector(diff, first);
    const auto nobs = static_cast<double>(target.size());
    double best_aic = std::numeric_limits<double>::infinity();
    for (int candidate = 0; candidate <= max_lags; ++candidate) {
      const Eigen::MatrixXd x = adf_design(series, diff, first, candidate, opts.constant);
      const double ssr = (target - x * x.householderQr().solve(target)).squaredNorm();
      const double llf = -0.5 * nobs * (std::log(2.0 * std::numbers::pi) + std::log(ssr / nobs) + 1.0);
      const double aic = -2.0 * llf + 2.0 * static_cast<double>(x.cols());
      if (aic < best_aic) {
        best_aic = aic;
        lags = candidate;
      }
    }
  }

  const auto first = static_cast<std::size_t>(lags);
  const Eigen::MatrixXd x = adf_design(series, diff, first, lags, opts.constant);
  const Eigen::VectorXd target = tail_vector(diff, first);
  const OlsStats fit = ols(x, target);

  AdfResult out;
  out.statistic = fit.beta(0) / fit.se(0);
  out.p_value = mackinnon_p(out.statistic, opts.constant);
  out.lags = lags;
  out.nobs = static_cast<long>(target.size());
  return out;
}

KpssResult kpss_test(std::span<const double> series, std::optional<int> lags) {
  require_length(series, "KPSS");
  const std::size_t n = series.size();
  const auto nd = static_cast<double>(n);
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= nd;
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = series[i] - mean;

  const auto autocov_sum = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = lag; i < n; ++i) s += resid[i] * resid[i - lag];
    return s;
  };

  int bandwidth = 0;
  if (lags) {
    if (*lags < 0 || static_cast<std::size_t>(*lags) >= n) {
      throw Error(ErrorCode::kInvalidArgument, "KPSS lags must lie in [0, n)");
    }
    bandwidth = *lags;
  } else {
    const auto cov_lags = static_cast<std::size_t>(std::pow(nd, 2.0 / 9.0));
    double s0 = autocov_sum(0) / nd;
    double s1 = 0.0;
    for (std::size_t i = 1; i <= cov_lags; ++i) {
      const double prod = autocov_sum(i) / (nd / 2.0);
      s0 += prod;
      s1 += static_cast<double>(i) * prod;
    }
    const double ratio = s1 / s0;
    const double gamma = 1.1447 * std::pow(ratio * ratio, 1.0 / 3.0);
    bandwidth = static_cast<int>(gamma * std::pow(nd, 1.0 / 3.0));
    bandwidth = std::min(bandwidth, static_cast<int>(n) - 1);
  }

  double partial = 0.0;
  double eta = 0.0;
  for (double r : resid) {
    partial += r;
    eta += partial * partial;
  }
  eta /= nd * nd;

  double s_hat = autocov_sum(0);
  for (int i = 1; i <= bandwidth; ++i) {
    s_hat += 2.0 * autocov_sum(static_cast<std::size_t>(i)) *
             (1.0 - static_cast<double>(i) / (bandwidth + 1.0));
  }
  s_hat /= nd;

  KpssResult out;
  out.lags = bandwidth;
  out.statistic = eta / s_hat;

  constexpr std::array<double, 4> kCrit{0.347, 0.463, 0.574, 0.739};
  constexpr std::array<double, 4> kPval{0.10, 0.05, 0.025, 0.01};
  if (out.statistic <= kCrit.front()) {
    out.p_value = kPval.front();
  } else if (out.statistic >= kCrit.back()) {
    out.p_value = kPval.back();
  } else {
    std::size_t i = 1;
    while (out.statistic > kCrit[i]) ++i;
    const double w = (out.statistic - kCrit[i - 1]) / (kCrit[i] - kCrit[i - 1]);
    out.p_value = kPval[i - 1] + w * (kPval[i] - kPval[i - 1]);
  }
  return out;
}

SummaryStats summarize(std::span<const double> series) {
  SummaryStats s;
  if (series.empty()) return s;
  const auto n = static_cast<double>(series.size());
  s.min = *std::min_element(series.begin(), series.end());
  s.max = *std::max_element(series.begin(), series.end());
  for (double v : series) s.mean += v;
  s.mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : series) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  if (series.size() > 1) s.sd = std::sqrt(m2 / (n - 1.0));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return s;
}

}  // namespace volnet
