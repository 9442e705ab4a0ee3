#include "volnet/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "volnet/error.hpp"
#include "volnet/parallel.hpp"

namespace volnet {

void validate(const BootstrapConfig& cfg) {
  if (cfg.block_length < 1) throw Error(ErrorCode::kInvalidArgument, "block_length must be >= 1");
  if (cfg.replications < 1) throw Error(ErrorCode::kInvalidArgument, "replications must be >= 1");
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ci_level must lie in (0, 1)");
  }
}

RvPanel block_resample(const RvPanel& panel, int block_length, Rng& rng,
                       std::vector<Eigen::Index>* block_starts) {
  if (block_length < 1) throw Error(ErrorCode::kInvalidArgument, "block_length must be >= 1");
  const auto n = static_cast<Eigen::Index>(panel.rows());
  const Eigen::Index len = block_length;
  if (n < len) {
    throw Error(ErrorCode::kPanelTooShort, "panel has " + std::to_string(n) +
                                               " rows, fewer than the block length");
  }
  const auto starts = static_cast<std::uint64_t>(n - len + 1);
  RvPanel out;
  out.assets = panel.assets;
  out.dates = panel.dates;
  out.values.resize(n, panel.values.cols());
  if (block_starts != nullptr) block_starts->clear();
  for (Eigen::Index filled = 0; filled < n;) {
    if (block_starts != nullptr) block_starts->push_back(filled);
    const auto start = static_cast<Eigen::Index>(rng.below(starts));
    const Eigen::Index take = std::min(len, n - filled);
    out.values.middleRows(filled, take) = panel.values.middleRows(start, take);
    filled += take;
  }
  return out;
}

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::kInvalidArgument, "percentile of empty data");
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

JirfBand bootstrap_jirf(const RvPanel& rv, const HybridModel& model,
                        std::span<const ShockGroup> groups, int horizon,
                        const BootstrapConfig& cfg, const EnetOptions& enet, ShockMode mode) {
  validate(cfg);
  const std::size_t G = groups.size();
  const auto K = static_cast<Eigen::Index>(model.size());
  const Eigen::Index H1 = horizon + 1;

  JirfBand band;
  band.assets = model.assets;
  band.horizon = horizon;
  for (const auto& path : compute_jirfs(model, groups, horizon, mode)) {
    band.groups.push_back(path.group);
    band.point.push_back(path.responses);
  }

  HybridConfig fit_cfg;
  fit_cfg.lags = model.lags;
  fit_cfg.alpha = model.alpha;
  fit_cfg.enet = enet;
  std::vector<std::vector<std::size_t>> members;
  for (const auto& g : groups) members.push_back(resolve_members(model.assets, g));

  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<std::optional<std::vector<Eigen::MatrixXd>>> draws(reps);
  parallel_for(reps, [&](std::size_t r) {
    Rng rng(stream_seed(cfg.seed, r));
    try {
      std::vector<Eigen::Index> joins;
      const RvPanel sample = block_resample(rv, cfg.block_length, rng, &joins);
      const HybridFit refit = fit_hybrid_fixed(sample, fit_cfg, model.selected_lambda, joins);
      std::vector<Eigen::MatrixXd> responses;
      responses.reserve(G);
      for (std::size_t g = 0; g < G; ++g) {
        const Eigen::VectorXd shock = joint_shock(refit.model.residual_cov, members[g], mode);
        responses.push_back(simulate_jirf(refit.model, shock, horizon).responses);
      }
      draws[r] = std::move(responses);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kPanelTooShort) throw;
      draws[r].reset();
    }
  });

  for (const auto& d : draws) {
    if (!d) ++band.failures;
  }
  band.replications = reps - band.failures;
  if (static_cast<double>(band.failures) > cfg.max_failure_rate * static_cast<double>(reps) ||
      band.replications == 0) {
    throw Error(ErrorCode::kBootstrapAborted,
                std::to_string(band.failures) + " of " + std::to_string(reps) +
                    " bootstrap replicates failed");
  }

  const double tail = 0.5 * (1.0 - cfg.ci_level);
  std::vector<double> cell;
  cell.reserve(band.replications);
  for (std::size_t g = 0; g < G; ++g) {
    Eigen::MatrixXd lower(H1, K);
    Eigen::MatrixXd upper(H1, K);
    for (Eigen::Index h = 0; h < H1; ++h) {
      for (Eigen::Index k = 0; k < K; ++k) {
        cell.clear();
        for (const auto& d : draws) {
          if (d) cell.push_back((*d)[g](h, k));
        }
        std::sort(cell.begin(), cell.end());
        lower(h, k) = percentile_sorted(cell, tail);
        upper(h, k) = percentile_sorted(cell, 1.0 - tail);
      }
    }
    band.lower.push_back(std::move(lower));
    band.upper.push_back(std::move(upper));
  }
  return band;
}

}  // namespace volnet
