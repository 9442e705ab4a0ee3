#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volnet/hybrid.hpp"
#include "volnet/jirf.hpp"
#include "volnet/random.hpp"
#include "volnet/rv.hpp"

namespace volnet {

struct BootstrapConfig {
  int block_length = 50;
  int replications = 1000;
  double ci_level = 0.95;
  std::uint64_t seed = 42;
  /// Replicates whose refit or simulation throws are skipped; more than this
  /// share of failures aborts the run.
  double max_failure_rate = 0.05;
};

void validate(const BootstrapConfig& cfg);

/// Moving-block resample of whole panel rows. Block starts are drawn
/// uniformly from 0..N-block_length; blocks are concatenated and truncated to
/// N rows. Dates are kept as the original sequence. Row offsets where each
/// block begins go to `block_starts` when given. Throws PanelTooShort.
[[nodiscard]] RvPanel block_resample(const RvPanel& panel, int block_length, Rng& rng,
                                     std::vector<Eigen::Index>* block_starts = nullptr);

/// Percentile of sorted data with linear interpolation between order
/// statistics (position q * (n - 1)).
[[nodiscard]] double percentile_sorted(std::span<const double> sorted, double q);

struct JirfBand {
  std::vector<std::string> groups;
  std::vector<std::string> assets;
  int horizon = 0;
  /// One (H+1) x K matrix per group.
  std::vector<Eigen::MatrixXd> point;
  std::vector<Eigen::MatrixXd> lower;
  std::vector<Eigen::MatrixXd> upper;
  std::size_t replications = 0;  // successful replicates
  std::size_t failures = 0;
};

/// Percentile bands for the joint impulse responses. Each replicate resamples
/// the RV panel, refits the two-step model at the full-sample lambdas of
/// `model`, and recomputes the residual covariance, joint shocks and
/// responses. The refit only uses targets whose HAR window lies inside one
/// block, so no regressor mixes rows from both sides of a join. `point` holds the responses of `model` itself. Replicate r
/// draws from stream_seed(cfg.seed, r), so the result is independent of the
/// thread count. Throws BootstrapAborted past the failure threshold.
[[nodiscard]] JirfBand bootstrap_jirf(const RvPanel& rv, const HybridModel& model,
                                      std::span<const ShockGroup> groups, int horizon,
                                      const BootstrapConfig& cfg,
                                      const EnetOptions& enet = HybridConfig{}.enet,
                                      ShockMode mode = ShockMode::kConditionComplement);

}  // namespace volnet
