#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volnet/date.hpp"
#include "volnet/har.hpp"
#include "volnet/hybrid.hpp"
#include "volnet/rv.hpp"

namespace volnet {

struct PlantedEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  Horizon horizon = Horizon::kDaily;
  double value = 0.0;
};

/// Data-generating process for synthetic RV panels: the two-step model's
/// reduced form driven by Gaussian innovations.
struct SyntheticSpec {
  std::vector<std::string> assets;
  Eigen::Index length = 0;
  std::vector<HarCoefficients> own;
  std::vector<PlantedEdge> edges;
  Eigen::MatrixXd innovation_cov;
  std::uint64_t seed = 0;
  HarLags lags;
  int burn_in = 500;
  double floor = 1e-6;
  Date start = Date::from_ymd(2000, 1, 3);
};

/// The DGP as a HybridModel: own and planted cross loadings, innovation
/// covariance as residual covariance, seed history at the unconditional mean.
/// Throws InvalidArgument on inconsistent sizes.
[[nodiscard]] HybridModel true_model(const SyntheticSpec& spec);

/// Largest eigenvalue modulus of the model's companion matrix.
[[nodiscard]] double spectral_radius(const HybridModel& model);

/// Fixed point of the noise-free recursion. Requires a stable model.
[[nodiscard]] Eigen::VectorXd unconditional_mean(const HybridModel& model);

/// Simulates the DGP forward from its unconditional mean, discards `burn_in`
/// steps and floors values at `spec.floor`. Dates are consecutive weekdays
/// from `spec.start`. Deterministic in `spec.seed`. Throws ExplosiveSpec when
/// any own persistence or the system spectral radius is >= 1.
[[nodiscard]] RvPanel generate_synthetic_panel(const SyntheticSpec& spec);

}  // namespace volnet
