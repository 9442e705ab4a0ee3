#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volnet/hybrid.hpp"

namespace volnet {

/// Named set of assets shocked together.
struct ShockGroup {
  std::string name;
  std::vector<std::string> members;
};

/// Column indices of the group's members in `assets`. Throws InvalidArgument
/// for an empty group, unknown members or duplicates.
[[nodiscard]] std::vector<std::size_t> resolve_members(std::span<const std::string> assets,
                                                       const ShockGroup& group);

enum class ShockMode {
  /// Every member moves one own standard deviation; non-members take their
  /// conditional mean given the members' moves.
  kConditionComplement,
  /// Only the group: the first member moves one standard deviation, the other
  /// members take their conditional mean given the first; non-members stay 0.
  kLeadConditioned,
};

/// Contemporaneous joint shock implied by the residual covariance. A ridge of
/// 1e-10 * trace is added when the members' block has condition number above
/// 1e12; SingularSubmatrix is thrown if that does not help.
[[nodiscard]] Eigen::VectorXd joint_shock(const Eigen::Ref<const Eigen::MatrixXd>& sigma,
                                          std::span<const std::size_t> members,
                                          ShockMode mode = ShockMode::kConditionComplement);

struct JirfPath {
  std::string group;
  /// (H+1) x K; row h is the response of each asset h steps after impact.
  Eigen::MatrixXd responses;
};

/// Persistence at or above which simulation is refused.
inline constexpr double kExplosivePersistence = 1.05;

/// Difference between a shocked and a baseline noise-free forward
/// simulation from the same seed history. The shocked path adds `shock` to
/// the horizon-0 value; row 0 of the response is the shock itself. With no
/// `seed_history` the model's stored one is used. Responses are not clamped.
/// Throws ExplosiveModel, HistoryTooShort or NonFiniteSimulation.
[[nodiscard]] JirfPath simulate_jirf(const HybridModel& model,
                                     const Eigen::Ref<const Eigen::VectorXd>& shock, int horizon,
                                     const Eigen::MatrixXd* seed_history = nullptr);

/// Noise-free level path for `steps` steps after the seed history, with an
/// optional impulse added at step 0. Values below zero are clamped to zero and
/// counted in `clamped`.
[[nodiscard]] Eigen::MatrixXd simulate_levels(const HybridModel& model,
                                              const Eigen::Ref<const Eigen::MatrixXd>& seed_history,
                                              int steps, const Eigen::VectorXd* impulse = nullptr,
                                              std::size_t* clamped = nullptr);

/// Joint shock plus simulation for each group, using the model's residual
/// covariance and seed history.
[[nodiscard]] std::vector<JirfPath> compute_jirfs(const HybridModel& model,
                                                  std::span<const ShockGroup> groups, int horizon,
                                                  ShockMode mode = ShockMode::kConditionComplement);

}  // namespace volnet
