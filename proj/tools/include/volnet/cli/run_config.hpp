#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "volnet/bootstrap.hpp"
#include "volnet/har.hpp"
#include "volnet/jirf.hpp"

namespace volnet::cli {

/// Pipeline settings shared by every subcommand. Command-line flags override
/// the file, which overrides these defaults.
struct RunConfig {
  std::string data_dir;
  std::vector<std::string> assets;
  int yz_window = 30;
  double annualization = 252.0;
  HarLags lags;
  double alpha = 0.5;
  int grid_points = 60;
  double grid_ratio = 1e-4;
  std::vector<double> lambda_values;  // explicit grid; overrides points/ratio
  int cv_folds = 5;
  double split_ratio = 0.8;
  int horizon = 20;
  std::vector<ShockGroup> groups;
  int block_length = 50;
  int replications = 1000;
  double ci_level = 0.95;
  std::uint64_t seed = 42;
};

/// Parses a config document. Unknown keys at any level throw ConfigError.
[[nodiscard]] RunConfig parse_run_config(std::string_view text);

/// Canonical JSON of every field, keys in declaration order.
[[nodiscard]] std::string canonical_json(const RunConfig& cfg);

}  // namespace volnet::cli
