#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "volnet/hybrid.hpp"
#include "volnet/jirf.hpp"
#include "volnet/rv.hpp"
#include "volnet/synthetic.hpp"

namespace volnet {

/// Shortest decimal text that round-trips to the same double.
[[nodiscard]] std::string format_double(double value);

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
[[nodiscard]] std::string fnv1a_hex(std::string_view data);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

/// `date,<ASSET1>,...,<ASSETK>` with an optional leading
/// `# config_hash=<hex>` comment line.
[[nodiscard]] std::string rv_to_csv(const RvPanel& panel, std::string_view config_hash = {});

/// Parses the format written by rv_to_csv; `#` lines are ignored.
[[nodiscard]] RvPanel rv_from_csv(std::string_view text, std::string_view origin = "rv.csv");
[[nodiscard]] RvPanel load_rv_csv(const std::filesystem::path& path);

/// JSON document with assets, lags, own coefficients, the dense cross tensor
/// (cross[target][source] = [daily, weekly, monthly], null on the diagonal),
/// per-asset lambda, row-major residual covariance and fit metadata.
[[nodiscard]] std::string model_to_json(const HybridModel& model, std::string_view config_hash = {});
[[nodiscard]] HybridModel model_from_json(std::string_view text);
[[nodiscard]] HybridModel load_model(const std::filesystem::path& path);

/// `{ "group name": ["ASSET", ...], ... }` in file order.
[[nodiscard]] std::vector<ShockGroup> groups_from_json(std::string_view text);

/// Synthetic DGP description; see the README for the schema.
[[nodiscard]] SyntheticSpec synthetic_spec_from_json(std::string_view text);

}  // namespace volnet
