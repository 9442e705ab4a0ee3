#include "volnet/cli/run_config.hpp"

#include <set>

#include <json.hpp>

#include "volnet/error.hpp"

namespace volnet::cli {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfig, what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) config_error("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& obj, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("bad value for '") + key + "'");
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc,
                 {"data_dir", "assets", "yz_window", "annualization", "har_lags", "alpha",
                  "lambda_grid", "cv_folds", "split_ratio", "jirf_horizon", "shock_groups",
                  "bootstrap", "seed"},
                 "config");

  RunConfig cfg;
  if (doc.contains("data_dir")) cfg.data_dir = get<std::string>(doc, "data_dir");
  if (doc.contains("assets")) cfg.assets = get<std::vector<std::string>>(doc, "assets");
  if (doc.contains("yz_window")) cfg.yz_window = get<int>(doc, "yz_window");
  if (doc.contains("annualization")) cfg.annualization = get<double>(doc, "annualization");
  if (doc.contains("har_lags")) {
    const auto lags = get<std::vector<int>>(doc, "har_lags");
    if (lags.size() != 3) config_error("har_lags needs three entries");
    cfg.lags = {lags[0], lags[1], lags[2]};
  }
  if (doc.contains("alpha")) cfg.alpha = get<double>(doc, "alpha");
  if (doc.contains("lambda_grid")) {
    const json& grid = doc["lambda_grid"];
    reject_unknown(grid, {"points", "ratio", "values"}, "lambda_grid");
    if (grid.contains("points")) cfg.grid_points = get<int>(grid, "points");
    if (grid.contains("ratio")) cfg.grid_ratio = get<double>(grid, "ratio");
    if (grid.contains("values")) cfg.lambda_values = get<std::vector<double>>(grid, "values");
  }
  if (doc.contains("cv_folds")) cfg.cv_folds = get<int>(doc, "cv_folds");
  if (doc.contains("split_ratio")) cfg.split_ratio = get<double>(doc, "split_ratio");
  if (doc.contains("jirf_horizon")) cfg.horizon = get<int>(doc, "jirf_horizon");
  if (doc.contains("shock_groups")) {
    const json& groups = doc["shock_groups"];
    if (!groups.is_object()) config_error("shock_groups must map names to asset lists");
    for (const auto& [name, members] : groups.items()) {
      try {
        cfg.groups.push_back({name, members.get<std::vector<std::string>>()});
      } catch (const json::exception&) {
        config_error("shock group '" + name + "' must be a list of asset names");
      }
    }
  }
  if (doc.contains("bootstrap")) {
    const json& boot = doc["bootstrap"];
    reject_unknown(boot, {"block", "reps", "ci"}, "bootstrap");
    if (boot.contains("block")) cfg.block_length = get<int>(boot, "block");
    if (boot.contains("reps")) cfg.replications = get<int>(boot, "reps");
    if (boot.contains("ci")) cfg.ci_level = get<double>(boot, "ci");
  }
  if (doc.contains("seed")) cfg.seed = get<std::uint64_t>(doc, "seed");

  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) config_error("alpha must lie in [0, 1]");
  if (!(cfg.split_ratio > 0.0 && cfg.split_ratio < 1.0)) config_error("split_ratio must lie in (0, 1)");
  if (cfg.horizon < 0) config_error("jirf_horizon must be >= 0");
  if (cfg.cv_folds < 2) config_error("cv_folds must be >= 2");
  return cfg;
}

std::string canonical_json(const RunConfig& cfg) {
  json doc;
  doc["data_dir"] = cfg.data_dir;
  doc["assets"] = cfg.assets;
  doc["yz_window"] = cfg.yz_window;
  doc["annualization"] = cfg.annualization;
  doc["har_lags"] = {cfg.lags.daily, cfg.lags.weekly, cfg.lags.monthly};
  doc["alpha"] = cfg.alpha;
  doc["lambda_grid"] = {{"points", cfg.grid_points}, {"ratio", cfg.grid_ratio},
                        {"values", cfg.lambda_values}};
  doc["cv_folds"] = cfg.cv_folds;
  doc["split_ratio"] = cfg.split_ratio;
  doc["jirf_horizon"] = cfg.horizon;
  json groups = json::object();
  for (const auto& g : cfg.groups) groups[g.name] = g.members;
  doc["shock_groups"] = groups;
  doc["bootstrap"] = {{"block", cfg.block_length}, {"reps", cfg.replications}, {"ci", cfg.ci_level}};
  doc["seed"] = cfg.seed;
  return doc.dump();
}

}  // namespace volnet::cli
