#include "volnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

#include "volnet/error.hpp"

namespace volnet {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_model(const std::string& what) {
  throw Error(ErrorCode::kModelFormat, what);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = line.find(sep, begin);
    std::string field(line.substr(begin, end == std::string_view::npos ? end : end - begin));
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(std::move(field));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return out;
}

ordered_json matrix_rows(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_matrix(const ordered_json& rows, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != static_cast<std::size_t>(cols)) bad_model("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

HarLags lags_from(const ordered_json& j) {
  HarLags lags;
  lags.daily = j.at("daily").get<int>();
  lags.weekly = j.at("weekly").get<int>();
  lags.monthly = j.at("monthly").get<int>();
  validate(lags);
  return lags;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string rv_to_csv(const RvPanel& panel, std::string_view config_hash) {
  std::string out;
  if (!config_hash.empty()) {
    out += "# config_hash=";
    out += config_hash;
    out += '\n';
  }
  out += "date";
  for (const auto& a : panel.assets) out += ',' + a;
  out += '\n';
  for (std::size_t t = 0; t < panel.rows(); ++t) {
    out += panel.dates[t].iso();
    for (Eigen::Index k = 0; k < panel.values.cols(); ++k) {
      out += ',';
      out += format_double(panel.values(static_cast<Eigen::Index>(t), k));
    }
    out += '\n';
  }
  return out;
}

RvPanel rv_from_csv(std::string_view text, std::string_view origin) {
  RvPanel panel;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  const auto fail = [&](ErrorCode code, const std::string& why) {
    return Error(code, std::string(origin) + ": line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, ',');
    if (!have_header) {
      if (fields.size() < 2 || fields.front() != "date") {
        throw fail(ErrorCode::kMissingColumn, "expected header date,<ASSET>,...");
      }
      panel.assets.assign(fields.begin() + 1, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != panel.assets.size() + 1) throw fail(ErrorCode::kUnparseableRow, "column count");
    const auto date = Date::parse_iso(fields[0]);
    if (!date) throw fail(ErrorCode::kUnparseableRow, "bad date");
    if (!panel.dates.empty() && !(panel.dates.back() < *date)) {
      throw fail(ErrorCode::kDuplicateDate, "dates must be strictly increasing");
    }
    std::vector<double> row;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      double v = 0.0;
      const auto* end = fields[k].data() + fields[k].size();
      const auto [ptr, ec] = std::from_chars(fields[k].data(), end, v);
      if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw fail(ErrorCode::kUnparseableRow, "bad number '" + fields[k] + "'");
      }
      row.push_back(v);
    }
    panel.dates.push_back(*date);
    rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorCode::kMissingColumn, std::string(origin) + ": no header");
  panel.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(panel.assets.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t k = 0; k < rows[t].size(); ++k) {
      panel.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = rows[t][k];
    }
  }
  return panel;
}

RvPanel load_rv_csv(const std::filesystem::path& path) {
  return rv_from_csv(read_file(path), path.string());
}

std::string model_to_json(const HybridModel& model, std::string_view config_hash) {
  const std::size_t K = model.size();
  ordered_json j;
  j["format"] = "volnet-hybrid-model";
  j["version"] = 1;
  j["assets"] = model.assets;
  j["lags"] = {{"daily", model.lags.daily}, {"weekly", model.lags.weekly},
               {"monthly", model.lags.monthly}};
  j["alpha"] = model.alpha;

  ordered_json own = ordered_json::array();
  for (std::size_t i = 0; i < K; ++i) {
    const auto& c = model.own[i];
    own.push_back({{"asset", model.assets[i]},
                   {"intercept", c.intercept},
                   {"beta_d", c.beta_d},
                   {"beta_w", c.beta_w},
                   {"beta_m", c.beta_m},
                   {"persistence", persistence(c)}});
  }
  j["own"] = std::move(own);

  ordered_json cross = ordered_json::array();
  for (std::size_t i = 0; i < K; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t s = 0; s < K; ++s) {
      if (s == i) {
        row.push_back(nullptr);
        continue;
      }
      row.push_back({model.cross_coef(i, s, Horizon::kDaily), model.cross_coef(i, s, Horizon::kWeekly),
                     model.cross_coef(i, s, Horizon::kMonthly)});
    }
    cross.push_back(std::move(row));
  }
  j["cross"] = std::move(cross);
  j["cross_intercept"] = model.cross_intercept;
  j["selected_lambda"] = model.selected_lambda;

  std::vector<double> cov;
  for (Eigen::Index r = 0; r < model.residual_cov.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.residual_cov.cols(); ++c) cov.push_back(model.residual_cov(r, c));
  }
  j["residual_cov"] = cov;
  j["seed_history"] = matrix_rows(model.seed_history);
  j["metadata"] = {{"sample_start", model.sample_start.iso()},
                   {"sample_end", model.sample_end.iso()},
                   {"observations", model.observations},
                   {"feature_ordering", std::string(kFeatureOrdering)},
                   {"config_hash", std::string(config_hash)}};
  return j.dump(2) + "\n";
}

HybridModel model_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad_model(std::string("model JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "volnet-hybrid-model") bad_model("not a volnet model file");
    if (j.at("metadata").at("feature_ordering") != kFeatureOrdering) {
      bad_model("unsupported feature ordering");
    }
    HybridModel model;
    model.assets = j.at("assets").get<std::vector<std::string>>();
    const std::size_t K = model.assets.size();
    const auto k = static_cast<Eigen::Index>(K);
    model.lags = lags_from(j.at("lags"));
    model.alpha = j.at("alpha").get<double>();
    const auto& own = j.at("own");
    const auto& cross = j.at("cross");
    if (own.size() != K || cross.size() != K) bad_model("own/cross size differs from assets");
    for (const auto& c : own) {
      model.own.push_back({c.at("intercept").get<double>(), c.at("beta_d").get<double>(),
                           c.at("beta_w").get<double>(), c.at("beta_m").get<double>()});
    }
    for (std::size_t i = 0; i < K; ++i) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(3 * (k - 1));
      if (cross[i].size() != K) bad_model("cross row size differs from assets");
      for (std::size_t s = 0; s < K; ++s) {
        if (s == i) {
          if (!cross[i][s].is_null()) bad_model("cross diagonal must be null");
          continue;
        }
        const auto& triple = cross[i][s];
        if (triple.size() != 3) bad_model("cross entries need 3 horizons");
        for (int h = 0; h < 3; ++h) {
          row(HybridModel::cross_index(i, s, static_cast<Horizon>(h))) =
              triple[static_cast<std::size_t>(h)].get<double>();
        }
      }
      model.cross.push_back(std::move(row));
    }
    model.cross_intercept = j.at("cross_intercept").get<std::vector<double>>();
    model.selected_lambda = j.at("selected_lambda").get<std::vector<double>>();
    const auto cov = j.at("residual_cov").get<std::vector<double>>();
    if (model.cross_intercept.size() != K || model.selected_lambda.size() != K ||
        cov.size() != K * K) {
      bad_model("per-asset arrays have the wrong length");
    }
    model.residual_cov = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                        Eigen::RowMajor>>(cov.data(), k, k);
    model.seed_history = rows_matrix(j.at("seed_history"), k);
    const auto& meta = j.at("metadata");
    const auto start = Date::parse_iso(meta.at("sample_start").get<std::string>());
    const auto end = Date::parse_iso(meta.at("sample_end").get<std::string>());
    if (!start || !end) bad_model("bad sample dates");
    model.sample_start = *start;
    model.sample_end = *end;
    model.observations = meta.at("observations").get<Eigen::Index>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    bad_model(std::string("model JSON: ") + e.what());
  }
}

HybridModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_file(path));
}

std::vector<ShockGroup> groups_from_json(std::string_view text) {
  try {
    const auto j = ordered_json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::kConfig, "groups file must be a JSON object");
    std::vector<ShockGroup> groups;
    for (const auto& [name, members] : j.items()) {
      groups.push_back({name, members.get<std::vector<std::string>>()});
    }
    return groups;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("groups JSON: ") + e.what());
  }
}

SyntheticSpec synthetic_spec_from_json(std::string_view text) {
  static const std::vector<std::string> kKeys{"assets", "length", "own", "edges", "innovation_cov",
                                              "seed", "lags", "burn_in", "floor", "start"};
  try {
    const auto j = ordered_json::parse(text);
    for (const auto& [key, value] : j.items()) {
      if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
        throw Error(ErrorCode::kConfig, "synthetic spec: unknown key '" + key + "'");
      }
    }
    SyntheticSpec spec;
    spec.assets = j.at("assets").get<std::vector<std::string>>();
    const auto k = static_cast<Eigen::Index>(spec.assets.size());
    spec.length = j.at("length").get<Eigen::Index>();
    for (const auto& c : j.at("own")) {
      spec.own.push_back({c.at("intercept").get<double>(), c.at("beta_d").get<double>(),
                          c.at("beta_w").get<double>(), c.at("beta_m").get<double>()});
    }
    const auto index_of = [&](const std::string& name) {
      const auto it = std::find(spec.assets.begin(), spec.assets.end(), name);
      if (it == spec.assets.end()) throw Error(ErrorCode::kConfig, "edge names unknown asset " + name);
      return static_cast<std::size_t>(it - spec.assets.begin());
    };
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        spec.edges.push_back({index_of(e.at("source").get<std::string>()),
                              index_of(e.at("target").get<std::string>()),
                              parse_horizon(e.at("horizon").get<std::string>()),
                              e.at("value").get<double>()});
      }
    }
    spec.innovation_cov = rows_matrix(j.at("innovation_cov"), k);
    spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("lags")) spec.lags = lags_from(j.at("lags"));
    if (j.contains("burn_in")) spec.burn_in = j.at("burn_in").get<int>();
    if (j.contains("floor")) spec.floor = j.at("floor").get<double>();
    if (j.contains("start")) {
      const auto d = Date::parse_iso(j.at("start").get<std::string>());
      if (!d) throw Error(ErrorCode::kConfig, "synthetic spec: bad start date");
      spec.start = *d;
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("synthetic spec JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kModelFormat) throw Error(ErrorCode::kConfig, e.what());
    throw;
  }
}

}  // namespace volnet
