#include "volnet/cli/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "volnet/bootstrap.hpp"
#include "volnet/cli/run_config.hpp"
#include "volnet/diagnostics.hpp"
#include "volnet/error.hpp"
#include "volnet/forecast.hpp"
#include "volnet/hybrid.hpp"
#include "volnet/ingest.hpp"
#include "volnet/io.hpp"
#include "volnet/jirf.hpp"
#include "volnet/parallel.hpp"
#include "volnet/rv.hpp"
#include "volnet/synthetic.hpp"

namespace volnet::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Raw flag values; optionals stay empty unless given on the command line.
struct Flags {
  std::string config;
  std::string data_dir;
  std::vector<std::string> assets;
  std::string rv;
  std::string model;
  std::string groups;
  std::string spec;
  std::string out;
  std::string out_dir;
  std::string mode = "complement";
  std::optional<int> window;
  std::optional<double> annualization;
  std::optional<double> alpha;
  std::optional<double> split;
  std::optional<int> horizon;
  std::optional<int> reps;
  std::optional<int> block;
  std::optional<double> ci;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

RunConfig effective_config(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : parse_run_config(read_file(f.config));
  if (!f.data_dir.empty()) cfg.data_dir = f.data_dir;
  if (!f.assets.empty()) cfg.assets = f.assets;
  if (f.window) cfg.yz_window = *f.window;
  if (f.annualization) cfg.annualization = *f.annualization;
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.split) cfg.split_ratio = *f.split;
  if (f.horizon) cfg.horizon = *f.horizon;
  if (f.reps) cfg.replications = *f.reps;
  if (f.block) cfg.block_length = *f.block;
  if (f.ci) cfg.ci_level = *f.ci;
  if (f.seed) cfg.seed = *f.seed;
  if (!f.groups.empty()) cfg.groups = groups_from_json(read_file(f.groups));
  return cfg;
}

/// Digest of everything that determines an output: the command, the
/// effective config, mode flags and the bytes of each input file.
std::string config_hash(std::string_view command, const RunConfig& cfg, const Flags& f,
                        std::initializer_list<std::string_view> inputs) {
  json doc;
  doc["command"] = command;
  doc["config"] = json::parse(canonical_json(cfg));
  doc["mode"] = f.mode;
  json digests = json::array();
  for (const auto path : inputs) {
    if (!path.empty()) digests.push_back(fnv1a_hex(read_file(fs::path(path))));
  }
  doc["inputs"] = digests;
  return fnv1a_hex(doc.dump());
}

HybridConfig hybrid_config(const RunConfig& cfg) {
  HybridConfig h;
  h.lags = cfg.lags;
  h.alpha = cfg.alpha;
  h.cv_folds = cfg.cv_folds;
  h.grid_points = cfg.grid_points;
  h.grid_ratio = cfg.grid_ratio;
  h.lambda_grid = cfg.lambda_values;
  return h;
}

BootstrapConfig bootstrap_config(const RunConfig& cfg) {
  BootstrapConfig b;
  b.block_length = cfg.block_length;
  b.replications = cfg.replications;
  b.ci_level = cfg.ci_level;
  b.seed = cfg.seed;
  return b;
}

ShockMode parse_mode(const std::string& mode) {
  if (mode == "complement") return ShockMode::kConditionComplement;
  if (mode == "lead") return ShockMode::kLeadConditioned;
  throw Error(ErrorCode::kInvalidArgument, "unknown shock mode '" + mode + "'");
}

// Without configured groups every asset is shocked on its own.
std::vector<ShockGroup> groups_or_singletons(const RunConfig& cfg,
                                             const std::vector<std::string>& assets) {
  if (!cfg.groups.empty()) return cfg.groups;
  std::vector<ShockGroup> out;
  for (const auto& a : assets) out.push_back({a, {a}});
  return out;
}

std::string hash_line(std::string_view hash) { return "# config_hash=" + std::string(hash) + "\n"; }

void report_warnings(const Io& io, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) io.err << "warning: " << w << "\n";
}

RvPanel panel_from_ohlc(const RunConfig& cfg, const Io& io) {
  if (cfg.data_dir.empty()) throw Error(ErrorCode::kConfig, "no data directory given");
  const OhlcPanel ohlc = load_panel_dir(cfg.data_dir, cfg.assets);
  std::size_t clamped = 0;
  RvPanel rv = yang_zhang_panel(ohlc, {cfg.yz_window, cfg.annualization}, &clamped);
  if (clamped > 0) io.err << "warning: " << clamped << " negative YZ variances clamped to 0\n";
  return rv;
}

// ---- tabular writers -------------------------------------------------------

std::string jirf_csv(const std::vector<JirfPath>& paths, const std::vector<std::string>& assets,
                     std::string_view hash) {
  std::string s = hash_line(hash) + "group,asset,horizon,response\n";
  for (const auto& p : paths) {
    for (Eigen::Index h = 0; h < p.responses.rows(); ++h) {
      for (std::size_t k = 0; k < assets.size(); ++k) {
        s += p.group + "," + assets[k] + "," + std::to_string(h) + "," +
             format_double(p.responses(h, static_cast<Eigen::Index>(k))) + "\n";
      }
    }
  }
  return s;
}

std::string band_csv(const JirfBand& band, std::string_view hash) {
  std::string s = hash_line(hash) + "group,asset,horizon,point,lower,upper\n";
  for (std::size_t g = 0; g < band.groups.size(); ++g) {
    for (Eigen::Index h = 0; h <= band.horizon; ++h) {
      for (std::size_t k = 0; k < band.assets.size(); ++k) {
        const auto c = static_cast<Eigen::Index>(k);
        s += band.groups[g] + "," + band.assets[k] + "," + std::to_string(h) + "," +
             format_double(band.point[g](h, c)) + "," + format_double(band.lower[g](h, c)) + "," +
             format_double(band.upper[g](h, c)) + "\n";
      }
    }
  }
  return s;
}

std::string edges_csv(const NetworkSummary& net, std::string_view hash) {
  std::string s = hash_line(hash) + "source,target,horizon,coefficient\n";
  for (const auto& e : net.edges) {
    s += e.source + "," + e.target + "," + std::string(horizon_name(e.horizon)) + "," +
         format_double(e.coefficient) + "\n";
  }
  return s;
}

std::string mape_text(double mape) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", mape);
  return buf;
}

std::string metrics_rows(const ForecastReport& r) {
  std::string s;
  auto row = [&](const std::string& asset, const ForecastMetrics& m) {
    s += r.model_label + "," + asset + "," + format_double(m.rmse) + "," + format_double(m.mae) +
         "," + mape_text(m.mape) + "\n";
  };
  for (std::size_t k = 0; k < r.assets.size(); ++k) row(r.assets[k], r.per_asset[k]);
  row("average", r.average);
  return s;
}

// Rows are source features (asset_horizon), columns are targets; the
// diagonal blocks hold the OLS own coefficients.
std::string coefficient_matrix_csv(const HybridModel& m, std::string_view hash) {
  std::string s = hash_line(hash) + "feature";
  for (const auto& a : m.assets) s += "," + a;
  s += "\n";
  for (std::size_t j = 0; j < m.size(); ++j) {
    for (int h = 0; h < 3; ++h) {
      const auto horizon = static_cast<Horizon>(h);
      s += m.assets[j] + "_" + std::string(horizon_name(horizon));
      for (std::size_t i = 0; i < m.size(); ++i) {
        double v = 0.0;
        if (i == j) {
          const auto& c = m.own[i];
          v = h == 0 ? c.beta_d : (h == 1 ? c.beta_w : c.beta_m);
        } else {
          v = m.cross_coef(i, j, horizon);
        }
        s += "," + format_double(v);
      }
      s += "\n";
    }
  }
  return s;
}

struct Forecasts {
  ForecastReport hybrid;
  ForecastReport har;
};

Forecasts run_forecasts(const RvPanel& rv, const RunConfig& cfg, const Io& io) {
  const auto [train, test] = split_train_test(rv, cfg.split_ratio);
  const HybridFit fit = fit_hybrid(train, hybrid_config(cfg));
  report_warnings(io, fit.warnings);
  const auto har = fit_har_set(train, cfg.lags);
  const std::size_t start = train.rows();
  Forecasts f{evaluate_forecasts("hybrid", rv, start, rolling_forecast(fit.model, rv, start)),
              evaluate_forecasts("har", rv, start, rolling_forecast(har, cfg.lags, rv, start))};
  return f;
}

json diagnostics_json(const RvPanel& rv) {
  json out = json::array();
  for (std::size_t k = 0; k < rv.cols(); ++k) {
    const Eigen::VectorXd col = rv.values.col(static_cast<Eigen::Index>(k));
    const std::span<const double> series(col.data(), static_cast<std::size_t>(col.size()));
    const SummaryStats st = summarize(series);
    const AdfResult adf = adf_test(series);
    const KpssResult kpss = kpss_test(series);
    out.push_back({{"asset", rv.assets[k]},
                   {"mean", st.mean},
                   {"sd", st.sd},
                   {"min", st.min},
                   {"max", st.max},
                   {"skewness", st.skewness},
                   {"excess_kurtosis", st.excess_kurtosis},
                   {"adf_stat", adf.statistic},
                   {"adf_p", adf.p_value},
                   {"adf_lags", adf.lags},
                   {"kpss_stat", kpss.statistic},
                   {"kpss_p", kpss.p_value},
                   {"kpss_lags", kpss.lags}});
  }
  return out;
}

json metrics_json(const ForecastReport& r) {
  json per = json::object();
  auto one = [](const ForecastMetrics& m) {
    return json{{"rmse", m.rmse}, {"mae", m.mae}, {"mape", m.mape}};
  };
  for (std::size_t k = 0; k < r.assets.size(); ++k) per[r.assets[k]] = one(r.per_asset[k]);
  return {{"per_asset", per}, {"average", one(r.average)}};
}

// ---- subcommands -------------------------------------------------------------

void cmd_rv(const Flags& f, const Io& io) {
  const RunConfig cfg = effective_config(f);
  const std::string hash = config_hash("rv", cfg, f, {});
  const RvPanel rv = panel_from_ohlc(cfg, io);
  write_file_atomic(f.out, rv_to_csv(rv, hash));
  io.out << "wrote " << rv.rows() << " rows x " << rv.cols() << " assets to " << f.out << "\n";
}

void cmd_fit(const Flags& f, const Io& io) {
  const RunConfig cfg = effective_config(f);
  const std::string hash = config_hash("fit", cfg, f, {f.rv});
  const RvPanel rv = load_rv_csv(f.rv);
  const HybridFit fit = fit_hybrid(rv, hybrid_config(cfg));
  report_warnings(io, fit.warnings);
  write_file_atomic(f.out, model_to_json(fit.model, hash));
  const NetworkSummary net = spillover_network(fit.model);
  io.out << "fitted " << rv.cols() << " assets on " << fit.model.observations << " rows; "
         << net.edges.size() << " cross edges, sparsity " << format_double(net.sparsity) << "\n";
}

void cmd_network(const Flags& f, const Io& io) {
  const RunConfig cfg = effective_config(f);
  const std::string hash = config_hash("network", cfg, f, {f.model});
  const NetworkSummary net = spillover_network(load_model(f.model));
  write_file_atomic(f.out, edges_csv(net, hash));
  io.out << net.edges.size() << " edges, sparsity " << format_double(net.sparsity) << "\n";
}

void cmd_jirf(const Flags& f, const Io& io) {
  const RunConfig cfg = effective_config(f);
  const std::string hash = config_hash("jirf", cfg, f, {f.model, f.groups});
  const HybridModel model = load_model(f.model);
  const auto groups = groups_or_singletons(cfg, model.assets);
  const auto paths = compute_jirfs(model, groups, cfg.horizon, parse_mode(f.mode));
  write_file_atomic(f.out, jirf_csv(paths, model.assets, hash));
  io.out << "wrote " << paths.size() << " response paths to " << f.out << "\n";
}

void cmd_bootstrap(const Flags& f, const Io& io) {
  const RunConfig cfg = effective_config(f);
  const std::string hash = config_hash("bootstrap", cfg, f, {f.rv, f.model, f.groups});
  const RvPanel rv = load_rv_csv(f.rv);
  const HybridModel model = load_model(f.model);
  if (rv.assets != model.assets) {
    throw Error(ErrorCode::kLengthMismatch, "RV panel assets differ from the model's");
  }
  const auto groups = groups_or_singletons(cfg, model.assets);
  const JirfBand band = bootstrap_jirf(rv, model, groups, cfg.horizon, bootstrap_config(cfg),
                                       hybrid_config(cfg).enet, parse_mode(f.mode));
  write_file_atomic(f.out, band_csv(band, hash));
  io.out << band.replications << " replicates, " << band.failures << " failed\n";
}

void cmd_forecast(const Flags& f, const Io& io) {
  const RunConfig cfg = effective_config(f);
  const std::string hash = config_hash("forecast", cfg, f, {f.rv});
  const RvPanel rv = load_rv_csv(f.rv);
  const Forecasts fc = run_forecasts(rv, cfg, io);
  write_file_atomic(f.out, hash_line(hash) + "model,asset,rmse,mae,mape\n" +
                               metrics_rows(fc.hybrid) + metrics_rows(fc.har));
  const double diff = 100.0 * (fc.hybrid.average.rmse - fc.har.average.rmse) / fc.har.average.rmse;
  io.out << "test " << fc.hybrid.test_start.iso() << ".." << fc.hybrid.test_end.iso()
         << "; average RMSE hybrid " << format_double(fc.hybrid.average.rmse) << ", HAR "
         << format_double(fc.har.average.rmse) << " (" << mape_text(diff) << "%)\n";
}

void cmd_diagnose(const Flags& f, const Io& io) {
  const RunConfig cfg = effective_config(f);
  const std::string hash = config_hash("diagnose", cfg, f, {f.rv});
  const RvPanel rv = load_rv_csv(f.rv);
  const json rows = diagnostics_json(rv);
  std::string s = hash_line(hash) +
                  "asset,mean,sd,min,max,skewness,excess_kurtosis,adf_stat,adf_p,adf_lags,"
                  "kpss_stat,kpss_p,kpss_lags\n";
  for (const auto& r : rows) {
    s += r["asset"].get<std::string>();
    for (const char* key : {"mean", "sd", "min", "max", "skewness", "excess_kurtosis", "adf_stat",
                            "adf_p"}) {
      s += "," + format_double(r[key].get<double>());
    }
    s += "," + std::to_string(r["adf_lags"].get<int>());
    s += "," + format_double(r["kpss_stat"].get<double>());
    s += "," + format_double(r["kpss_p"].get<double>());
    s += "," + std::to_string(r["kpss_lags"].get<int>()) + "\n";
  }
  write_file_atomic(f.out, s);
  io.out << "diagnosed " << rv.cols() << " series\n";
}

void cmd_simulate(const Flags& f, const Io& io) {
  const RunConfig cfg = effective_config(f);
  const std::string hash = config_hash("simulate", cfg, f, {f.spec});
  SyntheticSpec spec = synthetic_spec_from_json(read_file(f.spec));
  if (f.seed) spec.seed = *f.seed;
  const RvPanel rv = generate_synthetic_panel(spec);
  write_file_atomic(f.out, rv_to_csv(rv, hash));
  io.out << "simulated " << rv.rows() << " rows x " << rv.cols() << " assets\n";
}

void cmd_report(const Flags& f, const Io& io) {
  const RunConfig cfg = effective_config(f);
  const std::string hash = config_hash("report", cfg, f, {f.rv});
  const RvPanel rv = f.rv.empty() ? panel_from_ohlc(cfg, io) : load_rv_csv(f.rv);

  const HybridFit fit = fit_hybrid(rv, hybrid_config(cfg));
  report_warnings(io, fit.warnings);
  const NetworkSummary net = spillover_network(fit.model);
  const auto groups = groups_or_singletons(cfg, rv.assets);
  const ShockMode mode = parse_mode(f.mode);
  const JirfBand band = bootstrap_jirf(rv, fit.model, groups, cfg.horizon, bootstrap_config(cfg),
                                       hybrid_config(cfg).enet, mode);
  const Forecasts fc = run_forecasts(rv, cfg, io);

  const fs::path dir = f.out_dir;
  fs::create_directories(dir);
  write_file_atomic(dir / "rv_series.csv", rv_to_csv(rv, hash));
  write_file_atomic(dir / "coefficient_matrix.csv", coefficient_matrix_csv(fit.model, hash));
  write_file_atomic(dir / "jirf_bands.csv", band_csv(band, hash));

  json edges = json::array();
  for (const auto& e : net.edges) {
    edges.push_back({{"source", e.source},
                     {"target", e.target},
                     {"horizon", horizon_name(e.horizon)},
                     {"coefficient", e.coefficient}});
  }
  json bundle;
  bundle["config_hash"] = hash;
  bundle["config"] = json::parse(canonical_json(cfg));
  bundle["sample"] = {{"start", rv.dates.front().iso()},
                      {"end", rv.dates.back().iso()},
                      {"rows", rv.rows()}};
  bundle["model"] = json::parse(model_to_json(fit.model, hash));
  bundle["network"] = {{"edges", edges},
                       {"sparsity", net.sparsity},
                       {"out_strength", net.out_strength},
                       {"in_strength", net.in_strength}};
  bundle["bootstrap"] = {{"replications", band.replications}, {"failures", band.failures}};
  bundle["forecast"] = {{"test_start", fc.hybrid.test_start.iso()},
                        {"test_end", fc.hybrid.test_end.iso()},
                        {"hybrid", metrics_json(fc.hybrid)},
                        {"har", metrics_json(fc.har)}};
  bundle["diagnostics"] = diagnostics_json(rv);
  bundle["figures"] = {{"rv_series", "rv_series.csv"},
                       {"coefficient_matrix", "coefficient_matrix.csv"},
                       {"jirf_bands", "jirf_bands.csv"}};
  write_file_atomic(dir / "report.json", bundle.dump(2) + "\n");
  io.out << "report written to " << dir.string() << "\n";
}

// ---- option wiring -----------------------------------------------------------

CLI::App* add_command(CLI::App& app, const char* name, const char* about, Flags& f) {
  CLI::App* sub = app.add_subcommand(name, about);
  sub->fallthrough();
  sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  return sub;
}

void add_out(CLI::App* sub, Flags& f) {
  sub->add_option("--out", f.out, "output file")->required();
}

void add_mode(CLI::App* sub, Flags& f) {
  sub->add_option("--mode", f.mode, "joint shock construction")
      ->check(CLI::IsMember({"complement", "lead"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Sparse volatility spillover networks from daily OHLC data", "volnet"};
  app.require_subcommand(1);
  app.add_option("--threads", f.threads, "worker threads (default: VOLNET_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  CLI::App* rv = add_command(app, "rv", "Yang-Zhang realized volatility panel", f);
  rv->add_option("--data-dir", f.data_dir, "directory of <ASSET>.csv OHLC files");
  rv->add_option("--assets", f.assets, "asset subset and order")->delimiter(',');
  rv->add_option("--window", f.window, "rolling window in days")->check(CLI::PositiveNumber);
  rv->add_option("--annualization", f.annualization, "trading days per year");
  add_out(rv, f);

  CLI::App* fit = add_command(app, "fit", "fit the two-step HAR + ElasticNet model", f);
  fit->add_option("--rv", f.rv, "RV panel CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--alpha", f.alpha, "ElasticNet L1 ratio");
  add_out(fit, f);

  CLI::App* forecast = add_command(app, "forecast", "out-of-sample hybrid vs HAR metrics", f);
  forecast->add_option("--rv", f.rv, "RV panel CSV")->required()->check(CLI::ExistingFile);
  forecast->add_option("--split", f.split, "training share");
  add_out(forecast, f);

  CLI::App* network = add_command(app, "network", "edge list of a fitted model", f);
  network->add_option("--model", f.model, "model JSON")->required()->check(CLI::ExistingFile);
  add_out(network, f);

  CLI::App* jirf = add_command(app, "jirf", "joint impulse responses", f);
  jirf->add_option("--model", f.model, "model JSON")->required()->check(CLI::ExistingFile);
  jirf->add_option("--groups", f.groups, "shock groups JSON")->check(CLI::ExistingFile);
  jirf->add_option("--horizon", f.horizon, "steps after impact")->check(CLI::NonNegativeNumber);
  add_mode(jirf, f);
  add_out(jirf, f);

  CLI::App* boot = add_command(app, "bootstrap", "block-bootstrap bands for the responses", f);
  boot->add_option("--rv", f.rv, "RV panel CSV")->required()->check(CLI::ExistingFile);
  boot->add_option("--model", f.model, "model JSON")->required()->check(CLI::ExistingFile);
  boot->add_option("--groups", f.groups, "shock groups JSON")->check(CLI::ExistingFile);
  boot->add_option("--horizon", f.horizon, "steps after impact")->check(CLI::NonNegativeNumber);
  boot->add_option("--reps", f.reps, "replications")->check(CLI::PositiveNumber);
  boot->add_option("--block", f.block, "block length in rows")->check(CLI::PositiveNumber);
  boot->add_option("--ci", f.ci, "band coverage level");
  boot->add_option("--seed", f.seed, "master seed");
  add_mode(boot, f);
  add_out(boot, f);

  CLI::App* diagnose = add_command(app, "diagnose", "summary statistics and ADF/KPSS tests", f);
  diagnose->add_option("--rv", f.rv, "RV panel CSV")->required()->check(CLI::ExistingFile);
  add_out(diagnose, f);

  CLI::App* simulate = add_command(app, "simulate", "synthetic RV panel from a known system", f);
  simulate->add_option("--spec", f.spec, "synthetic spec JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", f.seed, "overrides the spec's seed");
  add_out(simulate, f);

  CLI::App* report = add_command(app, "report", "full pipeline: JSON bundle plus figure CSVs", f);
  auto* report_rv = report->add_option("--rv", f.rv, "RV panel CSV")->check(CLI::ExistingFile);
  report->add_option("--data-dir", f.data_dir, "OHLC directory (when no --rv)")
      ->excludes(report_rv);
  report->add_option("--assets", f.assets, "asset subset and order")->delimiter(',');
  report->add_option("--reps", f.reps, "bootstrap replications")->check(CLI::PositiveNumber);
  report->add_option("--seed", f.seed, "master seed");
  add_mode(report, f);
  report->add_option("--out-dir", f.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Io io{out, err};
  try {
    if (f.threads) set_thread_count(static_cast<std::size_t>(*f.threads));
    if (rv->parsed()) cmd_rv(f, io);
    else if (fit->parsed()) cmd_fit(f, io);
    else if (forecast->parsed()) cmd_forecast(f, io);
    else if (network->parsed()) cmd_network(f, io);
    else if (jirf->parsed()) cmd_jirf(f, io);
    else if (boot->parsed()) cmd_bootstrap(f, io);
    else if (diagnose->parsed()) cmd_diagnose(f, io);
    else if (simulate->parsed()) cmd_simulate(f, io);
    else if (report->parsed()) cmd_report(f, io);
  } catch (const Error& e) {
    err << "error: " << code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: IoError: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace volnet::cli
