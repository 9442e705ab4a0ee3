#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "volnet/bootstrap.hpp"
#include "volnet/hybrid.hpp"
#include "volnet/random.hpp"
#include "volnet/rv.hpp"
#include "volnet/synthetic.hpp"

namespace {

volnet::SyntheticSpec spec(std::size_t k, Eigen::Index n) {
  volnet::SyntheticSpec s;
  for (std::size_t i = 0; i < k; ++i) {
    s.assets.push_back("S" + std::to_string(i));
    s.own.push_back({0.1, 0.4, 0.3, 0.2});
  }
  s.length = n;
  const auto kk = static_cast<Eigen::Index>(k);
  s.innovation_cov = Eigen::MatrixXd::Constant(kk, kk, 0.3e-4);
  s.innovation_cov.diagonal().setConstant(1e-4);
  s.seed = 3;
  return s;
}

void BM_YangZhang(benchmark::State& state) {
  volnet::Rng rng(5);
  std::vector<volnet::OhlcBar> bars;
  volnet::Date d = volnet::Date::from_ymd(2000, 1, 3);
  double p = 100.0;
  for (int t = 0; t < state.range(0); ++t) {
    const double open = p * (1.0 + 0.003 * rng.normal());
    const double close = open * (1.0 + 0.01 * rng.normal());
    bars.push_back({d, open, std::max(open, close) * 1.004, std::min(open, close) * 0.996, close});
    p = close;
    d = d.next_weekday();
  }
  const volnet::OhlcSeries series{"X", bars};
  for (auto _ : state) {
    auto rv = volnet::yang_zhang_rv(series);
    benchmark::DoNotOptimize(rv.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_YangZhang)->Arg(5700)->Arg(50'000);

void BM_FitHybrid(benchmark::State& state) {
  const auto panel = volnet::generate_synthetic_panel(
      spec(static_cast<std::size_t>(state.range(0)), state.range(1)));
  for (auto _ : state) {
    auto fit = volnet::fit_hybrid(panel);
    benchmark::DoNotOptimize(fit.model.cross.data());
  }
}
BENCHMARK(BM_FitHybrid)->Args({6, 2000})->Args({10, 5700})->Unit(benchmark::kMillisecond);

// One bootstrap replicate: resample, refit at fixed lambda, 21-step JIRF.
void BM_BootstrapReplicate(benchmark::State& state) {
  const auto panel = volnet::generate_synthetic_panel(
      spec(static_cast<std::size_t>(state.range(0)), 5700));
  const auto model = volnet::fit_hybrid(panel).model;
  const std::vector<volnet::ShockGroup> groups{{"first", {model.assets.front()}}};
  volnet::BootstrapConfig cfg;
  cfg.replications = 1;
  for (auto _ : state) {
    auto band = volnet::bootstrap_jirf(panel, model, groups, 20, cfg);
    benchmark::DoNotOptimize(band.upper.data());
    ++cfg.seed;
  }
}
BENCHMARK(BM_BootstrapReplicate)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
