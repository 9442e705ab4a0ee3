#include <benchmark/benchmark.h>

#include "volnet/elasticnet.hpp"
#include "volnet/random.hpp"

namespace {

struct Problem {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

Problem make_problem(Eigen::Index m, Eigen::Index p) {
  volnet::Rng rng(17);
  Problem pr{Eigen::MatrixXd(m, p), Eigen::VectorXd(m)};
  for (auto& v : pr.x.reshaped()) v = rng.normal();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (Eigen::Index j = 0; j < p; j += 4) beta(j) = 0.5;
  pr.y = pr.x * beta;
  for (auto& v : pr.y) v += rng.normal();
  return pr;
}

void BM_ElasticNetFit(benchmark::State& state) {
  const Problem pr = make_problem(state.range(0), state.range(1));
  for (auto _ : state) {
    auto r = volnet::fit_elastic_net(pr.x, pr.y, {0.05, 0.5});
    benchmark::DoNotOptimize(r.coef.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ElasticNetFit)->Args({1000, 15})->Args({5000, 15})->Args({5000, 60});

// Full 60-point grid, 5 folds: the per-asset cost of the cross step.
void BM_CrossValidate(benchmark::State& state) {
  const Problem pr = make_problem(state.range(0), 15);
  const volnet::EnetOptions opts{.fit_intercept = true};
  const auto design = volnet::scale_design(pr.x, pr.y, opts);
  const auto grid = volnet::lambda_grid(design, 0.5, 60, 1e-4);
  for (auto _ : state) {
    auto cv = volnet::cross_validate_lambda(pr.x, pr.y, grid, 0.5, 5, opts);
    benchmark::DoNotOptimize(cv.selected_lambda);
  }
}
BENCHMARK(BM_CrossValidate)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
