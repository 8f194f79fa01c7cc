#include <benchmark/benchmark.h>

#include "sparsesel/bss.hpp"
#include "sparsesel/combinatorics.hpp"
#include "sparsesel/comparators.hpp"
#include "sparsesel/diagnostics.hpp"
#include "sparsesel/iht.hpp"
#include "sparsesel/linalg.hpp"
#include "sparsesel/rng.hpp"
#include "sparsesel/simgen.hpp"
#include "sparsesel/standardize.hpp"

namespace {

using namespace sparsesel;

SimulatedReplicate make_problem(Index p, Index s, double q, std::uint64_t seed) {
  SimConfig cfg;
  cfg.p = p;
  cfg.s = s;
  cfg.sigma = 0.3;
  cfg.cov = q > 0.0 ? CovarianceSpec::exp_decay(p, q) : CovarianceSpec::identity(p);
  cfg.seed = seed;
  SimulatedReplicate rep = SimulationDesign(cfg).replicate(0);
  rep.data = rep.data.with_design(standardize_columns(rep.data.x(), StandardizeMode::zscore));
  return rep;
}

void BM_OlsFit(benchmark::State& state) {
  const auto rep = make_problem(200, 10, 0.5, 1);
  const SupportSet support = SupportSet::range(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ols_fit(rep.data, support).rss);
}
BENCHMARK(BM_OlsFit)->Arg(5)->Arg(20)->Arg(50);

void BM_BestSubset(benchmark::State& state) {
  const auto rep = make_problem(state.range(0), 3, 0.5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(best_subset(rep.data, 3).best.rss);
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(binomial(static_cast<std::uint64_t>(state.range(0)), 3)));
}
BENCHMARK(BM_BestSubset)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_IhtRun(benchmark::State& state) {
  const Index p = state.range(0);
  const Index s = p / 20;
  const auto rep = make_problem(p, s, 0.5, 3);
  const IhtConfig cfg{.pi = s, .l = s, .s_hat = s};
  for (auto _ : state) benchmark::DoNotOptimize(iht_run(rep.data, cfg).beta.data());
}
BENCHMARK(BM_IhtRun)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PenalizedPath(benchmark::State& state) {
  const auto rep = make_problem(200, 10, 0.5, 4);
  const PenaltySpec spec = state.range(0) == 0 ? PenaltySpec::lasso() : PenaltySpec::scad();
  const auto grid = default_lambda_grid(rep.data);
  for (auto _ : state) benchmark::DoNotOptimize(penalized_path(rep.data, spec, grid).entries.size());
  state.SetLabel(std::string(spec.name()));
}
BENCHMARK(BM_PenalizedPath)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TauStar(benchmark::State& state) {
  const auto rep = make_problem(state.range(0), 3, 0.5, 5);
  for (auto _ : state) benchmark::DoNotOptimize(tau_star(rep.data, rep.beta, 3, 0.0).tau_star);
}
BENCHMARK(BM_TauStar)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
