#include "dcs/experiment.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>

using namespace dcs;

namespace {

Setup make_setup(const std::string& graph, int d, const std::string& algorithm) {
  ExperimentConfig cfg;
  cfg.graph = graph;
  cfg.problem.d = d;
  cfg.algorithm = algorithm;
  return prepare(cfg);
}

void BM_ApplyLaplacian(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int d = 8;
  const Graph g = build_graph("cycle:" + std::to_string(m));
  const LaplacianOperator L(g, d);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Stacked x(m, d);
  for (auto& v : x.flat()) v = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_laplacian(L, x));
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_ApplyLaplacian)->Arg(8)->Arg(64)->Arg(512);

void BM_ProxStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const bool entropy = state.range(1) != 0;
  const BregmanGeometry geo = entropy ? BregmanGeometry::entropy() : BregmanGeometry::euclidean();
  const ConstraintSet set = entropy ? ConstraintSet::simplex(d) : ConstraintSet::box(d, -1.0, 1.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector g(d), x(d), u(d);
  for (int j = 0; j < d; ++j) g(j) = unif(rng) - 0.5, x(j) = unif(rng), u(j) = unif(rng);
  x /= x.sum();
  u /= u.sum();
  for (auto _ : state) benchmark::DoNotOptimize(prox_step(geo, set, g, x, u, 1.5, 0.7));
}
BENCHMARK(BM_ProxStep)->Args({4, 0})->Args({64, 0})->Args({4, 1})->Args({64, 1});

void BM_CsProcedure(benchmark::State& state) {
  const Setup setup = make_setup("path:5", 4, "dcs");
  const AgentProblem& agent = setup.problem.front();
  const std::int64_t T = state.range(0);
  const Vector x = agent.set.bregman_center();
  const Vector w = Vector::Constant(x.size(), 0.3);
  const InnerSchedule inner;
  for (auto _ : state) benchmark::DoNotOptimize(cs_procedure(agent, T, 2.0, w, x, inner, 1, CsMode::exact));
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_CsProcedure)->Arg(10)->Arg(1000);

void BM_RunDcs(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.algorithm = "dcs";
  const Setup setup = prepare(cfg);
  const int N = static_cast<int>(state.range(0));
  const Schedules s = build_schedules(cfg, setup, N);
  RunOptions opts;
  opts.snapshot_stride = N;
  for (auto _ : state) benchmark::DoNotOptimize(run_dcs(setup.problem, setup.graph, s, {}, opts));
}
BENCHMARK(BM_RunDcs)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
