#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "opshare/analytic_rate.hpp"
#include "opshare/harness.hpp"
#include "opshare/qlearning.hpp"
#include "opshare/swap_search.hpp"

namespace {

using namespace opshare;

void BM_ExpectedRate(benchmark::State& state) {
  const NetworkConfig cfg = make_network(2, 2, {1, 1}, 2);
  const PowerPmf pmf = PowerPmf::uniform(cfg.power_levels);
  const double lambda = cfg.sbs_intensity * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expected_rate_deconditioned(lambda, cfg.max_power_w, pmf, cfg));
}
BENCHMARK(BM_ExpectedRate)->Arg(1)->Arg(3);

void BM_RateTableBuild(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const NetworkConfig cfg = make_network(k, 2 * k, std::vector<std::size_t>(k, 2), 2);
  const PowerPmf pmf = PowerPmf::uniform(cfg.power_levels);
  for (auto _ : state) benchmark::DoNotOptimize(RateTable::homogeneous(cfg, pmf));
}
BENCHMARK(BM_RateTableBuild)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_McmcStep(benchmark::State& state) {
  const NetworkConfig cfg = make_network(4, 8, {2, 2, 2, 2}, 2);
  const RateTable rates = RateTable::homogeneous(cfg, PowerPmf::degenerate(cfg.power_levels, cfg.power_levels - 1));
  std::mt19937_64 rng(1);
  SearchOptions opts;
  opts.algorithm = SearchAlgorithm::mcmc;
  SwapSearch search(random_initial_matching(build_augmented(cfg), cfg.supply, rng), rates, opts);
  for (auto _ : state) benchmark::DoNotOptimize(search.step(rates));
}
BENCHMARK(BM_McmcStep);

void BM_LearnPmf(benchmark::State& state) {
  const NetworkConfig cfg = make_network(2, 2, {1, 1}, 2);
  LearningEnv env;
  env.direct_gain = 1e-6;
  env.interferers = {1, 2};
  env.interferer_gain = {1e-8, 1e-9};
  env.noise_power_w = cfg.noise_power_w;
  env.sinr_threshold = cfg.sinr_threshold;
  const std::vector<PowerPmf> others(2, PowerPmf::uniform(cfg.power_levels));
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(learn_pmf(env, others, steps, cfg, 7));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * steps));
}
BENCHMARK(BM_LearnPmf)->Arg(200)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_QLearningTrial(benchmark::State& state) {
  ExperimentSpec spec;
  spec.network = make_network(2, 3, {1, 1}, 2);
  spec.power_mode = PowerMode::q_learning;
  spec.iterations = 50;
  spec.epoch_steps = 100;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(spec, ++seed));
}
BENCHMARK(BM_QLearningTrial)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
