#include <benchmark/benchmark.h>

#include <random>

#include "myga/environment.hpp"
#include "myga/fixed_point.hpp"
#include "myga/policy.hpp"

namespace {

using namespace myga;

Distribution sorted_zeta(std::mt19937_64& rng, std::size_t arms) {
  std::gamma_distribution<double> g(1.0, 1.0);
  Distribution z(arms);
  double total = 0.0;
  for (double& x : z) total += (x = g(rng));
  for (double& x : z) x /= total;
  return descending_sort(z).values;
}

void BM_SolveFixedPoint(benchmark::State& state) {
  const auto arms = static_cast<std::size_t>(state.range(0));
  const auto num_s = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(7);
  const auto zeta = sorted_zeta(rng, arms);
  std::vector<double> s(num_s);
  for (std::size_t j = 0; j < num_s; ++j) s[j] = 0.5 * static_cast<double>(j + 1) / num_s;
  std::vector<double> raw(num_s, 1.0);
  const auto w = MixtureWeights::from_raw(1.0, raw);
  const std::size_t k = pivot_index(zeta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fixed_point(zeta, k, w, s));
  }
}
BENCHMARK(BM_SolveFixedPoint)->Args({4, 16})->Args({16, 64})->Args({64, 1024})->Args({256, 4096});

void BM_MygaRound(benchmark::State& state) {
  EnvSpec spec;
  spec.kind = EnvKind::stochastic_gap;
  spec.arms = static_cast<std::size_t>(state.range(0));
  spec.num_experts = 8;
  spec.horizon = 1000;
  spec.best_mean = 0.05;
  Environment env(spec);
  MygaConfig config{spec.arms, spec.num_experts, std::size_t{1} << 40, 0.01, 0.02, 100};
  MygaPolicy policy(config);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t t = 0;
  for (auto _ : state) {
    const auto data = env.round(t % spec.horizon + 1);
    auto trace = policy.advise(data.advices);
    const std::size_t arm = sample_arm(trace.p_original, unit(rng));
    policy.update(trace, arm, data.losses[arm]);
    ++t;
  }
}
BENCHMARK(BM_MygaRound)->Arg(2)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
