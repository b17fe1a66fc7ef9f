#include <benchmark/benchmark.h>

#include <vector>

#include "npcspec/bernstein.hpp"
#include "npcspec/fourier.hpp"
#include "npcspec/likelihoods.hpp"
#include "npcspec/mcmc.hpp"
#include "npcspec/rng.hpp"

using namespace npcspec;

namespace {

TimeSeries ar1_series(std::size_t n) {
  ArmaSpec spec;
  spec.ar = {0.95};
  return simulate_arma(spec, n, 7);
}

BernsteinState random_state(const BernsteinDirichletConfig& cfg, Rng& rng, std::size_t k) {
  BernsteinState st;
  st.V.resize(cfg.L);
  st.W.resize(cfg.L + 1);
  for (auto& v : st.V) v = rng.uniform();
  for (auto& w : st.W) w = rng.uniform();
  st.k = k;
  st.tau = 1.0;
  return st;
}

void BM_RealFourierTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<double> z(n), out(n);
  for (auto& v : z) v = rng.normal();
  RealFourierTransform t(n);
  for (auto _ : state) {
    t.forward(z, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_RealFourierTransform)->Arg(128)->Arg(1024)->Arg(4096);

void BM_Mixture(benchmark::State& state) {
  const std::size_t n = 128;
  const auto k = static_cast<std::size_t>(state.range(0));
  auto cfg = BernsteinDirichletConfig::for_length(n);
  cfg.k_max = 500;
  const auto basis = BetaBasis::shared(n, cfg.k_max);
  Rng rng(2);
  const auto st = random_state(cfg, rng, k);
  const auto p = stick_breaking(st.V);
  std::vector<double> out(basis->points());
  for (auto _ : state) {
    basis->mixture(p, st.W, k, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Mixture)->Arg(10)->Arg(100)->Arg(500);

void BM_CorrectedLikelihood(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const auto ts = ar1_series(n);
  CorrectedLikelihood lik(ts, true);
  std::vector<double> corr(lik.grid().size(), 1.1);
  std::vector<double> rho(p, 0.3);
  const ArModel working{PacfVector(rho), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(lik.log_likelihood(corr, working));
}
BENCHMARK(BM_CorrectedLikelihood)->Args({128, 1})->Args({128, 5})->Args({1024, 1})->Args({1024, 5});

void BM_CorrectedLikelihoodGeneral(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ts = ar1_series(n);
  CorrectedLikelihood lik(ts, true);
  std::vector<double> corr(lik.grid().size(), 1.1);
  const ArModel working{PacfVector({0.3}), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(lik.parts_general(corr, working).value());
}
BENCHMARK(BM_CorrectedLikelihoodGeneral)->Arg(128)->Arg(1024);

void BM_NpcSweep(benchmark::State& state) {
  const std::size_t n = 128;
  const auto p = static_cast<std::size_t>(state.range(0));
  const auto ts = ar1_series(n);
  auto cfg = BernsteinDirichletConfig::for_length(n);
  cfg.k_max = static_cast<std::size_t>(state.range(1));
  Rng rng(3);
  DataLikelihood lik(ts, true);
  NpcSampler sampler(lik, p, cfg, McmcConfig::npc_defaults(), NpcSampler::initial_state(ts, p, cfg, rng), Rng(4));
  for (auto _ : state) sampler.sweep(false);
}
BENCHMARK(BM_NpcSweep)->Args({0, 100})->Args({1, 100})->Args({1, 500})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
