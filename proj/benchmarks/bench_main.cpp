#include <benchmark/benchmark.h>

#include <random>

#include "nfce/channel.hpp"
#include "nfce/estimators.hpp"
#include "nfce/harness.hpp"
#include "nfce/impairment.hpp"
#include "nfce/rng.hpp"
#include "nfce/spectral.hpp"
#include "nfce/subspace.hpp"

namespace {

nfce::ArrayConfig sized(int n, double spacing) {
  nfce::ArrayConfig cfg;
  cfg.n_h = cfg.n_v = n;
  cfg.delta = spacing * cfg.wavelength;
  return cfg;
}

void BM_FullChannel(benchmark::State& state) {
  const auto cfg = sized(static_cast<int>(state.range(0)), 0.5);
  const nfce::UePlacement ue{0.3, -0.2, 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(nfce::full_channel(cfg, ue));
}
BENCHMARK(BM_FullChannel)->Arg(8)->Arg(16)->Arg(24);

void BM_SubarrayMask(benchmark::State& state) {
  const auto cfg = sized(static_cast<int>(state.range(0)), 0.5);
  auto rng = nfce::substream(1, 0, nfce::StreamTag::Noise);
  const Eigen::VectorXcd v = nfce::complex_gaussian(rng, cfg.antennas_per_subarray(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nfce::mask_subarray_observation(v, cfg, 10.0 / 11.0));
}
BENCHMARK(BM_SubarrayMask)->Arg(8)->Arg(16)->Arg(24);

void BM_ReducedSubspace(benchmark::State& state) {
  const auto cfg = sized(static_cast<int>(state.range(0)), 0.25);
  const auto r = nfce::isotropic_correlation(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(nfce::reduced_subspace(r, 1e-5));
}
BENCHMARK(BM_ReducedSubspace)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Projection(benchmark::State& state) {
  const auto cfg = sized(static_cast<int>(state.range(0)), 0.25);
  const auto basis = nfce::reduced_subspace(nfce::isotropic_correlation(cfg), 1e-5);
  auto rng = nfce::substream(1, 0, nfce::StreamTag::Noise);
  const auto v = nfce::complex_gaussian(rng, cfg.total_antennas(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nfce::project(basis, v));
}
BENCHMARK(BM_Projection)->Arg(8)->Arg(12);

void BM_Trial(benchmark::State& state) {
  nfce::ExperimentSpec spec;
  const auto cfg = spec.cell_config({8, 8}, 0.25);
  const auto basis = nfce::reduced_subspace(nfce::isotropic_correlation(cfg), spec.rel_threshold);
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(nfce::run_trial(spec, cfg, trial++, &basis, 10.0 / 11.0));
}
BENCHMARK(BM_Trial)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
