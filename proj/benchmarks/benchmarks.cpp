// Microbenchmarks for the stages that dominate wall time. Run manually:
//   ./benchmarks/spikerec_benchmarks [--benchmark_filter=...]

#include <complex>
#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "spikerec/expander.hpp"
#include "spikerec/pipeline.hpp"
#include "spikerec/prony.hpp"
#include "spikerec/propagate.hpp"
#include "spikerec/resample.hpp"
#include "spikerec/rng.hpp"
#include "spikerec/spikes.hpp"

using namespace spikerec;

namespace {

ExperimentConfig bench_config() {
  ExperimentConfig config;
  config.s = 3;
  config.lambda = 1.0;
  config.omega = 0.25;
  config.d = 3;
  config.seed = 11;
  config.n_override = 101;
  return config;
}

MeasurementSetup bench_setup() {
  const SpikeSignal mu = random_signal(3, 1.0, 0.2, 0.5, 2.0, 5);
  return synthesize_measurement(mu, bench_config());
}

void BM_LaplacianSpectrum(benchmark::State& state) {
  const RegularGraph g = random_regular(static_cast<std::size_t>(state.range(0)), 3, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalized_laplacian_spectrum(g).lambda1);
  }
}
BENCHMARK(BM_LaplacianSpectrum)->Arg(200)->Arg(822)->Unit(benchmark::kMillisecond);

void BM_RandomRegular(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        random_regular(static_cast<std::size_t>(state.range(0)), 3, ++seed));
  }
}
BENCHMARK(BM_RandomRegular)->Arg(200)->Arg(822)->Unit(benchmark::kMillisecond);

void BM_PropagatePhases(benchmark::State& state) {
  const MeasurementSetup setup = bench_setup();
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_phases(setup.graph, setup.data));
  }
}
BENCHMARK(BM_PropagatePhases)->Unit(benchmark::kMillisecond);

void BM_InvertResampling(benchmark::State& state) {
  const std::uint64_t n = 101;
  const std::size_t m = 50;
  const SpikeSignal mu = random_signal(3, 1.0, 0.2, 0.5, 2.0, 5);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Complex> b;
  const UniformSamples fs = sample_fourier(mu, 0.25 / static_cast<double>(m), m);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc(0, 0);
    for (std::size_t k = 0; k < m; ++k) {
      const double angle = 6.283185307179586 * static_cast<double>(j * (k + 1)) /
                           static_cast<double>(n);
      acc += fs.values[k] * Complex(std::cos(angle), std::sin(angle));
    }
    b.push_back(acc);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(invert_resampling(idx, b, n, m, 1e-6));
  }
}
BENCHMARK(BM_InvertResampling)->Unit(benchmark::kMillisecond);

void BM_AnnihilatingPoly(benchmark::State& state) {
  const SpikeSignal mu = random_signal(4, 1.0, 0.1, 0.5, 2.0, 7);
  const UniformSamples samples = sample_fourier(mu, 0.45, 24);
  for (auto _ : state) {
    benchmark::DoNotOptimize(annihilating_polynomial(samples, 4));
  }
}
BENCHMARK(BM_AnnihilatingPoly)->Unit(benchmark::kMicrosecond);

void BM_EndToEndTrial(benchmark::State& state) {
  const ExperimentConfig config = bench_config();
  const MeasurementSetup setup = bench_setup();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        end_to_end_recover(setup.graph, setup.embedding, setup.data, config));
  }
}
BENCHMARK(BM_EndToEndTrial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
