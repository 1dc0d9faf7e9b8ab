// Serial reference vs OpenMP kernels, plus single-chain throughput at large p.

#include <benchmark/benchmark.h>

#include <memory>

#include "madasub/enumerate.hpp"
#include "madasub/kernel.hpp"
#include "madasub/parallel.hpp"
#include "madasub/sampler.hpp"
#include "madasub/simulate.hpp"

using namespace madasub;

namespace {

std::shared_ptr<const Dataset> design(std::size_t n, std::size_t p, std::uint64_t seed) {
  SimDesign d;
  d.n = n;
  d.p = p;
  d.rho = 0.5;
  d.beta.assign(p, 0.0);
  for (std::size_t j = 0; j < p; j += 4) d.beta[j] = 1.0;
  d.seed = seed;
  return std::make_shared<const Dataset>(generate_dataset(d).data);
}

std::shared_ptr<ConjugateLinearKernel> gprior(std::size_t n, std::size_t p) {
  auto data = design(n, p, 3);
  return std::make_shared<ConjugateLinearKernel>(
      data, CoefficientPriorSpec{CoefficientPriorSpec::Kind::kGPrior, static_cast<double>(n)},
      ModelPriorSpec::uniform());
}

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kOpenMP;
}

void BM_Enumerate(benchmark::State& state) {
  const auto kernel = gprior(100, 16);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_posterior(*kernel, mode(state)));
}
BENCHMARK(BM_Enumerate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TransitionMatrix(benchmark::State& state) {
  const auto kernel = gprior(40, 8);
  const std::vector<double> rt(8, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(transition_matrix(*kernel, rt, {}, mode(state)));
}
BENCHMARK(BM_TransitionMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Parallel(benchmark::State& state) {
  PosteriorKernel proto(gprior(100, 50));
  const auto cfg = ParallelConfig::defaults(50, 4, 4, 2000, 5.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_parallel(proto, cfg, mode(state)));
}
BENCHMARK(BM_Parallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MadasubHighDim(benchmark::State& state) {
  const auto data = design(60, static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) {
    PosteriorKernel k(std::make_shared<EbicKernel>(data, 1.0));
    auto cfg = SamplerConfig::defaults(data->p());
    cfg.iterations = 2000;
    benchmark::DoNotOptimize(run_madasub(k, cfg));
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_MadasubHighDim)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
