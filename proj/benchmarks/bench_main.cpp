#include "lgdc/coarsening.hpp"
#include "lgdc/datasets.hpp"
#include "lgdc/denoiser.hpp"
#include "lgdc/diffusion.hpp"
#include "lgdc/graphlets.hpp"
#include "lgdc/metrics.hpp"
#include "lgdc/spectral.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace lgdc;

void BM_EigSym(benchmark::State& state) {
  Rng rng(1);
  const Graph g = gen_planar(static_cast<int>(state.range(0)), rng);
  const Eigen::MatrixXd l = laplacian(g);
  for (auto _ : state) benchmark::DoNotOptimize(eig_sym(l));
}
BENCHMARK(BM_EigSym)->Arg(20)->Arg(64)->Arg(128);

void BM_Coarsen(benchmark::State& state) {
  Rng rng(2);
  const Graph g = gen_planar(static_cast<int>(state.range(0)), rng);
  CoarseningOptions options;
  for (auto _ : state) {
    Rng r(3);
    benchmark::DoNotOptimize(coarsen_to_ratio(g, options, r));
  }
}
BENCHMARK(BM_Coarsen)->Arg(20)->Arg(64);

void BM_OrbitCounts(benchmark::State& state) {
  Rng rng(4);
  const Graph g = gen_planar(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(orbit_counts(g));
}
BENCHMARK(BM_OrbitCounts)->Arg(20)->Arg(64);

void BM_DenoiserForward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Network net(denoiser_shape(8, 4, 64, 4));
  Rng rng(5);
  net.initialize(rng);
  LatentState s;
  s.x.assign(n, 0);
  s.e = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    s.x[i] = rng.range(0, 7);
    for (int j = i + 1; j < n; ++j) s.e(i, j) = s.e(j, i) = rng.bernoulli(0.3) ? rng.range(1, 3) : 0;
  }
  const NetworkInput in = latent_input(s, 8, 100);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(in));
}
BENCHMARK(BM_DenoiserForward)->Arg(4)->Arg(16)->Arg(64);

void BM_DegreeMmd(benchmark::State& state) {
  auto spec = DatasetSpec::defaults(Family::community20);
  spec.count = static_cast<int>(state.range(0));
  const auto graphs = generate_dataset(spec);
  spec.seed = 1000;
  const auto other = generate_dataset(spec);
  for (auto _ : state) benchmark::DoNotOptimize(mmd(StatKind::degree, graphs, other));
}
BENCHMARK(BM_DegreeMmd)->Arg(40)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
