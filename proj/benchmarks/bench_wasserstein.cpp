#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "plv/wasserstein.hpp"

namespace {

plv::SampleSet cloud(std::mt19937_64& rng, int n, int dim, double shift) {
  std::normal_distribution<double> normal(0.0, 1.0);
  plv::SampleSet s;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(dim);
    for (int j = 0; j < dim; ++j) x(j) = normal(rng) + shift;
    s.points.push_back(x);
  }
  return s;
}

void BM_W1Quantile(benchmark::State& state) {
  std::mt19937_64 rng(1);
  plv::SampleSet a = cloud(rng, static_cast<int>(state.range(0)), 1, 0.0);
  plv::SampleSet b = cloud(rng, static_cast<int>(state.range(0)), 1, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(plv::w1_1d(a, b));
}
BENCHMARK(BM_W1Quantile)->Arg(1024)->Arg(32768);

void BM_W1Assignment(benchmark::State& state) {
  std::mt19937_64 rng(2);
  plv::SampleSet a = cloud(rng, static_cast<int>(state.range(0)), 2, 0.0);
  plv::SampleSet b = cloud(rng, static_cast<int>(state.range(0)), 2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(plv::w1_exact(a, b));
}
BENCHMARK(BM_W1Assignment)->Arg(64)->Arg(256)->Arg(512);

void BM_W1Sliced(benchmark::State& state) {
  std::mt19937_64 rng(3);
  plv::SampleSet a = cloud(rng, 4096, 3, 0.0);
  plv::SampleSet b = cloud(rng, 4096, 3, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plv::w1_sliced(a, b, static_cast<int>(state.range(0)), 1));
  }
}
BENCHMARK(BM_W1Sliced)->Arg(8)->Arg(64);

void BM_GibbsReferenceW1(benchmark::State& state) {
  plv::ObjectiveModel m = plv::double_well_1d();
  plv::GibbsReference1D ref(m, 4.0, -2.0, 2.0, 4096);
  std::mt19937_64 rng(4);
  plv::SampleSet s = ref.sample(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ref.w1_to_density(s));
}
BENCHMARK(BM_GibbsReferenceW1)->Arg(1024)->Arg(32768);

}  // namespace
