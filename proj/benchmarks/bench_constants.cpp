#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "plv/constants.hpp"
#include "plv/skorokhod.hpp"

namespace {

plv::ProblemParams double_well_params() {
  plv::ProblemParams p;
  p.n = 1;
  p.beta = 4.0;
  p.eta = 1e-4;
  p.ell = 11.0;
  p.mu = 0.25;
  p.R = 2.24;
  p.varsigma = 4.0;
  p.skorokhod = plv::constants_for(plv::Polyhedron::interval(-2, 2));
  return p;
}

void BM_MetricChainBuild(benchmark::State& state) {
  plv::ProblemParams p = double_well_params();
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(plv::MetricChain(p, grid));
}
BENCHMARK(BM_MetricChainBuild)->Arg(1024)->Arg(8192)->Arg(65536);

void BM_MetricChainDelta(benchmark::State& state) {
  plv::ProblemParams p = double_well_params();
  plv::MetricChain chain(p);
  double r = 0.0;
  for (auto _ : state) {
    r += 1e-3;
    if (r > 2.0) r = 1e-3;
    benchmark::DoNotOptimize(chain.delta(r));
  }
}
BENCHMARK(BM_MetricChainDelta);

void BM_Ledger(benchmark::State& state) {
  plv::ProblemParams p = double_well_params();
  p.M2z = 1.1547005383792517;
  p.Psi2z = 2.3094010767585034;
  for (auto _ : state) benchmark::DoNotOptimize(plv::ledger(p));
}
BENCHMARK(BM_Ledger);

void BM_SkorokhodConstants(benchmark::State& state) {
  Eigen::MatrixXd A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  plv::Polyhedron P(A, Eigen::VectorXd::Ones(4));
  for (auto _ : state) benchmark::DoNotOptimize(plv::constants_for(P));
}
BENCHMARK(BM_SkorokhodConstants);

}  // namespace
