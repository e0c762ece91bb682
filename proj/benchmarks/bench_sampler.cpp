#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "plv/sampler.hpp"

namespace {

void BM_RunAlgorithm(benchmark::State& state) {
  plv::Polyhedron P = plv::Polyhedron::interval(-2, 2);
  plv::ObjectiveModel m = plv::double_well_1d();
  plv::StreamSpec stream = plv::StreamSpec::ar1(0.5, 1.0, 1, 1);
  plv::SamplerConfig cfg;
  cfg.eta = 0.01;
  cfg.beta = 1.0;
  cfg.steps = static_cast<int>(state.range(0));
  cfg.substeps = 1;
  cfg.x0 = Eigen::VectorXd::Zero(1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(plv::run_algorithm(P, m, stream, cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.steps);
}
BENCHMARK(BM_RunAlgorithm)->Arg(256)->Arg(4096);

void BM_FineTrajectory(benchmark::State& state) {
  plv::Polyhedron P = plv::Polyhedron::interval(-2, 2);
  plv::ObjectiveModel m = plv::double_well_1d();
  plv::StreamSpec stream = plv::StreamSpec::constant(0.0, 1);
  plv::SamplerConfig cfg;
  cfg.eta = 0.5;
  cfg.beta = 4.0;
  cfg.steps = 64;
  cfg.substeps = static_cast<int>(state.range(0));
  cfg.x0 = Eigen::VectorXd::Zero(1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    plv::NoiseRealization noise = plv::NoiseRealization::generate(cfg, 1, stream);
    benchmark::DoNotOptimize(plv::run_fine_c(P, m, cfg, noise));
  }
  state.SetItemsProcessed(state.iterations() * cfg.steps * cfg.substeps);
}
BENCHMARK(BM_FineTrajectory)->Arg(16)->Arg(256);

void BM_CoupledPair(benchmark::State& state) {
  plv::Polyhedron P = plv::Polyhedron::interval(-2, 2);
  plv::ObjectiveModel m = plv::double_well_1d();
  plv::SamplerConfig cfg;
  cfg.eta = 0.5;
  cfg.beta = 1.0;
  cfg.steps = 100;
  cfg.substeps = 16;
  cfg.x0 = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd a = Eigen::VectorXd::Constant(1, -2.0);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(1, 2.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(plv::run_coupled_pair(P, m, cfg, a, b));
  }
}
BENCHMARK(BM_CoupledPair);

}  // namespace
