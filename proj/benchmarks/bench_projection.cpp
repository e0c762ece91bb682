#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "plv/polytope.hpp"

namespace {

plv::Polyhedron random_polyhedron(int m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd a(n);
    do {
      for (int j = 0; j < n; ++j) a(j) = normal(rng);
    } while (a.norm() < 1e-6);
    A.row(i) = a.normalized();
    b(i) = unif(rng);
  }
  return plv::Polyhedron(A, b);
}

void BM_ProjectBox(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  plv::Polyhedron P = plv::Polyhedron::box(Eigen::VectorXd::Constant(n, -1.0),
                                           Eigen::VectorXd::Constant(n, 1.0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 2.0);
  Eigen::VectorXd x(n);
  for (auto _ : state) {
    for (int j = 0; j < n; ++j) x(j) = normal(rng);
    benchmark::DoNotOptimize(plv::project(P, x));
  }
}
BENCHMARK(BM_ProjectBox)->Arg(2)->Arg(8)->Arg(32);

void BM_ProjectGeneral(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  plv::Polyhedron P = random_polyhedron(m, 3, 7);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 2.0);
  Eigen::VectorXd x(3);
  for (auto _ : state) {
    for (int j = 0; j < 3; ++j) x(j) = normal(rng);
    benchmark::DoNotOptimize(plv::project(P, x));
  }
}
BENCHMARK(BM_ProjectGeneral)->Arg(4)->Arg(8)->Arg(16);

void BM_ChebyshevCenter(benchmark::State& state) {
  plv::Polyhedron P = random_polyhedron(static_cast<int>(state.range(0)), 3, 11);
  for (auto _ : state) benchmark::DoNotOptimize(plv::chebyshev_center(P));
}
BENCHMARK(BM_ChebyshevCenter)->Arg(6)->Arg(24);

}  // namespace

BENCHMARK_MAIN();
