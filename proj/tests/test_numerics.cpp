#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "plv/numerics.hpp"

using namespace plv;

TEST_CASE("adaptive Simpson matches closed-form integrals") {
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-9));
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(adaptive_simpson([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-9));
  CHECK(adaptive_simpson([](double) { return 0.0; }, 0.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("Kahan summation survives magnitude spread") {
  KahanSum s;
  s.add(1e16);
  for (int i = 0; i < 10000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == doctest::Approx(10000.0));
}

TEST_CASE("running statistics") {
  RunningStat st;
  for (double v : {1.0, 2.0, 3.0, 4.0}) st.add(v);
  CHECK(st.mean() == doctest::Approx(2.5));
  CHECK(st.variance() == doctest::Approx(5.0 / 3.0));  // sample variance
  CHECK(st.std_error() == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("seed derivation is deterministic and spread out") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("fnv1a stability") {
  const char* s = "abc";
  CHECK(fnv1a_hash(s, 3) == fnv1a_hash(s, 3));
  CHECK(fnv1a_hash("abc", 3) != fnv1a_hash("abd", 3));
}

TEST_CASE("parallel_for covers every index exactly once") {
  const std::size_t n = 1000;
  std::vector<std::atomic<int>> hits(n);
  parallel_for(n, 4, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (std::size_t i = 0; i < n; ++i) CHECK(hits[i].load() == 1);
}

TEST_CASE("parallel_for propagates worker exceptions") {
  CHECK_THROWS(parallel_for(8, 2, [](std::size_t i) {
    if (i == 3) throw std::runtime_error("boom");
  }));
}
