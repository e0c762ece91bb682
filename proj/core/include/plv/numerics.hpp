// Small numerical utilities shared across the library: adaptive Simpson
// quadrature, numerically stabilized accumulation, running mean/stderr
// statistics, and a splittable seed derivation scheme for replica sweeps.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace plv {

// Adaptive Simpson quadrature of f on [a, b].
// rel_tol is relative to the accumulated integral magnitude (with an absolute
// floor so integrals near zero terminate). Throws on non-convergence once the
// interval budget is exhausted.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-9, std::size_t max_intervals = 1000000);

// Compensated (Kahan) summation so replica aggregation is order-independent
// up to roundoff regardless of worker scheduling.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Running mean and standard error over scalar observations.
struct RunningStat {
  void add(double x) {
    ++n;
    sum.add(x);
    sumsq.add(x * x);
  }
  std::size_t count() const { return n; }
  double mean() const { return n ? sum.value() / static_cast<double>(n) : 0.0; }
  double variance() const;
  double std_error() const;

  std::size_t n = 0;
  KahanSum sum;
  KahanSum sumsq;
};

// splitmix64: used to derive independent per-replica seeds from a base seed
// and a replica index, so sweeps can be farmed out in any order.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream_index);

// FNV-1a over raw bytes; used to stamp output files with the config hash.
std::uint64_t fnv1a_hash(const void* data, std::size_t len);

// Run fn(i) for i in [0, count) on up to `workers` threads. fn must be safe
// to call concurrently for distinct i. workers <= 1 runs inline.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace plv
