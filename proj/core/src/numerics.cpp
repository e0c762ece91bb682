#include "plv/numerics.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <thread>

namespace plv {

namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  double rel_tol;
  std::size_t budget;
  std::size_t used = 0;
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                     double whole, double tol) {
  if (st.used >= st.budget) {
    throw std::runtime_error("adaptive_simpson: interval budget exhausted");
  }
  ++st.used;
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = (*st.f)(lm);
  double frm = (*st.f)(rm);
  double left = simpson(fa, flm, fm, m - a);
  double right = simpson(fm, frm, fb, b - m);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(st, a, m, fa, flm, fm, left, 0.5 * tol) +
         adaptive_step(st, m, b, fm, frm, fb, right, 0.5 * tol);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, std::size_t max_intervals) {
  if (a == b) return 0.0;
  SimpsonState st{&f, rel_tol, max_intervals};
  double fa = f(a);
  double fb = f(b);
  double m = 0.5 * (a + b);
  double fm = f(m);
  double whole = simpson(fa, fm, fb, b - a);
  // Tolerance scaled to the coarse estimate, floored so near-zero integrals
  // still terminate.
  double tol = rel_tol * std::max(std::abs(whole), 1e-300);
  return adaptive_step(st, a, b, fa, fm, fb, whole, tol);
}

double RunningStat::variance() const {
  if (n < 2) return 0.0;
  double nn = static_cast<double>(n);
  double m = sum.value() / nn;
  double v = (sumsq.value() - nn * m * m) / (nn - 1.0);
  return v > 0.0 ? v : 0.0;
}

double RunningStat::std_error() const {
  if (n < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream_index) {
  return splitmix64(splitmix64(base_seed) ^ splitmix64(stream_index * 0x9e3779b97f4a7c15ULL + 1));
}

std::uint64_t fnv1a_hash(const void* data, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (workers <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned n_threads = std::min<std::size_t>(workers, count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  std::atomic<bool> failed{false};
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) break;
        try {
          fn(i);
        } catch (...) {
          failed.store(true);
          break;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) {
    throw std::runtime_error("parallel_for: a worker task threw");
  }
}

}  // namespace plv
