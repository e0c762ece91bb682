#include "plv/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "plv/numerics.hpp"

namespace plv {

SampleSet SampleSet::from_scalars(const std::vector<double>& values) {
  SampleSet s;
  s.points.reserve(values.size());
  for (double v : values) {
    Eigen::VectorXd p(1);
    p(0) = v;
    s.points.push_back(std::move(p));
  }
  return s;
}

std::vector<double> SampleSet::scalars() const {
  if (dim() != 1) throw std::invalid_argument("SampleSet::scalars: dimension must be 1");
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(p(0));
  return v;
}

namespace {

double w1_1d_scalars(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("w1_1d: empty sample set");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t na = a.size(), nb = b.size();
  if (na == nb) {
    KahanSum sum;
    for (std::size_t i = 0; i < na; ++i) sum.add(std::abs(a[i] - b[i]));
    return sum.value() / static_cast<double>(na);
  }
  // Piecewise-constant quantile functions: integrate |qa(u) - qb(u)| du over
  // the merged breakpoints i/na and j/nb.
  KahanSum sum;
  std::size_t i = 0, j = 0;
  double u = 0.0;
  while (i < na && j < nb) {
    double next = std::min(static_cast<double>(i + 1) / na, static_cast<double>(j + 1) / nb);
    sum.add((next - u) * std::abs(a[i] - b[j]));
    u = next;
    if (static_cast<double>(i + 1) / na <= u + 1e-15) ++i;
    if (static_cast<double>(j + 1) / nb <= u + 1e-15) ++j;
  }
  return sum.value();
}

}  // namespace

double w1_1d(const SampleSet& a, const SampleSet& b) {
  if (a.points.empty() || b.points.empty()) throw std::invalid_argument("w1_1d: empty sample set");
  if (a.dim() != 1 || b.dim() != 1) throw std::invalid_argument("w1_1d: dimension must be 1");
  return w1_1d_scalars(a.scalars(), b.scalars());
}

double w1_exact(const SampleSet& a, const SampleSet& b) {
  if (a.points.empty() || b.points.empty()) {
    throw std::invalid_argument("w1_exact: empty sample set");
  }
  if (a.size() != b.size()) throw std::invalid_argument("w1_exact: sample sizes must match");
  if (a.dim() != b.dim()) throw std::invalid_argument("w1_exact: dimension mismatch");
  const int n = static_cast<int>(a.size());
  if (n > 2048) {
    throw std::invalid_argument(
        "w1_exact: more than 2048 samples; use w1_sliced for large sets");
  }
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) cost(i, j) = (a.points[i] - b.points[j]).norm();
  }
  // Shortest-augmenting-path assignment with row/column potentials. Rows are
  // inserted one at a time; each insertion runs a Dijkstra-style scan over
  // columns and augments along the cheapest alternating path.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // match[col] = row, 1-based, 0 = free
  std::vector<int> way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = match[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  KahanSum total;
  for (int j = 1; j <= n; ++j) total.add(cost(match[j] - 1, j - 1));
  return total.value() / n;
}

std::pair<double, double> w1_sliced(const SampleSet& a, const SampleSet& b, int n_proj,
                                    std::uint64_t seed) {
  if (n_proj < 8) throw std::invalid_argument("w1_sliced: need at least 8 projections");
  if (a.points.empty() || b.points.empty()) {
    throw std::invalid_argument("w1_sliced: empty sample set");
  }
  if (a.dim() != b.dim()) throw std::invalid_argument("w1_sliced: dimension mismatch");
  const int d = a.dim();
  std::mt19937_64 rng(derive_seed(seed, 101));
  std::normal_distribution<double> normal(0.0, 1.0);
  RunningStat stat;
  for (int k = 0; k < n_proj; ++k) {
    Eigen::VectorXd theta(d);
    double norm = 0.0;
    do {
      for (int j = 0; j < d; ++j) theta(j) = normal(rng);
      norm = theta.norm();
    } while (norm < 1e-12);
    theta /= norm;
    std::vector<double> pa, pb;
    pa.reserve(a.size());
    pb.reserve(b.size());
    for (const auto& p : a.points) pa.push_back(theta.dot(p));
    for (const auto& p : b.points) pb.push_back(theta.dot(p));
    stat.add(w1_1d_scalars(std::move(pa), std::move(pb)));
  }
  return {stat.mean(), stat.std_error()};
}

GibbsReference1D::GibbsReference1D(const ObjectiveModel& model, double beta, double lo, double hi,
                                   int grid_size) {
  if (model.dim != 1) throw std::invalid_argument("GibbsReference1D: model must be 1-D");
  if (!(hi > lo)) throw std::invalid_argument("GibbsReference1D: need hi > lo");
  if (grid_size < 8) throw std::invalid_argument("GibbsReference1D: grid too small");
  if (grid_size % 2 != 0) ++grid_size;
  lo_ = lo;
  hi_ = hi;
  step_ = (hi - lo) / grid_size;
  grid_.resize(grid_size + 1);
  density_.resize(grid_size + 1);

  auto fbar_at = [&](double x) {
    Eigen::VectorXd v(1);
    v(0) = x;
    return model.fbar(v);
  };
  double fmin = std::numeric_limits<double>::infinity();
  std::vector<double> fvals(grid_size + 1);
  for (int i = 0; i <= grid_size; ++i) {
    grid_[i] = lo + i * step_;
    fvals[i] = fbar_at(grid_[i]);
    fmin = std::min(fmin, fvals[i]);
  }
  for (int i = 0; i <= grid_size; ++i) density_[i] = std::exp(-beta * (fvals[i] - fmin));

  // Composite-Simpson normalization, with the half-resolution value as the
  // coarseness check.
  auto simpson = [&](int stride) {
    KahanSum s;
    for (int i = 0; i + 2 * stride <= grid_size; i += 2 * stride) {
      s.add(density_[i] + 4.0 * density_[i + stride] + density_[i + 2 * stride]);
    }
    return s.value() * (stride * step_) / 3.0;
  };
  double Z = simpson(1);
  if (grid_size % 4 == 0) {
    double Z2 = simpson(2);
    if (std::abs(Z - Z2) > 1e-6 * std::max(Z, 1e-300)) {
      throw std::runtime_error("GibbsReference1D: grid too coarse (normalization residual)");
    }
  }
  for (auto& d : density_) d /= Z;

  // CDF of the piecewise-linear density, rescaled so cdf(hi) == 1 exactly.
  cdf_.resize(grid_size + 1);
  KahanSum c;
  cdf_[0] = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    c.add(0.5 * (density_[i] + density_[i + 1]) * step_);
    cdf_[i + 1] = c.value();
  }
  double total = cdf_.back();
  if (!(total > 0.0)) throw std::runtime_error("GibbsReference1D: degenerate density");
  for (auto& v : cdf_) v /= total;
  for (auto& d : density_) d /= total;
}

double GibbsReference1D::density(double x) const {
  if (x <= lo_ || x >= hi_) return x == lo_ ? density_.front() : (x == hi_ ? density_.back() : 0.0);
  int i = static_cast<int>((x - lo_) / step_);
  i = std::min<int>(i, static_cast<int>(grid_.size()) - 2);
  double t = (x - grid_[i]) / step_;
  return (1.0 - t) * density_[i] + t * density_[i + 1];
}

double GibbsReference1D::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  int i = static_cast<int>((x - lo_) / step_);
  i = std::min<int>(i, static_cast<int>(grid_.size()) - 2);
  double t = x - grid_[i];
  double slope = (density_[i + 1] - density_[i]) / step_;
  return cdf_[i] + density_[i] * t + 0.5 * slope * t * t;
}

double GibbsReference1D::quantile(double u) const {
  if (u <= 0.0) return lo_;
  if (u >= 1.0) return hi_;
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  int i = static_cast<int>(it - cdf_.begin()) - 1;
  i = std::clamp<int>(i, 0, static_cast<int>(grid_.size()) - 2);
  double rem = u - cdf_[i];
  double d0 = density_[i];
  double slope = (density_[i + 1] - density_[i]) / step_;
  // Solve d0 t + slope t^2 / 2 = rem for t in [0, step].
  double t;
  if (std::abs(slope) < 1e-14 * std::max(d0, 1.0)) {
    t = d0 > 0.0 ? rem / d0 : 0.0;
  } else {
    double disc = d0 * d0 + 2.0 * slope * rem;
    t = (-d0 + std::sqrt(std::max(disc, 0.0))) / slope;
  }
  t = std::clamp(t, 0.0, step_);
  return grid_[i] + t;
}

double GibbsReference1D::mean() const {
  KahanSum s;
  const int n = static_cast<int>(grid_.size()) - 1;
  for (int i = 0; i < n; ++i) {
    // Exact first moment of the linear density piece.
    double x0 = grid_[i], x1 = grid_[i + 1];
    double d0 = density_[i], d1 = density_[i + 1];
    s.add(step_ * (d0 * (2 * x0 + x1) + d1 * (x0 + 2 * x1)) / 6.0);
  }
  return s.value();
}

double GibbsReference1D::variance() const {
  double m = mean();
  KahanSum s;
  const int n = static_cast<int>(grid_.size()) - 1;
  for (int i = 0; i < n; ++i) {
    double x0 = grid_[i], x1 = grid_[i + 1];
    double d0 = density_[i], d1 = density_[i + 1];
    // Exact second moment of the linear piece: int x^2 (d0 + (d1-d0)(x-x0)/h) dx.
    double h = step_;
    double i2_flat = (x1 * x1 * x1 - x0 * x0 * x0) / 3.0;
    double i3 = (std::pow(x1, 4) - std::pow(x0, 4)) / 4.0;
    double second = d0 * i2_flat + (d1 - d0) / h * (i3 - x0 * i2_flat);
    s.add(second);
  }
  return s.value() - m * m;
}

SampleSet GibbsReference1D::sample(std::mt19937_64& rng, int n) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = quantile(unif(rng));
  return SampleSet::from_scalars(vals);
}

double GibbsReference1D::w1_to_density(const SampleSet& s) const {
  if (s.points.empty()) throw std::invalid_argument("w1_to_density: empty sample set");
  if (s.dim() != 1) throw std::invalid_argument("w1_to_density: dimension must be 1");
  std::vector<double> pts = s.scalars();
  std::sort(pts.begin(), pts.end());
  const double n = static_cast<double>(pts.size());

  // Breakpoints: grid nodes and clamped sample points, so F_ref is a single
  // quadratic piece on each segment and F_emp is constant there. Simpson per
  // sub-segment (split at the single crossing) is then exact.
  std::vector<double> breaks = grid_;
  for (double p : pts) breaks.push_back(std::clamp(p, lo_, hi_));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Mass of samples strictly below lo (they contribute |x - lo| transported
  // to at least lo; F_emp at lo already accounts inside the interval).
  KahanSum total;
  for (double p : pts) {
    if (p < lo_) total.add(lo_ - p);
    if (p > hi_) total.add(p - hi_);
  }

  auto f_emp = [&](double x) {
    auto it = std::upper_bound(pts.begin(), pts.end(), x);
    return static_cast<double>(it - pts.begin()) / n;
  };
  auto seg = [&](double a, double b, double c) {
    // int_a^b |F_ref - c| with F_ref quadratic on [a, b].
    double fa = cdf(a) - c, fm = cdf(0.5 * (a + b)) - c, fb = cdf(b) - c;
    if ((fa >= 0 && fb >= 0 && fm >= 0) || (fa <= 0 && fb <= 0 && fm <= 0)) {
      return std::abs((b - a) / 6.0 * (fa + 4.0 * fm + fb));
    }
    double x_star = std::clamp(quantile(c), a, b);
    auto piece = [&](double u, double v) {
      double gu = cdf(u) - c, gm = cdf(0.5 * (u + v)) - c, gv = cdf(v) - c;
      return std::abs((v - u) / 6.0 * (gu + 4.0 * gm + gv));
    };
    return piece(a, x_star) + piece(x_star, b);
  };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i], b = breaks[i + 1];
    if (b - a < 1e-300) continue;
    double c = f_emp(0.5 * (a + b));
    total.add(seg(a, b, c));
  }
  return total.value();
}

RejectionResult gibbs_rejection_nd(const ObjectiveModel& model, double beta, const Polyhedron& P,
                                   const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi,
                                   std::mt19937_64& rng, int n) {
  const int d = P.dim();
  if (model.dim != d) throw std::invalid_argument("gibbs_rejection_nd: dimension mismatch");
  if (box_lo.size() != d || box_hi.size() != d) {
    throw std::invalid_argument("gibbs_rejection_nd: box dimension mismatch");
  }

  // Grid scan for the infimum of fbar over K inside the box.
  int per_dim = std::max(2, static_cast<int>(std::floor(std::pow(1e5, 1.0 / d))));
  per_dim = std::min(per_dim, 401);
  double fmin = std::numeric_limits<double>::infinity();
  std::vector<int> idx(d, 0);
  Eigen::VectorXd x(d);
  bool done = false;
  while (!done) {
    for (int j = 0; j < d; ++j) {
      x(j) = box_lo(j) + (box_hi(j) - box_lo(j)) * idx[j] / (per_dim - 1);
    }
    if (contains(P, x, 1e-12)) fmin = std::min(fmin, model.fbar(x));
    int j = 0;
    while (j < d && ++idx[j] == per_dim) {
      idx[j] = 0;
      ++j;
    }
    done = (j == d);
  }
  if (!std::isfinite(fmin)) {
    throw std::runtime_error("gibbs_rejection_nd: grid scan found no point of K in the box");
  }

  RejectionResult out;
  out.samples.points.reserve(n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  while (static_cast<int>(out.samples.points.size()) < n) {
    ++out.proposals;
    for (int j = 0; j < d; ++j) x(j) = box_lo(j) + (box_hi(j) - box_lo(j)) * unif(rng);
    if (!contains(P, x, 0.0)) continue;
    double accept = std::exp(-beta * (model.fbar(x) - fmin));
    if (unif(rng) < std::min(accept, 1.0)) out.samples.points.push_back(x);
    if (out.proposals >= 10000 &&
        static_cast<double>(out.samples.points.size()) / out.proposals < 1e-4) {
      throw std::runtime_error("gibbs_rejection_nd: acceptance rate below 1e-4, aborting");
    }
  }
  out.acceptance_rate = static_cast<double>(n) / out.proposals;
  return out;
}

}  // namespace plv
