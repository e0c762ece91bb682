// Empirical 1-Wasserstein distances (exact 1-D quantile coupling, exact
// assignment in any dimension at desk scale, sliced estimator beyond it) and
// Gibbs reference measures: 1-D quadrature with inverse-CDF sampling, and
// n-D rejection sampling from a uniform-on-box envelope.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "plv/objective.hpp"
#include "plv/polytope.hpp"

namespace plv {

struct SampleSet {
  std::vector<Eigen::VectorXd> points;  // uniform weights, constant dimension

  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  std::size_t size() const { return points.size(); }

  static SampleSet from_scalars(const std::vector<double>& values);
  std::vector<double> scalars() const;  // requires dim == 1
};

// Exact empirical W1 in dimension 1 via quantile coupling. Equal sizes pair
// sorted order; unequal sizes integrate |F_a^{-1} - F_b^{-1}| over the merged
// quantile breakpoints.
double w1_1d(const SampleSet& a, const SampleSet& b);

// Exact empirical W1 via optimal assignment (shortest augmenting path on the
// Euclidean cost matrix). Equal sizes only, N <= 2048; larger inputs throw
// with a pointer to w1_sliced.
double w1_exact(const SampleSet& a, const SampleSet& b);

// Sliced estimate: mean over n_proj >= 8 uniform random unit directions of
// the 1-D distance of the projections, with its standard error. A trend
// proxy, not a bound certificate.
std::pair<double, double> w1_sliced(const SampleSet& a, const SampleSet& b, int n_proj,
                                    std::uint64_t seed);

class GibbsReference1D {
 public:
  // density proportional to exp(-beta fbar) on [lo, hi], normalized by
  // composite Simpson on a grid with grid_size intervals (grid_size even).
  // Throws if the normalization residual exceeds 1e-6 on refinement.
  GibbsReference1D(const ObjectiveModel& model, double beta, double lo, double hi, int grid_size);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double density(double x) const;   // linear interpolation on the grid
  double cdf(double x) const;
  double quantile(double u) const;  // inverse CDF, u in [0, 1]
  double mean() const;
  double variance() const;

  SampleSet sample(std::mt19937_64& rng, int n) const;
  // W1 between an empirical sample and this reference: integral of
  // |F_emp - F_ref| over the interval.
  double w1_to_density(const SampleSet& s) const;

 private:
  double lo_, hi_, step_;
  std::vector<double> grid_;     // nodes
  std::vector<double> density_;  // normalized density at nodes
  std::vector<double> cdf_;      // exact piecewise-linear-density CDF at nodes
};

struct RejectionResult {
  SampleSet samples;
  double acceptance_rate = 0.0;
  long proposals = 0;
};

// N exact samples from the Gibbs measure restricted to a bounded K, by
// rejection from uniform on [lo, hi]^n with envelope exp(-beta (fbar - min)).
// The infimum of fbar over K is estimated by a grid scan. Aborts if the
// acceptance rate drops below 1e-4.
RejectionResult gibbs_rejection_nd(const ObjectiveModel& model, double beta, const Polyhedron& P,
                                   const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi,
                                   std::mt19937_64& rng, int n);

}  // namespace plv
