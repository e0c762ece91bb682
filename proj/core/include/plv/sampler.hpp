// The projected Langevin iteration and its coupled family of auxiliary
// processes: the algorithm x^A, the mean process x^M, the partially averaged
// pair (x^{M,s}, x^{B,s}), the fine-grid reflected Euler reference x^C, the
// integrated-drift discrete map x^D, and a reflection-coupled pair. All
// processes consume one shared NoiseRealization so that pathwise comparisons
// match the coupled constructions they come from.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "plv/mixing.hpp"
#include "plv/objective.hpp"
#include "plv/polytope.hpp"
#include "plv/skorokhod.hpp"

namespace plv {

struct SamplerConfig {
  double eta = 0.01;       // step size
  double beta = 1.0;       // inverse temperature
  int steps = 100;         // coarse horizon T
  std::uint64_t seed = 0;
  int substeps = 64;       // fine grid per coarse step for x^C
  Eigen::VectorXd x0;      // initial point (must lie in K)
  bool zero_noise = false; // diagnostic toggle: drop the Gaussian term

  double noise_scale() const;  // sqrt(2 eta / beta), or 0 in zero-noise mode

  // Corrected step-size admissibility for the convergence bound.
  // eta <= min{1/4, mu / (4 ell^2)}.
  bool eta_admissible(double ell, double mu) const;
};

// One realization of all randomness a bundle consumes: Brownian increments on
// the fine grid (coarse increment w_hat_k is their exact substep sum) and the
// data sequence z_0..z_{T-1}.
struct NoiseRealization {
  int dim = 0;
  int steps = 0;
  int substeps = 1;
  std::vector<Eigen::VectorXd> fine;    // steps * substeps increments, N(0, dt I)
  std::vector<Eigen::VectorXd> coarse;  // per-step sums of the fine increments
  std::vector<Eigen::VectorXd> z;       // data values z_k

  static NoiseRealization generate(const SamplerConfig& cfg, int dim, const StreamSpec& stream);
};

// x_{k+1} = proj_K(x_k - eta grad f(x_k, z_k) + sqrt(2 eta / beta) w_hat_k).
DiscretePath run_algorithm(const Polyhedron& P, const ObjectiveModel& model,
                           const StreamSpec& stream, const SamplerConfig& cfg);
DiscretePath run_algorithm(const Polyhedron& P, const ObjectiveModel& model,
                           const SamplerConfig& cfg, const NoiseRealization& noise);

// Same recursion with the averaged gradient.
DiscretePath run_mean(const Polyhedron& P, const ObjectiveModel& model, const SamplerConfig& cfg,
                      const NoiseRealization& noise);

// Partially averaged pair: x^{M,s} drives its own state with the lag-s
// conditional gradient; x^{B,s} applies the lag-(s+1) conditional gradient
// evaluated at x^{M,s} (not at its own state). The two are always
// co-simulated. s = 0 reproduces the algorithm bitwise; lags reaching past
// time zero fall back to the averaged gradient.
struct AveragedPair {
  DiscretePath m;  // x^{M,s}
  DiscretePath b;  // x^{B,s}
};
AveragedPair run_partially_averaged(const Polyhedron& P, const ObjectiveModel& model,
                                    const StreamSpec& stream, const SamplerConfig& cfg,
                                    const NoiseRealization& noise, int s);

// Fine-grid projected Euler for the reflected SDE, dt = 1 / substeps per
// coarse step; coarse samples are taken every `substeps` fine steps.
struct FineTrajectory {
  int substeps = 1;
  std::vector<Eigen::VectorXd> fine;  // length steps * substeps + 1
  DiscretePath coarse;                // length steps + 1
};
FineTrajectory run_fine_c(const Polyhedron& P, const ObjectiveModel& model,
                          const SamplerConfig& cfg, const NoiseRealization& noise);

// Discrete map driven by the integrated drift of the fine trajectory:
// x^D_{k+1} = proj_K(x^D_k - eta sum_j grad fbar(xi_j) dt + sqrt(2 eta/beta) w_hat_k).
DiscretePath run_d(const Polyhedron& P, const ObjectiveModel& model, const SamplerConfig& cfg,
                   const FineTrajectory& fine_c, const NoiseRealization& noise);

// Reflection coupling on the fine grid: the second chain receives the
// mirrored increment (I - 2 u u') dw until the states come within 1e-9, after
// which they are merged exactly and share increments.
struct CoupledPair {
  DiscretePath a;            // coarse checkpoints of the first chain
  DiscretePath b;            // coarse checkpoints of the second chain
  long coupling_fine_step = -1;  // fine step index at merge, -1 if never
  double coupling_time = -1.0;   // in coarse-step units, -1 if never
};
CoupledPair run_coupled_pair(const Polyhedron& P, const ObjectiveModel& model,
                             const SamplerConfig& cfg, const Eigen::VectorXd& x0_a,
                             const Eigen::VectorXd& x0_b);

// Everything at once over one noise realization, for the CLI sample command.
struct ProcessBundle {
  NoiseRealization noise;
  DiscretePath x_a;
  DiscretePath x_m;
  std::vector<int> s_values;
  std::vector<AveragedPair> averaged;  // one per requested s
  FineTrajectory x_c;
  DiscretePath x_d;
};
ProcessBundle run_bundle(const Polyhedron& P, const ObjectiveModel& model,
                         const StreamSpec& stream, const SamplerConfig& cfg,
                         const std::vector<int>& s_values);

}  // namespace plv
