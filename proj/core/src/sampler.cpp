#include "plv/sampler.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "plv/numerics.hpp"

namespace plv {

double SamplerConfig::noise_scale() const {
  if (zero_noise) return 0.0;
  return std::sqrt(2.0 * eta / beta);
}

bool SamplerConfig::eta_admissible(double ell, double mu) const {
  return eta <= std::min(0.25, mu / (4.0 * ell * ell));
}

NoiseRealization NoiseRealization::generate(const SamplerConfig& cfg, int dim,
                                            const StreamSpec& stream) {
  if (cfg.substeps < 1) throw std::invalid_argument("NoiseRealization: substeps must be >= 1");
  NoiseRealization nr;
  nr.dim = dim;
  nr.steps = cfg.steps;
  nr.substeps = cfg.substeps;

  std::mt19937_64 rng(derive_seed(cfg.seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double dt_sqrt = std::sqrt(1.0 / static_cast<double>(cfg.substeps));
  nr.fine.reserve(static_cast<std::size_t>(cfg.steps) * cfg.substeps);
  nr.coarse.reserve(cfg.steps);
  for (int k = 0; k < cfg.steps; ++k) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    for (int j = 0; j < cfg.substeps; ++j) {
      Eigen::VectorXd dw(dim);
      for (int d = 0; d < dim; ++d) dw(d) = dt_sqrt * normal(rng);
      sum += dw;
      nr.fine.push_back(std::move(dw));
    }
    nr.coarse.push_back(std::move(sum));
  }

  StreamSpec s = stream;
  s.seed = derive_seed(cfg.seed, 1);
  DataStream ds(s);
  nr.z.reserve(cfg.steps);
  for (int k = 0; k < cfg.steps; ++k) {
    nr.z.push_back(ds.state());
    ds.next();
  }
  return nr;
}

namespace {

Eigen::VectorXd initial_point(const Polyhedron& P, const SamplerConfig& cfg) {
  Eigen::VectorXd x0 = cfg.x0.size() ? cfg.x0 : Eigen::VectorXd::Zero(P.dim());
  if (x0.size() != P.dim()) throw std::invalid_argument("sampler: x0 dimension mismatch");
  if (!contains(P, x0, 1e-9)) throw std::invalid_argument("sampler: x0 must lie in K");
  return x0;
}

}  // namespace

DiscretePath run_algorithm(const Polyhedron& P, const ObjectiveModel& model,
                           const StreamSpec& stream, const SamplerConfig& cfg) {
  // Standalone variant: coarse Gaussian increments drawn directly, which is
  // equal in law to summing fine increments but avoids materializing them.
  DiscretePath traj;
  traj.values.reserve(cfg.steps + 1);
  traj.values.push_back(initial_point(P, cfg));
  std::mt19937_64 rng(derive_seed(cfg.seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  StreamSpec s = stream;
  s.seed = derive_seed(cfg.seed, 1);
  DataStream ds(s);
  const double sigma = cfg.noise_scale();
  for (int k = 0; k < cfg.steps; ++k) {
    const Eigen::VectorXd& x = traj.values.back();
    Eigen::VectorXd w(P.dim());
    for (int d = 0; d < P.dim(); ++d) w(d) = normal(rng);
    Eigen::VectorXd step = x - cfg.eta * model.grad(x, ds.state()) + sigma * w;
    traj.values.push_back(project(P, step));
    ds.next();
  }
  return traj;
}

DiscretePath run_algorithm(const Polyhedron& P, const ObjectiveModel& model,
                           const SamplerConfig& cfg, const NoiseRealization& noise) {
  DiscretePath traj;
  traj.values.reserve(cfg.steps + 1);
  traj.values.push_back(initial_point(P, cfg));
  const double sigma = cfg.noise_scale();
  for (int k = 0; k < cfg.steps; ++k) {
    const Eigen::VectorXd& x = traj.values.back();
    Eigen::VectorXd step = x - cfg.eta * model.grad(x, noise.z[k]) + sigma * noise.coarse[k];
    traj.values.push_back(project(P, step));
  }
  return traj;
}

DiscretePath run_mean(const Polyhedron& P, const ObjectiveModel& model, const SamplerConfig& cfg,
                      const NoiseRealization& noise) {
  DiscretePath traj;
  traj.values.reserve(cfg.steps + 1);
  traj.values.push_back(initial_point(P, cfg));
  const double sigma = cfg.noise_scale();
  for (int k = 0; k < cfg.steps; ++k) {
    const Eigen::VectorXd& x = traj.values.back();
    Eigen::VectorXd step = x - cfg.eta * model.grad(x, model.mean_z) + sigma * noise.coarse[k];
    traj.values.push_back(project(P, step));
  }
  return traj;
}

AveragedPair run_partially_averaged(const Polyhedron& P, const ObjectiveModel& model,
                                    const StreamSpec& stream, const SamplerConfig& cfg,
                                    const NoiseRealization& noise, int s) {
  if (s < 0) throw std::invalid_argument("run_partially_averaged: s must be >= 0");
  AveragedPair pair;
  Eigen::VectorXd x0 = initial_point(P, cfg);
  pair.m.values.reserve(cfg.steps + 1);
  pair.b.values.reserve(cfg.steps + 1);
  pair.m.values.push_back(x0);
  pair.b.values.push_back(x0);
  const double sigma = cfg.noise_scale();
  for (int k = 0; k < cfg.steps; ++k) {
    const Eigen::VectorXd& xm = pair.m.values.back();
    const Eigen::VectorXd& xb = pair.b.values.back();
    // Lag-s conditioning; lags reaching past time zero hit the trivial
    // sigma-algebra and collapse to the averaged gradient (scale 1, mean z).
    Eigen::VectorXd gm = (k >= s) ? conditional_grad(model, stream, xm, noise.z[k - s], s)
                                  : conditional_grad(model, stream, xm, model.mean_z, 0);
    // x^{B,s}: lag-(s+1) conditional gradient evaluated at x^{M,s}.
    Eigen::VectorXd gb = (k >= s + 1)
                             ? conditional_grad(model, stream, xm, noise.z[k - s - 1], s + 1)
                             : conditional_grad(model, stream, xm, model.mean_z, 0);
    pair.m.values.push_back(project(P, Eigen::VectorXd(xm - cfg.eta * gm + sigma * noise.coarse[k])));
    pair.b.values.push_back(project(P, Eigen::VectorXd(xb - cfg.eta * gb + sigma * noise.coarse[k])));
  }
  return pair;
}

FineTrajectory run_fine_c(const Polyhedron& P, const ObjectiveModel& model,
                          const SamplerConfig& cfg, const NoiseRealization& noise) {
  FineTrajectory ft;
  ft.substeps = cfg.substeps;
  Eigen::VectorXd x = initial_point(P, cfg);
  ft.fine.reserve(static_cast<std::size_t>(cfg.steps) * cfg.substeps + 1);
  ft.coarse.values.reserve(cfg.steps + 1);
  ft.fine.push_back(x);
  ft.coarse.values.push_back(x);
  const double sigma = cfg.noise_scale();
  const double dt = 1.0 / static_cast<double>(cfg.substeps);
  for (int k = 0; k < cfg.steps; ++k) {
    for (int j = 0; j < cfg.substeps; ++j) {
      const Eigen::VectorXd& dw = noise.fine[static_cast<std::size_t>(k) * cfg.substeps + j];
      Eigen::VectorXd step =
          x - cfg.eta * (model.grad(x, model.mean_z) * dt) + sigma * dw;
      x = project(P, step);
      ft.fine.push_back(x);
    }
    ft.coarse.values.push_back(x);
  }
  return ft;
}

DiscretePath run_d(const Polyhedron& P, const ObjectiveModel& model, const SamplerConfig& cfg,
                   const FineTrajectory& fine_c, const NoiseRealization& noise) {
  if (fine_c.substeps != cfg.substeps) {
    throw std::invalid_argument("run_d: fine trajectory substep mismatch");
  }
  DiscretePath traj;
  traj.values.reserve(cfg.steps + 1);
  traj.values.push_back(initial_point(P, cfg));
  const double sigma = cfg.noise_scale();
  const double dt = 1.0 / static_cast<double>(cfg.substeps);
  for (int k = 0; k < cfg.steps; ++k) {
    // Left-endpoint Riemann sum of the averaged drift along the fine path.
    Eigen::VectorXd drift = Eigen::VectorXd::Zero(P.dim());
    for (int j = 0; j < cfg.substeps; ++j) {
      const Eigen::VectorXd& xi = fine_c.fine[static_cast<std::size_t>(k) * cfg.substeps + j];
      drift += model.grad(xi, model.mean_z) * dt;
    }
    const Eigen::VectorXd& x = traj.values.back();
    Eigen::VectorXd step = x - cfg.eta * drift + sigma * noise.coarse[k];
    traj.values.push_back(project(P, step));
  }
  return traj;
}

CoupledPair run_coupled_pair(const Polyhedron& P, const ObjectiveModel& model,
                             const SamplerConfig& cfg, const Eigen::VectorXd& x0_a,
                             const Eigen::VectorXd& x0_b) {
  if (!contains(P, x0_a, 1e-9) || !contains(P, x0_b, 1e-9)) {
    throw std::invalid_argument("run_coupled_pair: both starts must lie in K");
  }
  constexpr double kCoupleTol = 1e-9;
  CoupledPair cp;
  Eigen::VectorXd xa = x0_a;
  Eigen::VectorXd xb = x0_b;
  bool coupled = (xa - xb).norm() < kCoupleTol;
  if (coupled) {
    xb = xa;
    cp.coupling_fine_step = 0;
    cp.coupling_time = 0.0;
  }
  cp.a.values.push_back(xa);
  cp.b.values.push_back(xb);

  std::mt19937_64 rng(derive_seed(cfg.seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sigma = cfg.noise_scale();
  const double dt = 1.0 / static_cast<double>(cfg.substeps);
  const double dt_sqrt = std::sqrt(dt);
  long fine_index = 0;
  for (int k = 0; k < cfg.steps; ++k) {
    for (int j = 0; j < cfg.substeps; ++j) {
      ++fine_index;
      Eigen::VectorXd dw(P.dim());
      for (int d = 0; d < P.dim(); ++d) dw(d) = dt_sqrt * normal(rng);
      Eigen::VectorXd next_a =
          project(P, Eigen::VectorXd(xa - cfg.eta * (model.grad(xa, model.mean_z) * dt) + sigma * dw));
      if (coupled) {
        xa = next_a;
        xb = next_a;
        continue;
      }
      // Mirror the increment across the hyperplane orthogonal to the current
      // difference direction.
      Eigen::VectorXd diff = xa - xb;
      Eigen::VectorXd u = diff / diff.norm();
      Eigen::VectorXd dw_b = dw - 2.0 * u.dot(dw) * u;
      Eigen::VectorXd next_b =
          project(P, Eigen::VectorXd(xb - cfg.eta * (model.grad(xb, model.mean_z) * dt) + sigma * dw_b));
      xa = next_a;
      xb = next_b;
      // The exact-hit event of the continuous coupling is approximated by two
      // triggers: the states land within tolerance, or the difference along
      // the coupling direction crosses zero inside this fine step (the
      // continuous interpolant then passes through zero distance).
      if ((xa - xb).norm() < kCoupleTol || u.dot(xa - xb) <= 0.0) {
        coupled = true;
        xb = xa;  // exact merge
        cp.coupling_fine_step = fine_index;
        cp.coupling_time = static_cast<double>(fine_index) * dt;
      }
    }
    cp.a.values.push_back(xa);
    cp.b.values.push_back(xb);
  }
  return cp;
}

ProcessBundle run_bundle(const Polyhedron& P, const ObjectiveModel& model,
                         const StreamSpec& stream, const SamplerConfig& cfg,
                         const std::vector<int>& s_values) {
  ProcessBundle bundle;
  bundle.noise = NoiseRealization::generate(cfg, P.dim(), stream);
  bundle.x_a = run_algorithm(P, model, cfg, bundle.noise);
  bundle.x_m = run_mean(P, model, cfg, bundle.noise);
  bundle.s_values = s_values;
  for (int s : s_values) {
    bundle.averaged.push_back(run_partially_averaged(P, model, stream, cfg, bundle.noise, s));
  }
  bundle.x_c = run_fine_c(P, model, cfg, bundle.noise);
  bundle.x_d = run_d(P, model, cfg, bundle.x_c, bundle.noise);
  return bundle;
}

}  // namespace plv
