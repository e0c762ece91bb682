// Objective models f(x, z) whose gradient in x is affine in z:
//   grad f(x, z) = g0(x) + G1(x) z.
// The affine structure makes conditional expectations of the gradient exact
// for the linear data streams, which the partially averaged processes need.
// Regularity constants (ell, mu, R) are declared by the model builder and
// checked numerically by validate_regularity, never inferred.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>

#include "plv/mixing.hpp"
#include "plv/polytope.hpp"

namespace plv {

struct ObjectiveModel {
  int dim = 0;    // x dimension n
  int z_dim = 0;  // data dimension d
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_base;      // g0
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> grad_coupling;  // G1 (n x d)
  Eigen::VectorXd mean_z;
  std::function<double(const Eigen::VectorXd&)> fbar;
  double ell = 0.0;         // declared Lipschitz constant of grad in (x, z)
  double mu = 0.0;          // declared strong-convexity modulus outside radius R
  double R = 0.0;           // radius of the allowed non-convex region
  double grad0_norm = 0.0;  // ||mean_grad(0)||
  double fbar0 = 0.0;       // fbar(0)
  std::string name;

  Eigen::VectorXd grad(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const;
  Eigen::VectorXd mean_grad(const Eigen::VectorXd& x) const;
};

// E[grad f(x, z_k) | z_{k-s}] for the linear streams: the lagged conditional
// mean of z_k is coeff^s z_lagged (IID behaves as coeff = 0). A negative lag
// index (s > k, trivial sigma-algebra) is expressed by calling with
// z_lagged = model.mean_z and s = 0.
Eigen::VectorXd conditional_grad(const ObjectiveModel& model, const StreamSpec& stream,
                                 const Eigen::VectorXd& x, const Eigen::VectorXd& z_lagged, int s);

// Built-in models.
// Coupled quadratic: f(x, z) = (mu/2)||x||^2 + x'Bz; fbar = (mu/2)||x||^2.
ObjectiveModel coupled_quadratic(int dim, double mu, const Eigen::MatrixXd& B);
// 1-D double well: f(x, z) = x^4/4 - x^2/2 + 0.1 x z on an interval.
// Declared ell = max|3x^2 - 1| over [-half_width, half_width].
ObjectiveModel double_well_1d(double half_width = 2.0);
// 2-D double well rotated by `angle`: fbar(x) = w(u1) + u2^2/2 with u = Q'x,
// coupling 0.1 * first rotated coordinate.
ObjectiveModel rotated_double_well_2d(double angle, double half_width = 2.0);

struct RegularityReport {
  bool ok = true;
  double max_x_lipschitz = 0.0;  // observed gradient Lipschitz ratio in x
  double max_z_lipschitz = 0.0;  // observed gradient Lipschitz ratio in z
  double min_convexity = 0.0;    // observed monotonicity modulus at distance >= R
  bool convexity_checked = false;
  double max_grad_fd_error = 0.0;  // mean_grad vs finite-difference fbar
  std::string failure;             // names the witness pair when a check fails
};

// Samples point pairs in `domain` (bounded) and checks the declared ell / mu /
// R plus finite-difference agreement of mean_grad with fbar.
RegularityReport validate_regularity(const ObjectiveModel& model, const Polyhedron& domain,
                                     int n_pairs, std::uint64_t seed);

}  // namespace plv
