// The named-constant ledger of the convergence analysis: the concave distance
// distortion delta built from the chain h -> phi -> Phi -> xi -> g -> delta,
// the contraction rate a = 2 xi / beta, the coefficient stack c1..c13, the
// convergence-bound evaluators, and the conservative inscribed-radius
// estimate used by the suboptimality bound.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "plv/objective.hpp"
#include "plv/polytope.hpp"
#include "plv/skorokhod.hpp"

namespace plv {

struct ProblemParams {
  int n = 1;                 // state dimension
  double beta = 1.0;         // inverse temperature
  double eta = 0.01;         // step size
  double ell = 1.0;          // gradient Lipschitz constant
  double mu = 1.0;           // strong-convexity modulus outside radius R
  double R = 0.0;            // non-convexity radius
  double varsigma = 0.0;     // initial second-moment bound E||x_0||^2
  double grad0_norm = 0.0;   // ||grad fbar(0)||
  double fbar0 = 0.0;        // fbar(0)
  double M2z = 0.0;          // second-moment bound of the data stream
  double Psi2z = 0.0;        // summed mixing coefficient of the data stream
  SkorokhodConstants skorokhod;

  // Corrected admissibility for the convergence bound.
  bool eta_admissible() const;
};

// Local expansion/contraction rate of the coupled difference process:
// eta ell below radius R, -eta mu at and beyond it.
double kappa(const ProblemParams& p, double r);

// The concave metric generator. h(r) = beta ell min(r, R)^2 / 8 (the step
// size and the diffusion coefficient cancel), phi = exp(-h),
// Phi(r) = int_0^r phi, R1 = R/2 + (1/2) sqrt(R^2 + (32/(mu beta)) e^{h(R)}),
// 1/xi = int_0^{R1} Phi/phi, g(r) = 1 - (xi/2) int_0^{min(r,R1)} Phi/phi,
// delta(r) = int_0^r phi g. Beyond R every integrand has constant phi, so
// closed forms take over; on [0, R] cumulative Simpson grids (with
// derivative-exact Hermite interpolation) carry the quadrature.
class MetricChain {
 public:
  explicit MetricChain(const ProblemParams& p, int grid_intervals = 8192);

  double h(double r) const;
  double phi(double r) const;
  double Phi(double r) const;
  double Psi(double r) const;  // int_0^r Phi/phi
  double g(double r) const;
  double delta(double r) const;
  double delta_prime(double r) const;

  double R1() const { return R1_; }
  double xi() const { return xi_; }
  double a() const { return a_; }            // 2 xi / beta
  double phi_at_R() const { return phi_R_; }
  double h_at_R() const { return h_R_; }

 private:
  double lookup(const std::vector<double>& vals, const std::vector<double>& derivs,
                double r) const;

  double beta_, ell_, mu_, R_;
  double coef_;  // beta ell / 8
  double h_R_, phi_R_, R1_, xi_, a_;
  double Phi_R_ = 0.0, Psi_R_ = 0.0, delta_R_ = 0.0, delta_R1_ = 0.0;
  int grid_ = 0;
  double step_ = 0.0;
  std::vector<double> Phi_grid_, Psi_grid_, delta_grid_;
  std::vector<double> Phi_d_, Psi_d_, delta_d_;  // exact derivatives at nodes
};

struct ConstantLedger {
  double h_at_R = 0.0;
  double phi_at_R = 0.0;
  double R1 = 0.0;
  double xi = 0.0;
  double a = 0.0;        // 2 xi / beta
  double a_lower = 0.0;  // analytic floor on a
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double c6 = 0.0;   // geometric-drift constant
  double c7 = 0.0;   // algorithm second-moment constant
  double c8 = 0.0, c9 = 0.0, c10 = 0.0, c11 = 0.0;
  double c13 = 0.0;  // suboptimality entropy constant (needs r_min; see below)
  double coef_exp = 0.0;      // c1 + c2 sqrt(varsigma)
  double coef_sqrt = 0.0;     // c3 + c4 sqrt(varsigma)
  double coef_schedule = 0.0; // c1 + c2 sqrt(vs) + (c3 + c4 sqrt(vs)) / sqrt(2a)
};

// Evaluates every ledger entry from the problem parameters and the Skorokhod
// constants (c5 = c_diam enters through c8..c10). c13 is left at 0 here; it
// needs an inscribed-radius estimate and is filled by suboptimality_c13.
ConstantLedger ledger(const ProblemParams& p, int grid_intervals = 8192);

// (c1 + c2 sqrt(vs)) e^{-eta a k} + (c3 + c4 sqrt(vs)) sqrt(eta log(1/eta)).
double convergence_bound(const ProblemParams& p, const ConstantLedger& led, long k);
// The eta = log T / (2 a T) schedule form:
// (c1 + c2 sqrt(vs) + (c3 + c4 sqrt(vs)) / sqrt(2a)) T^{-1/2} log T.
double convergence_bound_schedule(const ProblemParams& p, const ConstantLedger& led, long T);

double suboptimality_c13(const ProblemParams& p, const ConstantLedger& led, double r_min);
// c12 w1 + (n/beta)(max{log varsigma, 0} + c13), c12 = ell D + ||grad fbar(0)||.
double suboptimality_compact(const ProblemParams& p, const ConstantLedger& led, double diameter,
                             double w1, double r_min);

struct RMinEstimate {
  double r_min = 0.0;
  double epsilon = 0.0;  // radius of the ball around each boundary point
  int n_points = 0;
  bool estimated = true;  // provenance flag: sampled, not exact
};

// Conservative inscribed-radius estimate: ray-shoot n_points random
// directions from the Chebyshev center to the boundary and take the smallest
// ball-constrained Chebyshev radius with the temperature-dependent epsilon.
RMinEstimate estimate_r_min(const Polyhedron& P, const ProblemParams& p, int n_points = 1000,
                            std::uint64_t seed = 0);

// Ledger JSON: flat object keyed by constant name, entries {value, formula_ref}.
std::string ledger_json(const ProblemParams& p, const ConstantLedger& led);

}  // namespace plv
