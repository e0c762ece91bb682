// Dense two-phase simplex for the small linear programs used by Chebyshev
// centering. Problems here have at most a few dozen rows, so a tableau
// implementation with Bland's rule is plenty.
#pragma once

#include <Eigen/Dense>

namespace plv {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;       // primal solution when optimal
  double objective = 0.0;  // c'x at the solution
};

// Maximize c'x subject to A x <= b, x free. Variables are split into
// positive/negative parts internally; phase 1 drives artificial variables out
// of the basis, phase 2 optimizes the true objective.
LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                     const Eigen::VectorXd& b);

}  // namespace plv
