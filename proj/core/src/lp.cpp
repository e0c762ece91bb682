#include "plv/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace plv {

namespace {

constexpr double kEps = 1e-9;

// Tableau simplex over rows [m x (n_total + 1)] with the rhs in the last
// column. `basis` holds the basic variable of each row. The objective row is
// kept separately as (z_coeffs, z_value) for "minimize". Bland's rule keeps
// the tiny problems here cycle-free.
struct Tableau {
  Eigen::MatrixXd rows;  // m x (n+1)
  std::vector<int> basis;
  int n = 0;
  int m = 0;

  void pivot(int r, int c) {
    rows.row(r) /= rows(r, c);
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      double f = rows(i, c);
      if (f != 0.0) rows.row(i) -= f * rows.row(r);
    }
    basis[r] = c;
  }

  // Minimize obj'x over the current feasible basis. Returns false if
  // unbounded. `obj` has size n.
  bool minimize(Eigen::VectorXd obj, double& value, const std::vector<bool>& allowed) {
    // Reduced costs: z_j = obj_j - obj_B' B^{-1} A_j, maintained by direct
    // elimination of basic columns from the objective row.
    Eigen::RowVectorXd z(n + 1);
    z.head(n) = obj.transpose();
    z(n) = 0.0;
    for (int i = 0; i < m; ++i) {
      double f = z(basis[i]);
      if (f != 0.0) z -= f * rows.row(i);
    }
    for (;;) {
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (!allowed[j]) continue;
        if (z(j) < -kEps) {
          enter = j;  // Bland: smallest index
          break;
        }
      }
      if (enter < 0) {
        value = -z(n);
        return true;
      }
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double a = rows(i, enter);
        if (a > kEps) {
          double ratio = rows(i, n) / a;
          if (ratio < best - kEps || (ratio < best + kEps && (leave < 0 || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      double f = z(enter);
      pivot(leave, enter);
      z -= f * rows.row(leave);
    }
  }
};

}  // namespace

LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                     const Eigen::VectorXd& b) {
  const int n_orig = static_cast<int>(c.size());
  const int m = static_cast<int>(A.rows());
  if (A.cols() != n_orig || b.size() != m) {
    throw std::invalid_argument("lp_maximize: dimension mismatch");
  }

  // Standard form: x = u - v with u, v >= 0; slacks s >= 0; artificials on
  // rows whose rhs had to be negated.
  // Column layout: [u (n) | v (n) | s (m) | artificials (<= m)].
  const int n_split = 2 * n_orig;
  std::vector<int> art_of_row(m, -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) art_of_row[i] = n_art++;
  }
  const int n_total = n_split + m + n_art;

  Tableau t;
  t.n = n_total;
  t.m = m;
  t.rows = Eigen::MatrixXd::Zero(m, n_total + 1);
  t.basis.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    double sign = (b(i) < 0.0) ? -1.0 : 1.0;
    for (int j = 0; j < n_orig; ++j) {
      t.rows(i, j) = sign * A(i, j);
      t.rows(i, n_orig + j) = -sign * A(i, j);
    }
    t.rows(i, n_split + i) = sign;  // slack
    t.rows(i, n_total) = sign * b(i);
    if (art_of_row[i] >= 0) {
      t.rows(i, n_split + m + art_of_row[i]) = 1.0;
      t.basis[i] = n_split + m + art_of_row[i];
    } else {
      t.basis[i] = n_split + i;
    }
  }

  std::vector<bool> allowed(n_total, true);

  LpResult result;
  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n_total);
    for (int j = n_split + m; j < n_total; ++j) phase1(j) = 1.0;
    double p1val = 0.0;
    if (!t.minimize(phase1, p1val, allowed)) {
      throw std::runtime_error("lp_maximize: phase 1 unbounded (internal error)");
    }
    if (p1val > 1e-7) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive lingering artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] >= n_split + m) {
        for (int j = 0; j < n_split + m; ++j) {
          if (std::abs(t.rows(i, j)) > kEps) {
            t.pivot(i, j);
            break;
          }
        }
      }
    }
    for (int j = n_split + m; j < n_total; ++j) allowed[j] = false;
  }

  Eigen::VectorXd obj = Eigen::VectorXd::Zero(n_total);
  for (int j = 0; j < n_orig; ++j) {
    obj(j) = -c(j);  // minimize -c'x == maximize c'x
    obj(n_orig + j) = c(j);
  }
  double val = 0.0;
  if (!t.minimize(obj, val, allowed)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  Eigen::VectorXd xs = Eigen::VectorXd::Zero(n_total);
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n_total) xs(t.basis[i]) = t.rows(i, n_total);
  }
  result.status = LpStatus::kOptimal;
  result.x = xs.head(n_orig) - xs.segment(n_orig, n_orig);
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace plv
