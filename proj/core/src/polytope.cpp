#include "plv/polytope.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "plv/lp.hpp"

namespace plv {

namespace {

constexpr double kUnitRowTol = 1e-12;
constexpr double kActiveTol = 1e-8;
constexpr int kDykstraMaxSweeps = 100000;

// Nonnegative least squares min ||A'lambda - v|| via Lawson-Hanson active
// set. Sizes here are tiny (a handful of active constraints).
double nnls_residual(const Eigen::MatrixXd& At, const Eigen::VectorXd& v) {
  const int k = static_cast<int>(At.cols());
  std::vector<bool> passive(k, false);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd resid = v;
  for (int outer = 0; outer < 30 * (k + 1); ++outer) {
    // Most-violated KKT multiplier among the zero set.
    Eigen::VectorXd w = At.transpose() * resid;
    int best = -1;
    double best_w = 1e-12;
    for (int j = 0; j < k; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = true;
    for (;;) {
      std::vector<int> idx;
      for (int j = 0; j < k; ++j)
        if (passive[j]) idx.push_back(j);
      Eigen::MatrixXd Ap(At.rows(), idx.size());
      for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(c) = At.col(idx[c]);
      Eigen::VectorXd sol = Ap.colPivHouseholderQr().solve(v);
      bool all_pos = true;
      for (std::size_t c = 0; c < idx.size(); ++c)
        if (sol(c) <= 0.0) all_pos = false;
      if (all_pos) {
        lambda.setZero();
        for (std::size_t c = 0; c < idx.size(); ++c) lambda(idx[c]) = sol(c);
        break;
      }
      // Step back toward the previous iterate until a variable hits zero.
      double alpha = 1.0;
      for (std::size_t c = 0; c < idx.size(); ++c) {
        if (sol(c) <= 0.0) {
          double lj = lambda(idx[c]);
          double a = lj / (lj - sol(c));
          alpha = std::min(alpha, a);
        }
      }
      for (std::size_t c = 0; c < idx.size(); ++c) {
        int j = idx[c];
        lambda(j) += alpha * (sol(c) - lambda(j));
        if (lambda(j) <= 1e-14) {
          lambda(j) = 0.0;
          passive[j] = false;
        }
      }
    }
    resid = v - At * lambda;
    if (resid.norm() < 1e-14) break;
  }
  return (v - At * lambda).norm();
}

}  // namespace

Polyhedron::Polyhedron(Eigen::MatrixXd normals, Eigen::VectorXd offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  const int m = static_cast<int>(normals_.rows());
  const int n = static_cast<int>(normals_.cols());
  if (m < 1 || n < 1) throw std::invalid_argument("Polyhedron: need m >= 1, n >= 1");
  if (offsets_.size() != m) throw std::invalid_argument("Polyhedron: offsets size mismatch");
  for (int i = 0; i < m; ++i) {
    if (std::abs(normals_.row(i).norm() - 1.0) > kUnitRowTol) {
      throw std::invalid_argument("Polyhedron: row " + std::to_string(i) + " is not unit norm");
    }
    if (!(offsets_(i) > 0.0)) {
      throw std::invalid_argument("Polyhedron: offset b_" + std::to_string(i) +
                                  " must be > 0 (origin strictly interior)");
    }
  }
  // Box detection: every row is +-e_j. Projection is then a coordinate clamp.
  is_box_ = true;
  box_lower_ = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
  box_upper_ = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < m && is_box_; ++i) {
    int nz = -1;
    for (int j = 0; j < n; ++j) {
      if (normals_(i, j) != 0.0) {
        if (nz >= 0 || std::abs(std::abs(normals_(i, j)) - 1.0) > kUnitRowTol) {
          is_box_ = false;
          break;
        }
        nz = j;
      }
    }
    if (!is_box_ || nz < 0) {
      is_box_ = false;
      break;
    }
    if (normals_(i, nz) > 0.0) {
      box_upper_(nz) = std::min(box_upper_(nz), offsets_(i) / normals_(i, nz));
    } else {
      box_lower_(nz) = std::max(box_lower_(nz), offsets_(i) / normals_(i, nz));
    }
  }
}

Polyhedron Polyhedron::box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  const int n = static_cast<int>(lower.size());
  if (upper.size() != n) throw std::invalid_argument("box: bound size mismatch");
  Eigen::MatrixXd A(2 * n, n);
  Eigen::VectorXd b(2 * n);
  A.setZero();
  for (int j = 0; j < n; ++j) {
    A(2 * j, j) = 1.0;
    b(2 * j) = upper(j);
    A(2 * j + 1, j) = -1.0;
    b(2 * j + 1) = -lower(j);
  }
  return Polyhedron(std::move(A), std::move(b));
}

Polyhedron Polyhedron::interval(double lo, double hi) {
  Eigen::VectorXd l(1), u(1);
  l << lo;
  u << hi;
  return box(l, u);
}

Polyhedron Polyhedron::half_line(double lo) {
  Eigen::MatrixXd A(1, 1);
  Eigen::VectorXd b(1);
  A << -1.0;
  b << -lo;
  return Polyhedron(std::move(A), std::move(b));
}

Polyhedron Polyhedron::half_space(const Eigen::VectorXd& a, double b) {
  Eigen::MatrixXd A(1, a.size());
  A.row(0) = a.transpose();
  Eigen::VectorXd bv(1);
  bv << b;
  return Polyhedron(std::move(A), std::move(bv));
}

Polyhedron Polyhedron::load_text(std::istream& in) {
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> offs;
  std::string line;
  int n = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) continue;
    auto bar = line.find('|');
    if (bar == std::string::npos) {
      throw std::runtime_error("polyhedron text: missing '|' on line " + std::to_string(lineno));
    }
    std::istringstream lhs(line.substr(0, bar));
    std::vector<double> coeffs;
    double v;
    while (lhs >> v) coeffs.push_back(v);
    std::istringstream rhs(line.substr(bar + 1));
    double b;
    if (!(rhs >> b)) {
      throw std::runtime_error("polyhedron text: missing offset on line " + std::to_string(lineno));
    }
    if (coeffs.empty()) {
      throw std::runtime_error("polyhedron text: empty normal on line " + std::to_string(lineno));
    }
    if (n < 0) n = static_cast<int>(coeffs.size());
    if (static_cast<int>(coeffs.size()) != n) {
      throw std::runtime_error("polyhedron text: inconsistent dimension on line " +
                               std::to_string(lineno));
    }
    Eigen::VectorXd a = Eigen::Map<Eigen::VectorXd>(coeffs.data(), n);
    double norm = a.norm();
    if (norm < 1e-14) {
      throw std::runtime_error("polyhedron text: zero normal on line " + std::to_string(lineno));
    }
    rows.push_back(a / norm);
    offs.push_back(b / norm);
    if (!(offs.back() > 0.0)) {
      throw std::runtime_error("polyhedron text: nonpositive normalized offset on line " +
                               std::to_string(lineno));
    }
  }
  if (rows.empty()) throw std::runtime_error("polyhedron text: no constraints");
  Eigen::MatrixXd A(rows.size(), n);
  Eigen::VectorXd b(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    A.row(i) = rows[i].transpose();
    b(i) = offs[i];
  }
  return Polyhedron(std::move(A), std::move(b));
}

Polyhedron Polyhedron::load_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polyhedron file: " + path);
  return load_text(in);
}

void Polyhedron::save_text(std::ostream& out) const {
  for (int i = 0; i < num_constraints(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      out << normals_(i, j) << ' ';
    }
    out << "| " << offsets_(i) << '\n';
  }
}

bool contains(const Polyhedron& P, const Eigen::VectorXd& x, double tol) {
  if (x.size() != P.dim()) throw std::invalid_argument("contains: dimension mismatch");
  return ((P.normals() * x - P.offsets()).array() <= tol).all();
}

Eigen::VectorXd project(const Polyhedron& P, const Eigen::VectorXd& x, double tol) {
  if (x.size() != P.dim()) throw std::invalid_argument("project: dimension mismatch");
  if (P.is_box_) {
    return x.cwiseMax(P.box_lower_).cwiseMin(P.box_upper_);
  }
  const int m = P.num_constraints();
  if (m == 1) {
    // Single half-space: closed form.
    double viol = P.normals().row(0).dot(x) - P.offsets()(0);
    if (viol <= 0.0) return x;
    return x - viol * P.normals().row(0).transpose();
  }
  // Dykstra's cyclic projection over the half-spaces.
  Eigen::VectorXd cur = x;
  Eigen::MatrixXd corrections = Eigen::MatrixXd::Zero(m, P.dim());
  for (int sweep = 0; sweep < kDykstraMaxSweeps; ++sweep) {
    double max_move = 0.0;
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd w = cur + corrections.row(i).transpose();
      double viol = P.normals().row(i).dot(w) - P.offsets()(i);
      Eigen::VectorXd next = (viol > 0.0) ? Eigen::VectorXd(w - viol * P.normals().row(i).transpose())
                                          : w;
      corrections.row(i) = (w - next).transpose();
      max_move = std::max(max_move, (next - cur).norm());
      cur = next;
    }
    double worst = (P.normals() * cur - P.offsets()).maxCoeff();
    if (max_move < tol && worst <= tol) return cur;
  }
  throw std::runtime_error("project: Dykstra iteration did not converge");
}

bool normal_cone_contains(const Polyhedron& P, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& v, double tol) {
  if (x.size() != P.dim() || v.size() != P.dim()) {
    throw std::invalid_argument("normal_cone_contains: dimension mismatch");
  }
  if (v.norm() <= tol) return true;
  std::vector<int> active;
  for (int i = 0; i < P.num_constraints(); ++i) {
    if (P.normals().row(i).dot(x) >= P.offsets()(i) - kActiveTol) active.push_back(i);
  }
  if (active.empty()) return false;
  Eigen::MatrixXd At(P.dim(), active.size());
  for (std::size_t c = 0; c < active.size(); ++c) At.col(c) = P.normals().row(active[c]).transpose();
  return nnls_residual(At, v) <= tol;
}

ChebyshevResult chebyshev_center(const Polyhedron& P,
                                 const std::optional<std::pair<Eigen::VectorXd, double>>& ball) {
  const int n = P.dim();
  const int m = P.num_constraints();
  ChebyshevResult res;

  // LP variables (y, r): maximize r subject to A y + r 1 <= b plus, when a
  // ball is given, cutting planes u'(y - x*) + r <= eps approximating
  // ||y - x*|| + r <= eps.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(n) = 1.0;

  std::vector<Eigen::VectorXd> cut_dirs;
  if (ball) {
    // Axis cuts keep the first LP bounded.
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
      u(j) = 1.0;
      cut_dirs.push_back(u);
      cut_dirs.push_back(-u);
    }
  }

  const int max_cut_rounds = 256;
  for (int round = 0; round < max_cut_rounds; ++round) {
    const int rows = m + static_cast<int>(cut_dirs.size());
    Eigen::MatrixXd A(rows, n + 1);
    Eigen::VectorXd b(rows);
    A.block(0, 0, m, n) = P.normals();
    A.block(0, n, m, 1).setConstant(1.0);
    b.head(m) = P.offsets();
    for (std::size_t k = 0; k < cut_dirs.size(); ++k) {
      A.block(m + k, 0, 1, n) = cut_dirs[k].transpose();
      A(m + k, n) = 1.0;
      b(m + k) = ball->second + cut_dirs[k].dot(ball->first);
    }
    LpResult lp = lp_maximize(c, A, b);
    if (lp.status == LpStatus::kUnbounded) {
      res.unbounded = true;
      return res;
    }
    if (lp.status == LpStatus::kInfeasible) {
      res.degenerate = true;
      res.center = ball ? ball->first : Eigen::VectorXd::Zero(n);
      res.radius = 0.0;
      return res;
    }
    Eigen::VectorXd y = lp.x.head(n);
    double r = lp.x(n);
    if (!ball) {
      res.center = y;
      res.radius = r;
      return res;
    }
    double gap = (y - ball->first).norm() + r - ball->second;
    if (gap <= 1e-9) {
      if (r < 0.0) {
        res.degenerate = true;
        res.center = y;
        res.radius = 0.0;
      } else {
        res.center = y;
        res.radius = r;
      }
      return res;
    }
    Eigen::VectorXd d = y - ball->first;
    cut_dirs.push_back(d / d.norm());
  }
  throw std::runtime_error("chebyshev_center: cutting-plane loop did not converge");
}

}  // namespace plv
