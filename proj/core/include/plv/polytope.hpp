// Half-space polyhedra K = { x : a_i'x <= b_i } with unit normals and the
// origin strictly interior. Provides membership, Euclidean projection
// (Dykstra with a clamp fast path for axis-aligned boxes), normal-cone
// membership, Chebyshev centering, and the text-format loader.
#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>

namespace plv {

class Polyhedron {
 public:
  // Rows of `normals` must be unit vectors (within 1e-12) and every offset
  // must be strictly positive so the origin is interior. Throws otherwise.
  Polyhedron(Eigen::MatrixXd normals, Eigen::VectorXd offsets);

  const Eigen::MatrixXd& normals() const { return normals_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }
  int num_constraints() const { return static_cast<int>(normals_.rows()); }
  int dim() const { return static_cast<int>(normals_.cols()); }
  bool is_box() const { return is_box_; }

  // Convenience constructors.
  static Polyhedron box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);
  static Polyhedron interval(double lo, double hi);   // 1-D box
  static Polyhedron half_line(double lo);             // K = [lo, inf), lo < 0
  static Polyhedron half_space(const Eigen::VectorXd& a, double b);

  // Text format: one line per constraint, "a_1 ... a_n | b". Rows are
  // normalized to unit norm; b <= 0 after normalization is rejected.
  static Polyhedron load_text(std::istream& in);
  static Polyhedron load_text_file(const std::string& path);
  void save_text(std::ostream& out) const;

 private:
  Eigen::MatrixXd normals_;
  Eigen::VectorXd offsets_;
  bool is_box_ = false;          // detected structurally at construction
  Eigen::VectorXd box_lower_;    // valid when is_box_
  Eigen::VectorXd box_upper_;

  friend Eigen::VectorXd project(const Polyhedron&, const Eigen::VectorXd&, double);
};

bool contains(const Polyhedron& P, const Eigen::VectorXd& x, double tol);

// Euclidean projection onto K. Cyclic Dykstra iteration over the half-spaces
// (convergence tolerance `tol`, capped at 1e5 sweeps); axis-aligned boxes are
// clamped coordinate-wise. Throws on non-convergence.
Eigen::VectorXd project(const Polyhedron& P, const Eigen::VectorXd& x, double tol = 1e-10);

// True iff v is a nonnegative combination of the normals active at x
// (a_i'x >= b_i - 1e-8), decided by nonnegative least squares with residual
// threshold `tol`. v = 0 always passes.
bool normal_cone_contains(const Polyhedron& P, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& v, double tol);

struct ChebyshevResult {
  Eigen::VectorXd center;
  double radius = 0.0;
  bool unbounded = false;   // no ball given and the inscribed radius is unbounded
  bool degenerate = false;  // infeasible intersection; radius forced to 0
};

// Largest ball inscribed in K, optionally also confined to the Euclidean ball
// { y : ||y - ball_center|| + r <= ball_radius }. The polyhedral part is the
// LP  max r  s.t.  A y <= b - r 1  (unit rows make this exact); the ball part
// is handled by cutting planes on top of the same simplex solver.
ChebyshevResult chebyshev_center(const Polyhedron& P,
                                 const std::optional<std::pair<Eigen::VectorXd, double>>& ball =
                                     std::nullopt);

}  // namespace plv
