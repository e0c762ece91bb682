// Discrete Skorokhod map over a polyhedron and the constructive constants
// attached to it: the span coefficient alpha, the contraction radii r_k, the
// covering scale epsilon, and the diameter constant that bounds the Lipschitz
// modulus of the solution map.
#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "plv/polytope.hpp"

namespace plv {

// A path in R^n sampled at integer steps.
struct DiscretePath {
  std::vector<Eigen::VectorXd> values;

  std::size_t size() const { return values.size(); }
  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
  Eigen::VectorXd& operator[](std::size_t i) { return values[i]; }
  const Eigen::VectorXd& operator[](std::size_t i) const { return values[i]; }
};

struct SkorokhodConstants {
  double alpha = 0.0;              // in (0, 1/2]
  int rank_A = 0;                  // numeric rank of the normal matrix
  double c_diam = 0.0;             // 6 (1/alpha)^(rank_A/2)
  double x0 = 0.0;                 // 1 - 1/(9 (sqrt(2)-1)^2)
  double epsilon = 0.0;            // (1/3) alpha^(rank_A/2)
  std::map<int, double> radii;     // radii[k]^2 = 1 - alpha^k (1 - x0), k = 0..rank_A
};

// Reflected path: x_0 = x0, x_{k+1} = proj_K(x_k + (y_{k+1} - y_k)).
// Output length equals input length; only increments of y are used.
DiscretePath discrete_map(const Polyhedron& P, const DiscretePath& y, const Eigen::VectorXd& x0);

// alpha = (1/2) min{ ||P_I a_j||^2 : P_I a_j != 0 } over all row subsets I
// (P_I projects onto the orthogonal complement of span{a_i : i in I}) and all
// rows j. Subsets are enumerated and deduplicated by their row space; the
// identity (I empty) is included, so alpha <= 1/2 always. Throws when m
// exceeds the subset cap.
std::pair<double, int> compute_alpha(const Polyhedron& P, int max_constraints = 20);

SkorokhodConstants constants_for(const Polyhedron& P, int max_constraints = 20);

// sup_k ||x_k - x'_k|| / sup_k ||y_k - y'_k|| where both paths are run through
// the discrete map from x0 / x02 and compared with the convention that the
// effective input starts at the initial point (y~_k = x0 + y_k - y_0).
// Returns 0 when both sup distances vanish.
double lipschitz_ratio(const Polyhedron& P, const DiscretePath& y, const DiscretePath& y2,
                       const Eigen::VectorXd& x0, const Eigen::VectorXd& x02);

// Path CSV: header "k,x1,...,xn", one row per step.
void save_path_csv(std::ostream& out, const DiscretePath& path);
DiscretePath load_path_csv(std::istream& in);

// Constants report as a JSON object {alpha, rank, c_diam, x0, epsilon, radii:[...]}.
std::string skorokhod_constants_json(const SkorokhodConstants& c);

}  // namespace plv
