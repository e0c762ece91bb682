#include "plv/skorokhod.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace plv {

namespace {

constexpr double kRankCutoff = 1e-10;  // relative singular-value cutoff

// Orthogonal projector onto the complement of the row space of rows(I).
Eigen::MatrixXd complement_projector(const Eigen::MatrixXd& rows) {
  const int n = static_cast<int>(rows.cols());
  if (rows.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows.transpose(), Eigen::ComputeThinU);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > kRankCutoff * std::max(smax, 1.0)) ++rank;
  }
  Eigen::MatrixXd U = svd.matrixU().leftCols(rank);
  return Eigen::MatrixXd::Identity(n, n) - U * U.transpose();
}

}  // namespace

DiscretePath discrete_map(const Polyhedron& P, const DiscretePath& y, const Eigen::VectorXd& x0) {
  if (y.values.empty()) throw std::invalid_argument("discrete_map: empty path");
  if (y.dim() != P.dim() || x0.size() != P.dim()) {
    throw std::invalid_argument("discrete_map: dimension mismatch");
  }
  DiscretePath x;
  x.values.reserve(y.size());
  x.values.push_back(x0);
  for (std::size_t k = 1; k < y.size(); ++k) {
    x.values.push_back(project(P, x.values.back() + (y[k] - y[k - 1])));
  }
  return x;
}

std::pair<double, int> compute_alpha(const Polyhedron& P, int max_constraints) {
  const int m = P.num_constraints();
  const int n = P.dim();
  if (m > max_constraints) {
    throw std::runtime_error("compute_alpha: " + std::to_string(m) +
                             " constraints exceed the subset cap of " +
                             std::to_string(max_constraints));
  }

  // Rank of the full normal matrix.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P.normals());
  double smax = svd.singularValues()(0);
  int rank_A = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > kRankCutoff * smax) ++rank_A;
  }

  // Enumerate subsets, deduplicating by row space: two subsets with the same
  // span give the same projector, so only distinct projectors are kept.
  std::vector<Eigen::MatrixXd> distinct;
  double min_sq = 1.0;  // I = empty gives ||a_j||^2 = 1 for unit rows
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    int cnt = 0;
    for (int i = 0; i < m; ++i)
      if (mask & (1ULL << i)) ++cnt;
    Eigen::MatrixXd rows(cnt, n);
    int r = 0;
    for (int i = 0; i < m; ++i) {
      if (mask & (1ULL << i)) rows.row(r++) = P.normals().row(i);
    }
    Eigen::MatrixXd proj = complement_projector(rows);
    bool seen = false;
    for (const auto& q : distinct) {
      if ((q - proj).cwiseAbs().maxCoeff() < 1e-9) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    distinct.push_back(proj);
    for (int j = 0; j < m; ++j) {
      double sq = (proj * P.normals().row(j).transpose()).squaredNorm();
      if (sq > 1e-12 && sq < min_sq) min_sq = sq;
    }
  }
  return {0.5 * min_sq, rank_A};
}

SkorokhodConstants constants_for(const Polyhedron& P, int max_constraints) {
  auto [alpha, rank_A] = compute_alpha(P, max_constraints);
  SkorokhodConstants c;
  c.alpha = alpha;
  c.rank_A = rank_A;
  const double s2m1 = std::sqrt(2.0) - 1.0;
  c.x0 = 1.0 - 1.0 / (9.0 * s2m1 * s2m1);
  c.epsilon = (1.0 / 3.0) * std::pow(alpha, rank_A / 2.0);
  c.c_diam = 6.0 * std::pow(1.0 / alpha, rank_A / 2.0);
  for (int k = 0; k <= rank_A; ++k) {
    c.radii[k] = std::sqrt(1.0 - std::pow(alpha, k) * (1.0 - c.x0));
  }
  return c;
}

double lipschitz_ratio(const Polyhedron& P, const DiscretePath& y, const DiscretePath& y2,
                       const Eigen::VectorXd& x0, const Eigen::VectorXd& x02) {
  if (y.size() != y2.size()) throw std::invalid_argument("lipschitz_ratio: length mismatch");
  if (y.dim() != y2.dim() || y.dim() != P.dim()) {
    throw std::invalid_argument("lipschitz_ratio: dimension mismatch");
  }
  DiscretePath xa = discrete_map(P, y, x0);
  DiscretePath xb = discrete_map(P, y2, x02);
  double sup_x = 0.0;
  double sup_y = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    sup_x = std::max(sup_x, (xa[k] - xb[k]).norm());
    // Inputs share the convention y~_0 = initial point.
    Eigen::VectorXd ya = x0 + (y[k] - y[0]);
    Eigen::VectorXd yb = x02 + (y2[k] - y2[0]);
    sup_y = std::max(sup_y, (ya - yb).norm());
  }
  if (sup_y == 0.0) {
    if (sup_x > 1e-12) {
      throw std::runtime_error("lipschitz_ratio: outputs differ for identical inputs");
    }
    return 0.0;
  }
  return sup_x / sup_y;
}

void save_path_csv(std::ostream& out, const DiscretePath& path) {
  const int n = path.dim();
  out << "k";
  for (int j = 1; j <= n; ++j) out << ",x" << j;
  out << '\n';
  out.precision(17);
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << k;
    for (int j = 0; j < n; ++j) out << ',' << path[k](j);
    out << '\n';
  }
}

DiscretePath load_path_csv(std::istream& in) {
  DiscretePath path;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("path csv: empty input");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {
        first = false;  // step index column
        continue;
      }
      vals.push_back(std::stod(cell));
    }
    if (vals.empty()) throw std::runtime_error("path csv: row without coordinates");
    path.values.push_back(Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size()));
  }
  if (path.values.empty()) throw std::runtime_error("path csv: no rows");
  return path;
}

std::string skorokhod_constants_json(const SkorokhodConstants& c) {
  nlohmann::json j;
  j["alpha"] = c.alpha;
  j["rank"] = c.rank_A;
  j["c_diam"] = c.c_diam;
  j["x0"] = c.x0;
  j["epsilon"] = c.epsilon;
  std::vector<double> radii;
  for (const auto& [k, r] : c.radii) radii.push_back(r);
  j["radii"] = radii;
  return j.dump(2);
}

}  // namespace plv
