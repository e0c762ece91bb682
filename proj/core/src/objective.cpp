#include "plv/objective.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "plv/lp.hpp"

namespace plv {

Eigen::VectorXd ObjectiveModel::grad(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const {
  if (x.size() != dim || z.size() != z_dim) throw std::invalid_argument("grad: dimension mismatch");
  return grad_base(x) + grad_coupling(x) * z;
}

Eigen::VectorXd ObjectiveModel::mean_grad(const Eigen::VectorXd& x) const {
  if (x.size() != dim) throw std::invalid_argument("mean_grad: dimension mismatch");
  return grad_base(x) + grad_coupling(x) * mean_z;
}

Eigen::VectorXd conditional_grad(const ObjectiveModel& model, const StreamSpec& stream,
                                 const Eigen::VectorXd& x, const Eigen::VectorXd& z_lagged,
                                 int s) {
  if (s < 0) throw std::invalid_argument("conditional_grad: lag must be >= 0");
  double coeff;
  switch (stream.kind) {
    case StreamKind::kIidGaussian:
      coeff = 0.0;
      break;
    case StreamKind::kAr1:
      coeff = stream.coeff;
      break;
    case StreamKind::kConstant:
      coeff = 1.0;  // deterministic stream: the conditional mean is the value itself
      break;
    default:
      throw std::invalid_argument("conditional_grad: unsupported stream kind");
  }
  // E[z_k | z_{k-s}] = coeff^s z_{k-s}; s = 0 reproduces grad(x, z) bitwise
  // because pow(coeff, 0) == 1 exactly. IID with s >= 1 collapses to the mean.
  if (stream.kind == StreamKind::kIidGaussian && s >= 1) {
    return model.grad_base(x) + model.grad_coupling(x) * model.mean_z;
  }
  double scale = std::pow(coeff, s);
  return model.grad_base(x) + model.grad_coupling(x) * (scale * z_lagged);
}

ObjectiveModel coupled_quadratic(int dim, double mu, const Eigen::MatrixXd& B) {
  if (B.rows() != dim) throw std::invalid_argument("coupled_quadratic: B rows must equal dim");
  ObjectiveModel m;
  m.dim = dim;
  m.z_dim = static_cast<int>(B.cols());
  m.grad_base = [mu](const Eigen::VectorXd& x) { return Eigen::VectorXd(mu * x); };
  m.grad_coupling = [B](const Eigen::VectorXd&) { return B; };
  m.mean_z = Eigen::VectorXd::Zero(m.z_dim);
  m.fbar = [mu](const Eigen::VectorXd& x) { return 0.5 * mu * x.squaredNorm(); };
  double bnorm = B.operatorNorm();
  m.ell = std::max(mu, bnorm);
  m.mu = mu;
  m.R = 0.0;
  m.grad0_norm = 0.0;
  m.fbar0 = 0.0;
  m.name = "coupled_quadratic";
  return m;
}

ObjectiveModel double_well_1d(double half_width) {
  ObjectiveModel m;
  m.dim = 1;
  m.z_dim = 1;
  m.grad_base = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(1);
    g(0) = x(0) * x(0) * x(0) - x(0);
    return g;
  };
  m.grad_coupling = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd G(1, 1);
    G(0, 0) = 0.1;
    return G;
  };
  m.mean_z = Eigen::VectorXd::Zero(1);
  m.fbar = [](const Eigen::VectorXd& x) {
    double v = x(0);
    return 0.25 * v * v * v * v - 0.5 * v * v;
  };
  // |w''| = |3x^2 - 1| peaks at the interval ends; the z-coupling slope 0.1
  // is far below it.
  m.ell = std::max(3.0 * half_width * half_width - 1.0, 1.0);
  // Pairwise monotonicity modulus: (w'(x)-w'(y))/(x-y) = x^2+xy+y^2-1
  //   >= (x-y)^2/4 - 1, so distance >= R gives modulus >= R^2/4 - 1.
  m.mu = 0.25;
  m.R = 2.24;  // R^2/4 - 1 = 0.2544 > mu, with margin for the sampled check
  m.grad0_norm = 0.0;
  m.fbar0 = 0.0;
  m.name = "double_well_1d";
  return m;
}

ObjectiveModel rotated_double_well_2d(double angle, double half_width) {
  Eigen::Matrix2d Q;
  Q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  ObjectiveModel m;
  m.dim = 2;
  m.z_dim = 1;
  // fbar(x) = w(u1) + u2^2/2 with u = Q'x; grad = Q [w'(u1), u2]'.
  m.grad_base = [Q](const Eigen::VectorXd& x) {
    Eigen::Vector2d u = Q.transpose() * x;
    Eigen::Vector2d gu(u(0) * u(0) * u(0) - u(0), u(1));
    return Eigen::VectorXd(Q * gu);
  };
  m.grad_coupling = [Q](const Eigen::VectorXd&) {
    Eigen::MatrixXd G(2, 1);
    G = 0.1 * (Q * Eigen::Vector2d(1.0, 0.0));
    return G;
  };
  m.mean_z = Eigen::VectorXd::Zero(1);
  m.fbar = [Q](const Eigen::VectorXd& x) {
    Eigen::Vector2d u = Q.transpose() * x;
    return 0.25 * std::pow(u(0), 4) - 0.5 * u(0) * u(0) + 0.5 * u(1) * u(1);
  };
  // Largest |u1| over the box [-h, h]^2 bounds the curvature.
  double u1_max = half_width * (std::abs(std::cos(angle)) + std::abs(std::sin(angle)));
  m.ell = std::max(3.0 * u1_max * u1_max - 1.0, 1.0);
  // Worst-case split of a displacement between the well coordinate and the
  // quadratic coordinate requires R^2 >= 4/(1 - mu) (see tests); 2.32 leaves
  // margin over the equality point 4/sqrt(3).
  m.mu = 0.25;
  m.R = 2.32;
  m.grad0_norm = 0.0;
  m.fbar0 = 0.0;
  m.name = "rotated_double_well_2d";
  return m;
}

namespace {

// Axis-aligned bounding box of the polyhedron via 2n small LPs.
std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box(const Polyhedron& P) {
  const int n = P.dim();
  Eigen::VectorXd lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    c(j) = 1.0;
    LpResult up = lp_maximize(c, P.normals(), P.offsets());
    LpResult dn = lp_maximize(-c, P.normals(), P.offsets());
    if (up.status != LpStatus::kOptimal || dn.status != LpStatus::kOptimal) {
      throw std::runtime_error("validate_regularity: domain must be bounded");
    }
    hi(j) = up.objective;
    lo(j) = -dn.objective;
  }
  return {lo, hi};
}

}  // namespace

RegularityReport validate_regularity(const ObjectiveModel& model, const Polyhedron& domain,
                                     int n_pairs, std::uint64_t seed) {
  if (domain.dim() != model.dim) {
    throw std::invalid_argument("validate_regularity: domain dimension mismatch");
  }
  RegularityReport rep;
  auto [lo, hi] = bounding_box(domain);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto sample_point = [&]() {
    Eigen::VectorXd x(model.dim);
    for (int tries = 0; tries < 10000; ++tries) {
      for (int j = 0; j < model.dim; ++j) x(j) = lo(j) + (hi(j) - lo(j)) * unif(rng);
      if (contains(domain, x, 0.0)) return x;
    }
    throw std::runtime_error("validate_regularity: rejection sampling failed");
  };

  rep.min_convexity = std::numeric_limits<double>::infinity();
  int convexity_pairs = 0;
  for (int p = 0; p < n_pairs; ++p) {
    Eigen::VectorXd x1 = sample_point();
    Eigen::VectorXd x2 = sample_point();
    Eigen::VectorXd z(model.z_dim);
    for (int j = 0; j < model.z_dim; ++j) z(j) = normal(rng);
    double dx = (x1 - x2).norm();
    if (dx > 1e-12) {
      double ratio = (model.grad(x1, z) - model.grad(x2, z)).norm() / dx;
      rep.max_x_lipschitz = std::max(rep.max_x_lipschitz, ratio);
      if (ratio > model.ell * (1.0 + 1e-6) && rep.failure.empty()) {
        rep.ok = false;
        rep.failure = "x-Lipschitz violated at pair #" + std::to_string(p);
      }
      if (dx >= model.R) {
        double mono = (x1 - x2).dot(model.mean_grad(x1) - model.mean_grad(x2)) / (dx * dx);
        rep.min_convexity = std::min(rep.min_convexity, mono);
        ++convexity_pairs;
        if (mono < model.mu * (1.0 - 1e-6) && rep.failure.empty()) {
          rep.ok = false;
          rep.failure = "convexity-outside-ball violated at pair #" + std::to_string(p);
        }
      }
    }
    Eigen::VectorXd z2(model.z_dim);
    for (int j = 0; j < model.z_dim; ++j) z2(j) = normal(rng);
    double dz = (z - z2).norm();
    if (dz > 1e-12) {
      double ratio = (model.grad(x1, z) - model.grad(x1, z2)).norm() / dz;
      rep.max_z_lipschitz = std::max(rep.max_z_lipschitz, ratio);
      if (ratio > model.ell * (1.0 + 1e-6) && rep.failure.empty()) {
        rep.ok = false;
        rep.failure = "z-Lipschitz violated at pair #" + std::to_string(p);
      }
    }
  }
  rep.convexity_checked = convexity_pairs > 0;
  if (!rep.convexity_checked) rep.min_convexity = 0.0;

  // Finite-difference agreement of mean_grad with fbar at interior points.
  const double h = 1e-5;
  const int fd_points = std::min(n_pairs, 100);
  for (int p = 0; p < fd_points; ++p) {
    Eigen::VectorXd x = sample_point();
    Eigen::VectorXd mg = model.mean_grad(x);
    for (int j = 0; j < model.dim; ++j) {
      Eigen::VectorXd xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      double fd = (model.fbar(xp) - model.fbar(xm)) / (2.0 * h);
      double err = std::abs(fd - mg(j)) / std::max(1.0, mg.norm());
      rep.max_grad_fd_error = std::max(rep.max_grad_fd_error, err);
      if (err > 1e-5 && rep.failure.empty()) {
        rep.ok = false;
        rep.failure = "finite-difference gradient mismatch at point #" + std::to_string(p);
      }
    }
  }
  return rep;
}

}  // namespace plv
