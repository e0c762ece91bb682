#include "plv/constants.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "plv/numerics.hpp"

namespace plv {

bool ProblemParams::eta_admissible() const {
  return eta <= std::min(0.25, mu / (4.0 * ell * ell));
}

double kappa(const ProblemParams& p, double r) {
  if (r < 0.0) throw std::invalid_argument("kappa: r must be >= 0");
  return r < p.R ? p.eta * p.ell : -p.eta * p.mu;
}

namespace {

// Cubic Hermite basis on [0, 1].
inline double hermite(double y0, double m0, double y1, double m1, double H, double t) {
  double t2 = t * t;
  double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * H * m0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * H * m1;
}

}  // namespace

MetricChain::MetricChain(const ProblemParams& p, int grid_intervals)
    : beta_(p.beta), ell_(p.ell), mu_(p.mu), R_(p.R), coef_(p.beta * p.ell / 8.0) {
  if (beta_ <= 0 || ell_ <= 0 || mu_ <= 0 || R_ < 0) {
    throw std::invalid_argument("MetricChain: need beta, ell, mu > 0 and R >= 0");
  }
  h_R_ = coef_ * R_ * R_;
  phi_R_ = std::exp(-h_R_);
  R1_ = 0.5 * R_ + 0.5 * std::sqrt(R_ * R_ + (32.0 / (mu_ * beta_)) * std::exp(h_R_));

  if (R_ > 0.0) {
    grid_ = grid_intervals;
    step_ = R_ / grid_;
    Phi_grid_.assign(grid_ + 1, 0.0);
    Psi_grid_.assign(grid_ + 1, 0.0);
    Phi_d_.assign(grid_ + 1, 0.0);
    Psi_d_.assign(grid_ + 1, 0.0);
    // Coupled cumulative integration of Phi' = phi, Psi' = Phi/phi by RK4;
    // both right-hand sides are analytic in (s, Phi).
    double Phi = 0.0, Psi = 0.0;
    Phi_d_[0] = 1.0;  // phi(0)
    Psi_d_[0] = 0.0;
    auto phi_at = [this](double s) { return std::exp(-coef_ * s * s); };
    for (int i = 0; i < grid_; ++i) {
      double s = i * step_;
      auto f = [&](double sv, double Phiv) {
        double ph = phi_at(sv);
        return std::pair<double, double>{ph, Phiv / ph};
      };
      auto [k1p, k1q] = f(s, Phi);
      auto [k2p, k2q] = f(s + 0.5 * step_, Phi + 0.5 * step_ * k1p);
      auto [k3p, k3q] = f(s + 0.5 * step_, Phi + 0.5 * step_ * k2p);
      auto [k4p, k4q] = f(s + step_, Phi + step_ * k3p);
      Phi += step_ / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
      Psi += step_ / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
      Phi_grid_[i + 1] = Phi;
      Psi_grid_[i + 1] = Psi;
      double sn = (i + 1) * step_;
      Phi_d_[i + 1] = phi_at(sn);
      Psi_d_[i + 1] = Phi / phi_at(sn);
    }
    Phi_R_ = Phi_grid_[grid_];
    Psi_R_ = Psi_grid_[grid_];
  }

  // Beyond R the density phi is constant, so Psi extends in closed form:
  // Psi(r) = Psi(R) + (Phi(R)/phi(R)) (r - R) + (r - R)^2 / 2.
  double dR1 = R1_ - R_;
  double Psi_R1 = Psi_R_ + (Phi_R_ / phi_R_) * dR1 + 0.5 * dR1 * dR1;
  xi_ = 1.0 / Psi_R1;
  a_ = 2.0 * xi_ / beta_;

  if (R_ > 0.0) {
    // Second pass: delta' = phi g with g(s) = 1 - (xi/2) Psi(s).
    delta_grid_.assign(grid_ + 1, 0.0);
    delta_d_.assign(grid_ + 1, 0.0);
    delta_d_[0] = 1.0;  // phi(0) g(0) = 1
    double d = 0.0;
    for (int i = 0; i < grid_; ++i) {
      double s0 = i * step_;
      double s1 = (i + 1) * step_;
      double sm = 0.5 * (s0 + s1);
      double f0 = phi(s0) * g(s0);
      double fm = phi(sm) * g(sm);
      double f1 = phi(s1) * g(s1);
      d += step_ / 6.0 * (f0 + 4.0 * fm + f1);
      delta_grid_[i + 1] = d;
      delta_d_[i + 1] = f1;
    }
    delta_R_ = delta_grid_[grid_];
  }
  delta_R1_ = delta(R1_);
}

double MetricChain::h(double r) const {
  double rr = std::min(r, R_);
  return coef_ * rr * rr;
}

double MetricChain::phi(double r) const { return std::exp(-h(r)); }

double MetricChain::lookup(const std::vector<double>& vals, const std::vector<double>& derivs,
                           double r) const {
  int i = static_cast<int>(r / step_);
  if (i >= grid_) i = grid_ - 1;
  if (i < 0) i = 0;
  double t = (r - i * step_) / step_;
  return hermite(vals[i], derivs[i], vals[i + 1], derivs[i + 1], step_, t);
}

double MetricChain::Phi(double r) const {
  if (r <= 0.0) return 0.0;
  if (r <= R_) return lookup(Phi_grid_, Phi_d_, r);
  return Phi_R_ + (r - R_) * phi_R_;
}

double MetricChain::Psi(double r) const {
  if (r <= 0.0) return 0.0;
  if (r <= R_) return lookup(Psi_grid_, Psi_d_, r);
  double d = r - R_;
  return Psi_R_ + (Phi_R_ / phi_R_) * d + 0.5 * d * d;
}

double MetricChain::g(double r) const {
  double rr = std::min(r, R1_);
  return 1.0 - 0.5 * xi_ * Psi(rr);
}

double MetricChain::delta(double r) const {
  if (r <= 0.0) return 0.0;
  if (r <= R_) return lookup(delta_grid_, delta_d_, r);
  if (r <= R1_) {
    double d = r - R_;
    double int_psi = Psi_R_ * d + (Phi_R_ / phi_R_) * d * d / 2.0 + d * d * d / 6.0;
    return delta_R_ + phi_R_ * (d - 0.5 * xi_ * int_psi);
  }
  return delta_R1_ + 0.5 * phi_R_ * (r - R1_);
}

double MetricChain::delta_prime(double r) const { return phi(r) * g(r); }

ConstantLedger ledger(const ProblemParams& p, int grid_intervals) {
  MetricChain mc(p, grid_intervals);
  ConstantLedger led;
  led.h_at_R = mc.h_at_R();
  led.phi_at_R = mc.phi_at_R();
  led.R1 = mc.R1();
  led.xi = mc.xi();
  led.a = mc.a();
  led.a_lower = (2.0 / (p.beta * p.R * p.R / 2.0 + 16.0 / p.mu)) *
                std::exp(-p.beta * p.ell * p.R * p.R / 4.0);

  const double g0 = p.grad0_norm;
  led.c6 = (p.ell + p.mu) * p.R * p.R + p.R * g0 + p.n / p.beta;
  led.c7 = (4.0 / p.mu) * (p.n / p.beta + (p.ell + p.mu) * p.R * p.R + (2.0 + p.R) * g0 +
                           (8.0 * p.ell * p.ell + 1.0 / p.mu) * p.ell * p.ell * p.M2z);

  const double c5p1 = p.skorokhod.c_diam + 1.0;
  led.c8 = c5p1 * std::sqrt((2.0 / p.mu) * p.ell * p.ell * led.c6 + 2.0 * g0 * g0);
  led.c9 = c5p1 * std::sqrt(2.0 * p.ell * p.ell);
  led.c10 = c5p1 * p.n * std::sqrt(8.0 / p.beta);
  led.c11 = led.c8 + 2.0 * p.ell * p.Psi2z;

  const double inv_phi_R = 1.0 / led.phi_at_R;
  led.c1 = 2.0 * inv_phi_R * std::sqrt(2.0 * led.c6 / p.mu);
  led.c2 = 4.0 * inv_phi_R;
  const double factor =
      std::exp(p.ell) * (1.0 + 2.0 * inv_phi_R / (-std::expm1(-led.a / 2.0)));
  led.c3 = (led.c11 + led.c9 * std::sqrt(led.c7) + std::sqrt(2.0) * led.c10) * factor;
  led.c4 = led.c9 * factor;

  const double svs = std::sqrt(std::max(p.varsigma, 0.0));
  led.coef_exp = led.c1 + led.c2 * svs;
  led.coef_sqrt = led.c3 + led.c4 * svs;
  led.coef_schedule = led.coef_exp + led.coef_sqrt / std::sqrt(2.0 * led.a);
  return led;
}

double convergence_bound(const ProblemParams& p, const ConstantLedger& led, long k) {
  if (k < 4) throw std::invalid_argument("convergence_bound: k must be >= 4");
  if (p.eta >= 1.0) throw std::invalid_argument("convergence_bound: eta must be < 1");
  const double svs = std::sqrt(std::max(p.varsigma, 0.0));
  return (led.c1 + led.c2 * svs) * std::exp(-p.eta * led.a * static_cast<double>(k)) +
         (led.c3 + led.c4 * svs) * std::sqrt(p.eta * std::log(1.0 / p.eta));
}

double convergence_bound_schedule(const ProblemParams& p, const ConstantLedger& led, long T) {
  if (T < 4) throw std::invalid_argument("convergence_bound_schedule: T must be >= 4");
  const double Td = static_cast<double>(T);
  return led.coef_schedule * std::log(Td) / std::sqrt(Td);
}

double suboptimality_c13(const ProblemParams& p, const ConstantLedger& led, double r_min) {
  if (r_min <= 0.0) throw std::invalid_argument("suboptimality_c13: r_min must be > 0");
  return std::log(static_cast<double>(p.n)) + 2.0 * std::log(1.0 + led.c6 / p.mu) +
         std::log(3.0) / 6.0 + std::log(2.0 * std::sqrt(M_PI)) - std::log(r_min);
}

double suboptimality_compact(const ProblemParams& p, const ConstantLedger& led, double diameter,
                             double w1, double r_min) {
  double c12 = p.ell * diameter + p.grad0_norm;
  double c13 = suboptimality_c13(p, led, r_min);
  double entropy = std::max(std::log(std::max(p.varsigma, 1e-300)), 0.0);
  return c12 * w1 + (p.n / p.beta) * (entropy + c13);
}

RMinEstimate estimate_r_min(const Polyhedron& P, const ProblemParams& p, int n_points,
                            std::uint64_t seed) {
  // Ball radius from the temperature: the largest f-gap still contributing a
  // constant factor to the Gibbs mass near a minimizer.
  double cx = std::max(p.R, p.mu > 0 ? p.grad0_norm / p.mu : 0.0);
  double A = p.ell * cx + p.grad0_norm;
  double eps = (-A + std::sqrt(A * A + 2.0 * p.ell * std::log(2.0) / p.beta)) / p.ell;

  ChebyshevResult center = chebyshev_center(P);
  Eigen::VectorXd c =
      (center.unbounded || center.degenerate) ? Eigen::VectorXd::Zero(P.dim()) : center.center;

  std::mt19937_64 rng(derive_seed(seed, 17));
  std::normal_distribution<double> normal(0.0, 1.0);
  RMinEstimate est;
  est.epsilon = eps;
  est.r_min = std::numeric_limits<double>::infinity();
  int accepted = 0;
  int attempts = 0;
  while (accepted < n_points && attempts < 50 * n_points) {
    ++attempts;
    Eigen::VectorXd u(P.dim());
    for (int d = 0; d < P.dim(); ++d) u(d) = normal(rng);
    double norm = u.norm();
    if (norm < 1e-12) continue;
    u /= norm;
    // Ray-shoot to the boundary.
    double t = std::numeric_limits<double>::infinity();
    for (int i = 0; i < P.num_constraints(); ++i) {
      double au = P.normals().row(i).dot(u);
      if (au > 1e-12) {
        t = std::min(t, (P.offsets()(i) - P.normals().row(i).dot(c)) / au);
      }
    }
    if (!std::isfinite(t)) continue;  // unbounded direction
    Eigen::VectorXd boundary = c + t * u;
    ChebyshevResult ball = chebyshev_center(P, std::make_pair(boundary, eps));
    if (ball.degenerate) continue;
    est.r_min = std::min(est.r_min, ball.radius);
    ++accepted;
  }
  if (accepted == 0 || !std::isfinite(est.r_min)) {
    throw std::runtime_error("estimate_r_min: no boundary points found (is K bounded?)");
  }
  est.n_points = accepted;
  return est;
}

std::string ledger_json(const ProblemParams& p, const ConstantLedger& led) {
  nlohmann::json j;
  auto entry = [&](const std::string& name, double value, const std::string& formula) {
    j[name] = {{"value", value}, {"formula_ref", formula}};
  };
  entry("alpha", p.skorokhod.alpha, "(1/2) min ||P_I a_j||^2 over nonzero projections");
  entry("c_diam", p.skorokhod.c_diam, "6 (1/alpha)^(rank/2)");
  entry("x0", p.skorokhod.x0, "1 - 1/(9 (sqrt(2)-1)^2)");
  entry("epsilon", p.skorokhod.epsilon, "(1/3) alpha^(rank/2)");
  entry("h_at_R", led.h_at_R, "beta ell R^2 / 8");
  entry("phi_at_R", led.phi_at_R, "exp(-h(R))");
  entry("R1", led.R1, "R/2 + (1/2) sqrt(R^2 + (32/(mu beta)) exp(h(R)))");
  entry("xi", led.xi, "1 / int_0^{R1} Phi/phi");
  entry("a", led.a, "2 xi / beta");
  entry("a_lower", led.a_lower, "(2/(beta R^2/2 + 16/mu)) exp(-beta ell R^2 / 4)");
  entry("c1", led.c1, "2 phi(R)^{-1} sqrt(2 c6 / mu)");
  entry("c2", led.c2, "4 phi(R)^{-1}");
  entry("c3", led.c3, "(c11 + c9 sqrt(c7) + sqrt(2) c10) e^ell (1 + 2 phi(R)^{-1}/(1 - e^{-a/2}))");
  entry("c4", led.c4, "c9 e^ell (1 + 2 phi(R)^{-1}/(1 - e^{-a/2}))");
  entry("c6", led.c6, "(ell + mu) R^2 + R ||grad fbar(0)|| + n/beta");
  entry("c7", led.c7,
        "(4/mu)(n/beta + (ell+mu) R^2 + (2+R)||grad fbar(0)|| + (8 ell^2 + 1/mu) ell^2 M2)");
  entry("c8", led.c8, "(c5+1) sqrt((2/mu) ell^2 c6 + 2 ||grad fbar(0)||^2)");
  entry("c9", led.c9, "(c5+1) sqrt(2) ell");
  entry("c10", led.c10, "(c5+1) n sqrt(8/beta)");
  entry("c11", led.c11, "c8 + 2 ell Psi2");
  if (led.c13 != 0.0) {
    entry("c13", led.c13, "log n + 2 log(1 + c6/mu) + (1/6) log 3 + log(2 sqrt(pi)) - log r_min");
  }
  entry("coef_schedule", led.coef_schedule, "c1 + c2 sqrt(vs) + (c3 + c4 sqrt(vs))/sqrt(2a)");
  return j.dump(2);
}

}  // namespace plv
