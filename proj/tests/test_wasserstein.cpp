#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "plv/objective.hpp"
#include "plv/wasserstein.hpp"

using namespace plv;

namespace {

SampleSet gaussian_cloud(std::mt19937_64& rng, int n, int dim, const Eigen::VectorXd& shift) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleSet s;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(dim);
    for (int j = 0; j < dim; ++j) x(j) = normal(rng);
    s.points.push_back(x + shift);
  }
  return s;
}

}  // namespace

TEST_CASE("1-D distance, hand-enumerated") {
  CHECK(w1_1d(SampleSet::from_scalars({0, 1}), SampleSet::from_scalars({0, 1})) ==
        doctest::Approx(0.0));
  CHECK(w1_1d(SampleSet::from_scalars({0, 2}), SampleSet::from_scalars({1, 3})) ==
        doctest::Approx(1.0));
  CHECK(w1_1d(SampleSet::from_scalars({0, 0, 0, 4}), SampleSet::from_scalars({1, 1, 1, 1})) ==
        doctest::Approx(1.5));
  // order independence
  CHECK(w1_1d(SampleSet::from_scalars({2, 0}), SampleSet::from_scalars({3, 1})) ==
        doctest::Approx(1.0));
  // unequal sizes: {0} vs {0, 1} couples half the mass to the far atom
  CHECK(w1_1d(SampleSet::from_scalars({0}), SampleSet::from_scalars({0, 1})) ==
        doctest::Approx(0.5));
  CHECK(w1_1d(SampleSet::from_scalars({0, 1, 2}), SampleSet::from_scalars({0, 3})) ==
        doctest::Approx(w1_1d(SampleSet::from_scalars({0, 0, 1, 1, 2, 2}),
                              SampleSet::from_scalars({0, 0, 0, 3, 3, 3}))));
}

TEST_CASE("exact assignment distance") {
  std::mt19937_64 rng(2);
  SampleSet a = gaussian_cloud(rng, 30, 3, Eigen::Vector3d::Zero());
  CHECK(w1_exact(a, a) == doctest::Approx(0.0));
  SampleSet perm = a;
  std::shuffle(perm.points.begin(), perm.points.end(), rng);
  CHECK(w1_exact(a, perm) == doctest::Approx(0.0).epsilon(1e-12));

  SampleSet u, v;
  u.points = {Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0)};
  v.points = {Eigen::Vector2d(1, 0), Eigen::Vector2d(3, 0)};
  CHECK(w1_exact(u, v) == doctest::Approx(1.0));
}

TEST_CASE("exact assignment agrees with the quantile coupling in dimension 1") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> xs(20), ys(20);
    for (auto& x : xs) x = normal(rng);
    for (auto& y : ys) y = 0.5 + normal(rng);
    SampleSet a = SampleSet::from_scalars(xs), b = SampleSet::from_scalars(ys);
    CHECK(std::abs(w1_exact(a, b) - w1_1d(a, b)) <= 1e-12);
  }
}

TEST_CASE("exact assignment enforces the size cap") {
  std::mt19937_64 rng(4);
  SampleSet a = gaussian_cloud(rng, 2049, 1, Eigen::VectorXd::Zero(1));
  CHECK_THROWS(w1_exact(a, a));
  SampleSet b = gaussian_cloud(rng, 10, 1, Eigen::VectorXd::Zero(1));
  SampleSet c = gaussian_cloud(rng, 11, 1, Eigen::VectorXd::Zero(1));
  CHECK_THROWS(w1_exact(b, c));  // equal sizes only
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    SampleSet a = gaussian_cloud(rng, 16, 2, Eigen::Vector2d(0, 0));
    SampleSet b = gaussian_cloud(rng, 16, 2, Eigen::Vector2d(1, 0));
    SampleSet c = gaussian_cloud(rng, 16, 2, Eigen::Vector2d(0, 1));
    double ab = w1_exact(a, b), ba = w1_exact(b, a);
    double bc = w1_exact(b, c), ac = w1_exact(a, c);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ac <= ab + bc + 1e-9);
    CHECK(ab >= 0.0);
  }
}

TEST_CASE("sliced estimator") {
  std::mt19937_64 rng(6);
  SampleSet a = gaussian_cloud(rng, 500, 3, Eigen::Vector3d::Zero());
  auto [self, self_se] = w1_sliced(a, a, 16, 1);
  CHECK(self == doctest::Approx(0.0));

  // a pure shift v projects to |<v, theta>|; averaging over the sphere in 3-D
  // gives ||v|| E|cos| = ||v|| / 2
  Eigen::Vector3d v(2, 0, 0);
  SampleSet b = a;
  for (auto& x : b.points) x += v;
  auto [shift, shift_se] = w1_sliced(a, b, 2000, 7);
  CHECK(shift == doctest::Approx(1.0).epsilon(0.05));
  CHECK(shift_se > 0.0);
  CHECK(std::abs(shift - 1.0) <= 4.0 * shift_se);

  // dimension 1 reduces to the exact quantile coupling for every direction
  SampleSet x1 = gaussian_cloud(rng, 64, 1, Eigen::VectorXd::Zero(1));
  SampleSet y1 = gaussian_cloud(rng, 64, 1, Eigen::VectorXd::Constant(1, 0.7));
  auto [d1, d1_se] = w1_sliced(x1, y1, 32, 9);
  CHECK(d1 == doctest::Approx(w1_1d(x1, y1)).epsilon(1e-12));

  CHECK_THROWS(w1_sliced(a, b, 4, 1));  // too few directions
}

TEST_CASE("1-D Gibbs reference: uniform and truncated normal") {
  ObjectiveModel flat;
  flat.dim = 1;
  flat.z_dim = 1;
  flat.mean_z = Eigen::VectorXd::Zero(1);
  flat.fbar = [](const Eigen::VectorXd&) { return 1.0; };
  flat.grad_base = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()); };
  flat.grad_coupling = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Zero(x.size(), 1).eval();
  };
  GibbsReference1D uni(flat, 1.0, -1.0, 3.0, 512);
  CHECK(uni.density(0.0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(uni.cdf(1.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(uni.quantile(0.25) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(uni.mean() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(uni.variance() == doctest::Approx(16.0 / 12.0).epsilon(1e-6));

  ObjectiveModel gauss = coupled_quadratic(1, 1.0, Eigen::MatrixXd::Identity(1, 1));
  GibbsReference1D tn(gauss, 1.0, -5.0, 5.0, 2048);
  // beta fbar = x^2 / 2: the standard normal, and [-5, 5] captures all but
  // ~6e-7 of the mass
  CHECK(tn.mean() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(tn.variance() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(tn.cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-5));
  CHECK(tn.quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-3));
}

TEST_CASE("double-well reference is symmetric") {
  ObjectiveModel m = double_well_1d();
  GibbsReference1D ref(m, 2.0, -2.0, 2.0, 4096);
  CHECK(ref.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(ref.mean() == doctest::Approx(0.0).epsilon(1e-8));
  for (double x : {0.3, 0.9, 1.5}) {
    CHECK(ref.density(x) == doctest::Approx(ref.density(-x)).epsilon(1e-9));
  }
  // bimodal: the well bottom beats the barrier top
  CHECK(ref.density(1.0) > ref.density(0.0));
  CHECK_THROWS(GibbsReference1D(m, 2.0, -2.0, 2.0, 3));  // grid too coarse / odd
}

TEST_CASE("sampling from the reference converges in W1") {
  ObjectiveModel m = double_well_1d();
  GibbsReference1D ref(m, 2.0, -2.0, 2.0, 2048);
  std::mt19937_64 rng(8);
  double prev = 1e9;
  for (int n : {100, 1000, 10000}) {
    double acc = 0.0;
    for (int rep = 0; rep < 3; ++rep) acc += ref.w1_to_density(ref.sample(rng, n));
    acc /= 3.0;
    CHECK(acc < prev);
    prev = acc;
  }
  CHECK(prev < 0.02);
}

TEST_CASE("w1_to_density is exact for degenerate empirical input") {
  ObjectiveModel flat;
  flat.dim = 1;
  flat.z_dim = 1;
  flat.mean_z = Eigen::VectorXd::Zero(1);
  flat.fbar = [](const Eigen::VectorXd&) { return 0.0; };
  flat.grad_base = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()); };
  flat.grad_coupling = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Zero(x.size(), 1).eval();
  };
  GibbsReference1D uni(flat, 1.0, 0.0, 1.0, 512);
  // all mass at the midpoint of U[0,1]: W1 = int |x - 1/2| dx = 1/4
  SampleSet mid = SampleSet::from_scalars({0.5});
  CHECK(uni.w1_to_density(mid) == doctest::Approx(0.25).epsilon(1e-6));
  // all mass at the left edge: W1 = mean = 1/2
  SampleSet edge = SampleSet::from_scalars({0.0});
  CHECK(uni.w1_to_density(edge) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("rejection sampler in n dimensions") {
  std::mt19937_64 rng(9);
  // uniform target: acceptance 1, exact box marginals
  ObjectiveModel flat;
  flat.dim = 2;
  flat.z_dim = 1;
  flat.mean_z = Eigen::VectorXd::Zero(1);
  flat.fbar = [](const Eigen::VectorXd&) { return 0.0; };
  flat.grad_base = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()); };
  flat.grad_coupling = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Zero(x.size(), 1).eval();
  };
  Polyhedron box = Polyhedron::box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
  RejectionResult flat_res = gibbs_rejection_nd(flat, 1.0, box, Eigen::Vector2d(-1, -1),
                                                Eigen::Vector2d(1, 1), rng, 2000);
  CHECK(flat_res.acceptance_rate == doctest::Approx(1.0));
  REQUIRE(flat_res.samples.size() == 2000);
  double mean0 = 0.0;
  for (const auto& x : flat_res.samples.points) mean0 += x(0);
  CHECK(std::abs(mean0 / 2000.0) < 0.05);

  // quadratic target at low temperature concentrates near the origin
  ObjectiveModel quad = coupled_quadratic(2, 1.0, Eigen::MatrixXd::Identity(2, 2));
  RejectionResult quad_res = gibbs_rejection_nd(quad, 8.0, box, Eigen::Vector2d(-1, -1),
                                                Eigen::Vector2d(1, 1), rng, 2000);
  double msq = 0.0;
  for (const auto& x : quad_res.samples.points) msq += x.squaredNorm();
  msq /= 2000.0;
  CHECK(msq == doctest::Approx(2.0 / 8.0).epsilon(0.15));  // E||x||^2 ~ n / beta

  // a triangle inside the box: every accepted point satisfies the constraints
  Eigen::MatrixXd A(3, 2);
  double s = 1.0 / std::sqrt(2.0);
  A << -1, 0, 0, -1, s, s;
  Eigen::VectorXd b(3);
  b << 0.5, 0.5, s;
  Polyhedron tri(A, b);
  RejectionResult tri_res = gibbs_rejection_nd(flat, 1.0, tri, Eigen::Vector2d(-1, -1),
                                               Eigen::Vector2d(1, 1), rng, 500);
  for (const auto& x : tri_res.samples.points) CHECK(contains(tri, x, 1e-9));
  CHECK(tri_res.acceptance_rate < 1.0);
}
