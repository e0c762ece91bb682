#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "plv/skorokhod.hpp"

using namespace plv;

namespace {

DiscretePath path1d(std::initializer_list<double> vals) {
  DiscretePath p;
  for (double v : vals) {
    Eigen::VectorXd x(1);
    x(0) = v;
    p.values.push_back(x);
  }
  return p;
}

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x(0) = v;
  return x;
}

Polyhedron unit_box2() {
  return Polyhedron::box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
}

}  // namespace

// The half-line the constructor admits is [lo, inf) with lo < 0 (the origin
// must be interior); the map commutes with translation, so the classic
// half-line-at-zero cases run shifted by -1.
TEST_CASE("1-D reflection on a half-line, hand-enumerated") {
  Polyhedron P = Polyhedron::half_line(-1.0);
  DiscretePath y = path1d({0, -1, -2, 1});
  DiscretePath x = discrete_map(P, y, vec1(-1.0));
  REQUIRE(x.size() == 4);
  CHECK(x[0](0) == doctest::Approx(-1.0));
  CHECK(x[1](0) == doctest::Approx(-1.0));
  CHECK(x[2](0) == doctest::Approx(-1.0));
  CHECK(x[3](0) == doctest::Approx(2.0));  // 3 above the barrier
}

TEST_CASE("constant input path stays at the start") {
  Polyhedron P = unit_box2();
  DiscretePath y;
  for (int k = 0; k < 5; ++k) y.values.push_back(Eigen::Vector2d(3.0, -7.0));
  Eigen::VectorXd x0 = Eigen::Vector2d(0.25, -0.5);
  DiscretePath x = discrete_map(P, y, x0);
  for (const auto& v : x.values) CHECK((v - x0).norm() == doctest::Approx(0.0));
}

TEST_CASE("interior straight line passes through unreflected") {
  Polyhedron P = unit_box2();
  DiscretePath y;
  for (int k = 0; k < 5; ++k) y.values.push_back(Eigen::Vector2d(0.1 * k, -0.05 * k));
  Eigen::VectorXd x0 = Eigen::Vector2d(-0.3, 0.2);
  DiscretePath x = discrete_map(P, y, x0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    CHECK((x[k] - (x0 + y.values[k] - y.values[0])).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("half-line matches the closed-form reflection formula") {
  Polyhedron P = Polyhedron::half_line(-1.0);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 0.7);
  for (int rep = 0; rep < 20; ++rep) {
    DiscretePath y;
    double v = 0.0;
    for (int k = 0; k < 40; ++k) {
      y.values.push_back(vec1(v));
      v += normal(rng);
    }
    double x0 = -0.5;
    DiscretePath x = discrete_map(P, y, vec1(x0));
    double run_min = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
      double free = x0 + y.values[k](0) - y.values[0](0);
      run_min = std::min(run_min, free + 1.0);  // distance below the barrier at -1
      double ref = free - std::min(0.0, run_min);
      CHECK(x[k](0) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("alpha for a single half-space") {
  Eigen::VectorXd a(3);
  a << 0, 1, 0;
  auto [alpha, rank] = compute_alpha(Polyhedron::half_space(a, 1.0));
  CHECK(alpha == doctest::Approx(0.5));
  CHECK(rank == 1);
}

TEST_CASE("alpha for the 2-D box") {
  auto [alpha, rank] = compute_alpha(unit_box2());
  CHECK(alpha == doctest::Approx(0.5));
  CHECK(rank == 2);
}

TEST_CASE("alpha for the e1 / diagonal wedge is 1/4") {
  Eigen::MatrixXd A(2, 2);
  A << 1, 0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(2);
  auto [alpha, rank] = compute_alpha(Polyhedron(A, b));
  CHECK(alpha == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rank == 2);
}

TEST_CASE("alpha via brute-force subset oracle on random polyhedra") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    const int m = 5, n = 3;
    Eigen::MatrixXd A(m, n);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      Eigen::Vector3d a;
      do {
        for (int j = 0; j < n; ++j) a(j) = normal(rng);
      } while (a.norm() < 1e-6);
      A.row(i) = a.normalized();
      b(i) = 1.0;
    }
    Polyhedron P(A, b);
    // Oracle: enumerate every subset directly, no dedup.
    double min_sq = 1.0;
    for (int mask = 0; mask < (1 << m); ++mask) {
      std::vector<int> idx;
      for (int i = 0; i < m; ++i) {
        if (mask & (1 << i)) idx.push_back(i);
      }
      Eigen::MatrixXd Ai(idx.size(), n);
      for (std::size_t r = 0; r < idx.size(); ++r) Ai.row(r) = A.row(idx[r]);
      Eigen::MatrixXd Pr = Eigen::MatrixXd::Identity(n, n);
      if (!idx.empty()) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ai, Eigen::ComputeFullV);
        int rk = 0;
        for (int s = 0; s < svd.singularValues().size(); ++s) {
          if (svd.singularValues()(s) > 1e-10 * svd.singularValues()(0)) ++rk;
        }
        Eigen::MatrixXd V = svd.matrixV().leftCols(rk);
        Pr -= V * V.transpose();
      }
      for (int j = 0; j < m; ++j) {
        double sq = (Pr * A.row(j).transpose()).squaredNorm();
        if (sq > 1e-12) min_sq = std::min(min_sq, sq);
      }
    }
    auto [alpha, rank] = compute_alpha(P);
    CHECK(alpha == doctest::Approx(0.5 * min_sq).epsilon(1e-9));
    CHECK(rank == 3);
  }
}

TEST_CASE("constructive constants") {
  SkorokhodConstants c = constants_for(unit_box2());
  CHECK(c.x0 == doctest::Approx(1.0 - 1.0 / (9.0 * std::pow(std::sqrt(2.0) - 1.0, 2))));
  CHECK(std::abs(c.x0 - 0.352) < 1e-3);
  CHECK(c.c_diam == doctest::Approx(12.0));
  CHECK(c.epsilon == doctest::Approx((1.0 / 3.0) * 0.5));

  Eigen::VectorXd a(1);
  a << 1;
  SkorokhodConstants h = constants_for(Polyhedron::half_space(a, 1.0));
  CHECK(h.epsilon == doctest::Approx(std::sqrt(0.5) / 3.0).epsilon(1e-9));

  // radii: radii(0)^2 = x0, chain radii(k)^2 = (1-alpha) + alpha*radii(k-1)^2,
  // strictly increasing inside (0,1).
  double prev = -1.0;
  for (const auto& [k, r] : c.radii) {
    CHECK(r > prev);
    CHECK(r > 0.0);
    CHECK(r < 1.0);
    if (k == 0) CHECK(r * r == doctest::Approx(c.x0));
    prev = r;
  }
  auto it0 = c.radii.find(0);
  auto it1 = c.radii.find(1);
  REQUIRE(it0 != c.radii.end());
  REQUIRE(it1 != c.radii.end());
  CHECK(it1->second * it1->second ==
        doctest::Approx((1.0 - c.alpha) + c.alpha * it0->second * it0->second));
}

TEST_CASE("lipschitz ratio conventions") {
  Polyhedron P = Polyhedron::half_line(-1.0);
  DiscretePath y = path1d({0, -1});
  DiscretePath y2 = path1d({0, -2});
  // Both inputs dive below the barrier from the barrier itself: the reflected
  // outputs coincide, so the ratio is 0 while sup|y - y2| = 1.
  CHECK(lipschitz_ratio(P, y, y2, vec1(-1.0), vec1(-1.0)) == doctest::Approx(0.0));
  // identical paths
  CHECK(lipschitz_ratio(P, y, y, vec1(-0.5), vec1(-0.5)) == doctest::Approx(0.0));
  // length mismatch rejected
  DiscretePath y3 = path1d({0, -1, 2});
  CHECK_THROWS(lipschitz_ratio(P, y, y3, vec1(-0.5), vec1(-0.5)));
}

TEST_CASE("lipschitz property on the box, random sweep") {
  Polyhedron P = unit_box2();
  SkorokhodConstants c = constants_for(P);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 0.5);
  for (int rep = 0; rep < 50; ++rep) {
    DiscretePath y, y2;
    Eigen::Vector2d a = Eigen::Vector2d::Zero(), b = Eigen::Vector2d::Zero();
    for (int k = 0; k < 30; ++k) {
      y.values.push_back(a);
      y2.values.push_back(b);
      for (int j = 0; j < 2; ++j) {
        a(j) += normal(rng);
        b(j) += normal(rng);
      }
    }
    double ratio = lipschitz_ratio(P, y, y2, Eigen::Vector2d(0.3, 0), Eigen::Vector2d(-0.2, 0.4));
    CHECK(ratio <= c.c_diam + 1.0);
  }
}

TEST_CASE("path CSV round trip") {
  DiscretePath p;
  p.values.push_back(Eigen::Vector2d(0.1, -0.25));
  p.values.push_back(Eigen::Vector2d(1.0 / 3.0, 2e-17));
  std::ostringstream out;
  save_path_csv(out, p);
  CHECK(out.str().rfind("k,x1,x2\n", 0) == 0);
  std::istringstream in(out.str());
  DiscretePath q = load_path_csv(in);
  REQUIRE(q.size() == p.size());
  for (std::size_t k = 0; k < p.size(); ++k) CHECK((p[k] - q[k]).norm() == 0.0);
}

TEST_CASE("constants JSON shape") {
  auto j = nlohmann::json::parse(skorokhod_constants_json(constants_for(unit_box2())));
  CHECK(j["alpha"] == doctest::Approx(0.5));
  CHECK(j["rank"] == 2);
  CHECK(j["c_diam"] == doctest::Approx(12.0));
  CHECK(j["x0"].get<double>() == doctest::Approx(0.3523969861));
  CHECK(j["radii"].is_array());
  CHECK(j["radii"].size() == 3);  // k = 0..rank
}
