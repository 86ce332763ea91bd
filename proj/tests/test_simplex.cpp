#include <doctest.h>

#include "qscram/rng.hpp"
#include "qscram/simplex.hpp"

using namespace qscram;

TEST_CASE("small equality LP") {
  // min x0 + x1 s.t. x0 + 2 x1 = 4, x0 - x1 = 1  ->  x = (2, 1)
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 1, -1;
  Eigen::VectorXd b(2);
  b << 4, 1;
  Eigen::VectorXd c = Eigen::VectorXd::Ones(2);
  auto r = solve_lp(a, b, c);
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.x[0] == doctest::Approx(2.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
  CHECK(r.certified());
}

TEST_CASE("degenerate and redundant rows") {
  Eigen::MatrixXd a(3, 3);
  a << 1, 1, 1, 2, 2, 2, 1, 0, 1;
  Eigen::VectorXd b(3);
  b << 1, 2, 0.5;
  Eigen::VectorXd c(3);
  c << 3, 1, 2;
  auto r = solve_lp(a, b, c);
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.certified());
  CHECK((a * r.x - b).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("infeasible detected") {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 2;
  Eigen::VectorXd c(1);
  c << 1;
  auto r = solve_lp(a, b, c);
  CHECK(r.status == LpResult::Status::infeasible);
}

TEST_CASE("random feasible problems carry certificates") {
  Rng rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 3 + static_cast<int>(rng.uniform_below(4));
    int n = m + 2 + static_cast<int>(rng.uniform_below(8));
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.gaussian();
    // feasible by construction
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) x0[j] = rng.uniform01();
    Eigen::VectorXd b = a * x0;
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c[j] = rng.uniform01() + 0.1;
    auto r = solve_lp(a, b, c);
    REQUIRE(r.status == LpResult::Status::optimal);
    CHECK(r.certified(1e-7));
    CHECK(r.objective <= c.dot(x0) + 1e-9);
  }
}
