#include "doctest.h"
#include "oracles.hpp"
#include "wristkit/qp.hpp"

#include <random>

using namespace wristkit;

namespace {

QPSpec boxSpec(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, double lo, double hi) {
  QPSpec spec;
  spec.hessian = h;
  spec.gradient = g;
  spec.lower = Eigen::VectorXd::Constant(g.size(), lo);
  spec.upper = Eigen::VectorXd::Constant(g.size(), hi);
  return spec;
}

QPSpec randomPsdSpec(int n, std::mt19937& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.2, 1.5);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  QPSpec spec;
  spec.hessian = a.transpose() * a;
  spec.gradient.resize(n);
  spec.lower.resize(n);
  spec.upper.resize(n);
  for (int i = 0; i < n; ++i) {
    spec.gradient[i] = 2.0 * normal(rng);
    const double c = normal(rng);
    const double w = uni(rng);
    spec.lower[i] = c - w;
    spec.upper[i] = c + w;
  }
  return spec;
}

void checkKkt(const QPSolution& sol, double tol = 1e-8) {
  CHECK(sol.stationarity < tol);
  CHECK(sol.primal_feasibility < tol);
  CHECK(sol.complementarity < tol);
}

}  // namespace

TEST_CASE("unconstrained minimum inside the box") {
  const QPSolution sol =
      solveQp(boxSpec(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), -1.0, 1.0));
  CHECK(sol.x.cwiseAbs().maxCoeff() == 0.0);
  checkKkt(sol);
}

TEST_CASE("separable clipping onto the box") {
  const QPSolution sol =
      solveQp(boxSpec(Eigen::Matrix2d::Identity(), Eigen::Vector2d(-2.0, 0.0), -1.0, 1.0));
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(sol.x[1]) < 1e-12);
  checkKkt(sol);
}

TEST_CASE("equality-like boxes pin variables") {
  QPSpec spec = boxSpec(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1.0, 1.0), -1.0, 1.0);
  spec.lower[0] = 0.25;
  spec.upper[0] = 0.25;
  const QPSolution sol = solveQp(spec);
  CHECK(sol.x[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sol.x[1] == doctest::Approx(-1.0).epsilon(1e-12));
  checkKkt(sol);
}

TEST_CASE("general inequality rows participate") {
  // min 1/2|x|^2 - [1,1]x  s.t. x1 + x2 <= 1, box [-2, 2]^2.
  QPSpec spec = boxSpec(Eigen::Matrix2d::Identity(), Eigen::Vector2d(-1.0, -1.0), -2.0, 2.0);
  spec.ineq_matrix = Eigen::MatrixXd::Ones(1, 2);
  spec.ineq_bound = Eigen::VectorXd::Constant(1, 1.0);
  const QPSolution sol = solveQp(spec);
  CHECK(sol.x[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.x[1] == doctest::Approx(0.5).epsilon(1e-10));
  checkKkt(sol);
}

TEST_CASE("infeasible boxes are rejected") {
  QPSpec spec = boxSpec(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), -1.0, 1.0);
  spec.lower[1] = 2.0;  // lower > upper
  try {
    solveQp(spec);
    FAIL("expected Infeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Infeasible);
  }

  // Contradictory general rows: x1 <= -1 and -x1 <= -2 (x1 >= 2).
  QPSpec spec2 = boxSpec(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), -5.0, 5.0);
  spec2.ineq_matrix.resize(2, 2);
  spec2.ineq_matrix << 1, 0, -1, 0;
  spec2.ineq_bound.resize(2);
  spec2.ineq_bound << -1.0, -2.0;
  CHECK_THROWS_AS(solveQp(spec2), Error);
}

TEST_CASE("invalid hessians are rejected") {
  Eigen::Matrix2d h;
  h << 1.0, 0.5, -0.5, 1.0;  // asymmetric
  CHECK_THROWS_AS(solveQp(boxSpec(h, Eigen::Vector2d::Zero(), -1, 1)), Error);
  h << 1.0, 0.0, 0.0, -1.0;  // indefinite
  CHECK_THROWS_AS(solveQp(boxSpec(h, Eigen::Vector2d::Zero(), -1, 1)), Error);
}

TEST_CASE("KKT residuals on random PSD boxes") {
  std::mt19937 rng(101);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int i = 0; i < 2000; ++i) {
    const QPSpec spec = randomPsdSpec(dim(rng), rng);
    const QPSolution sol = solveQp(spec);
    checkKkt(sol);
  }
}

TEST_CASE("solutions are deterministic") {
  std::mt19937 rng(7);
  const QPSpec spec = randomPsdSpec(6, rng);
  const QPSolution a = solveQp(spec);
  const QPSolution b = solveQp(spec);
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("2-DOF objective beats a brute-force grid scan") {
  std::mt19937 rng(211);
  for (int i = 0; i < 25; ++i) {
    const QPSpec spec = randomPsdSpec(2, rng);
    const QPSolution sol = solveQp(spec);
    const double grid_best = oracles::gridScanObjective(spec);
    CHECK(sol.objective <= grid_best + 1e-6);
    checkKkt(sol);
  }
}

TEST_CASE("semidefinite hessians still certify") {
  // Rank-1 hessian with a box: minimizer set is a segment; any point on it
  // passes the KKT bounds.
  QPSpec spec;
  spec.hessian.resize(2, 2);
  spec.hessian << 1, 0, 0, 0;
  spec.gradient = Eigen::Vector2d(-1.0, 0.1);
  spec.lower = Eigen::Vector2d(-1.0, -1.0);
  spec.upper = Eigen::Vector2d(1.0, 1.0);
  const QPSolution sol = solveQp(spec);
  checkKkt(sol, 1e-8);
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.x[1] == doctest::Approx(-1.0).epsilon(1e-8));
  spec.validate();
}

TEST_CASE("spec validation flags violations") {
  QPSpec spec = boxSpec(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), -1.0, 1.0);
  CHECK_NOTHROW(spec.validate());
  spec.lower[0] = 2.0;
  CHECK_THROWS_AS(spec.validate(), Error);
}
