#include "oracle_fixtures.hpp"

#include "qcs/eigensolve.hpp"

#include <doctest.h>

#include <cmath>

using namespace qcs;

namespace {

void check_against_oracle(const SparseOperator &op, const EigenSolution &sol, const Vector &ref) {
  REQUIRE(sol.k() > 0);
  for (Eigen::Index i = 0; i < sol.eigenvalues.size(); ++i)
    CHECK(std::abs(sol.eigenvalues[i] - ref[i]) <= 1e-8 * std::max(1.0, std::abs(ref[i])));
  CHECK(residual_norms(op, sol).maxCoeff() <= 1e-8);
  CHECK(orthonormality_defect(sol.eigenvectors) <= 1e-10);
}

} // namespace

TEST_CASE("iterative solvers agree with the dense oracle on every form") {
  for (const auto &c : fixtures::small_cases()) {
    CAPTURE(c.name);
    const Vector ref = fixtures::dense(c.op).eigenvalues();

    SolverOptions direct;
    direct.mode = SolverMode::direct;
    check_against_oracle(c.op, solve_lowest(c.op, 30, direct), ref);

    SolverOptions slicing;
    slicing.mode = SolverMode::shift_invert;
    slicing.slice_target = 60;
    const std::size_t k = std::min<std::size_t>(300, c.op.dimension() / 3);
    check_against_oracle(c.op, solve_lowest(c.op, k, slicing), ref);
  }
}

TEST_CASE("streaming delivers the same spectrum in ascending slices") {
  const auto cases = fixtures::small_cases();
  const SparseOperator &op = cases[0].op;
  const Vector ref = fixtures::dense(op).eigenvalues();
  SolverOptions o;
  o.slice_target = 40;
  std::vector<double> seen;
  double last = -1e300;
  std::size_t slices = 0;
  const EigenSolution s = solve_lowest_streaming(op, 200, o, nullptr, [&](const EigenSolution &part) {
    ++slices;
    CHECK(residual_norms(op, part).maxCoeff() <= 1e-8);
    for (Eigen::Index i = 0; i < part.eigenvalues.size(); ++i) {
      CHECK(part.eigenvalues[i] >= last);
      last = part.eigenvalues[i];
      seen.push_back(part.eigenvalues[i]);
    }
  });
  CHECK(slices > 1);
  REQUIRE(seen.size() == 200);
  for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == doctest::Approx(ref[static_cast<Eigen::Index>(i)]).epsilon(1e-9));
  CHECK(s.eigenvalues.size() == 200);
  CHECK(s.eigenvectors.size() == 0);
}

TEST_CASE("inertia counts match the dense spectrum") {
  const auto cases = fixtures::small_cases();
  const SparseOperator &op = cases[2].op;
  const Vector ref = fixtures::dense(op).eigenvalues();
  for (Eigen::Index i : {0, 7, 100, 400}) {
    const double shift = 0.5 * (ref[i] + ref[i + 1]);
    CHECK(count_eigenvalues_below(op, shift) == static_cast<std::size_t>(i + 1));
  }
  CHECK(count_eigenvalues_below(op, ref[0] - 1.0) == 0);
}

TEST_CASE("solutions are bitwise reproducible for a fixed seed") {
  const auto cases = fixtures::small_cases();
  const SparseOperator &op = cases[0].op;
  SolverOptions o;
  o.slice_target = 50;
  const EigenSolution a = solve_lowest(op, 120, o);
  const EigenSolution b = solve_lowest(op, 120, o);
  CHECK((a.eigenvalues.array() == b.eigenvalues.array()).all());
  CHECK((a.eigenvectors.array() == b.eigenvectors.array()).all());
}

TEST_CASE("canonical vectors are sign-fixed and parity-definite") {
  const auto cases = fixtures::small_cases();
  const SparseOperator &op = cases[0].op;
  const auto reflR = reflection_permutation(op.grid(), Coord::R);
  const auto reflx = reflection_permutation(op.grid(), Coord::x);
  EigenSolution s = solve_lowest(op, 40);
  canonicalize(s, op, {reflR, reflx}, 1e-7);
  CHECK(residual_norms(op, s).maxCoeff() <= 1e-8);
  for (Eigen::Index j = 0; j < s.eigenvectors.cols(); ++j) {
    const Vector v = s.eigenvectors.col(j);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    CHECK(v[imax] > 0.0);
    for (const auto *p : {&reflR, &reflx}) {
      double plus = 0.0, minus = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double w = v[static_cast<Eigen::Index>((*p)[static_cast<std::size_t>(i)])];
        plus = std::max(plus, std::abs(w - v[i]));
        minus = std::max(minus, std::abs(w + v[i]));
      }
      CHECK(std::min(plus, minus) < 1e-7);
    }
  }
}

TEST_CASE("generalized problem matches the dense generalized oracle") {
  const GridSpec g = make_box_grid({{Coord::xi, 1.0, 6.0, 24}, {Coord::eta, -1.0, 1.0, 24}});
  const ProlatePair p = build_prolate_fixed_R(g, 2.0, 1.0);
  const EigenSolution s = solve_lowest_generalized(p.A, p.W, 6);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(p.A.to_dense(), p.W.to_dense());
  for (Eigen::Index i = 0; i < 6; ++i)
    CHECK(s.eigenvalues[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-8));
  // W-orthonormal eigenvectors.
  const Matrix G = s.eigenvectors.transpose() * p.W.to_dense() * s.eigenvectors;
  CHECK((G - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("invalid requests and non-convergence") {
  const auto cases = fixtures::small_cases();
  const SparseOperator &op = cases[0].op;
  CHECK_THROWS_AS(solve_lowest(op, 0), InvalidParameter);
  CHECK_THROWS_AS(solve_lowest(op, op.dimension() + 1), InvalidParameter);
  SolverOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(solve_lowest(op, 5, bad), InvalidParameter);

  SolverOptions starved;
  starved.mode = SolverMode::direct;
  starved.max_restarts = 1;
  starved.tol = 1e-14;
  try {
    solve_lowest(op, 60, starved);
    FAIL("expected a convergence failure");
  } catch (const ConvergenceError &e) {
    CHECK(e.partial().k() > 0);
  }
}
