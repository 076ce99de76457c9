#include "oracle_fixtures.hpp"

#include "qcs/eigensolve.hpp"
#include "qcs/symmetry.hpp"

#include <doctest.h>

#include <algorithm>

using namespace qcs;

TEST_CASE("sector spectra partition the full spectrum") {
  for (const auto &c : fixtures::small_cases()) {
    CAPTURE(c.name);
    const auto axes = symmetric_axes(c.op.grid());
    REQUIRE(!axes.empty());
    const SymmetryReduction red(c.op, axes);
    CHECK(red.sector_count() == (1u << axes.size()));
    std::vector<double> all;
    std::size_t dim = 0;
    for (std::size_t s = 0; s < red.sector_count(); ++s) {
      const Vector e = fixtures::dense(red.sector(s)).eigenvalues();
      dim += red.sector(s).dimension();
      all.insert(all.end(), e.data(), e.data() + e.size());
    }
    CHECK(dim == c.op.dimension());
    std::sort(all.begin(), all.end());
    const Vector ref = fixtures::dense(c.op).eigenvalues();
    for (std::size_t i = 0; i < all.size(); ++i)
      CHECK(all[i] == doctest::Approx(ref[static_cast<Eigen::Index>(i)]).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("expanded sector vectors are full eigenvectors with the sector's parity") {
  const auto cases = fixtures::small_cases();
  const SparseOperator &op = cases[0].op;
  const SymmetryReduction red(op, {Coord::R, Coord::x});
  for (std::size_t s = 0; s < red.sector_count(); ++s) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(red.sector(s).to_dense());
    const Matrix V = red.expand_columns(s, es.eigenvectors().leftCols(5));
    CHECK(orthonormality_defect(V) < 1e-12);
    for (Eigen::Index j = 0; j < 5; ++j) {
      const Vector v = V.col(j);
      CHECK((op.apply(v) - es.eigenvalues()[j] * v).norm() < 1e-10);
      for (std::size_t r = 0; r < 2; ++r) {
        const auto &p = red.reflections()[r];
        const int chi = red.characters(s)[r];
        double worst = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i)
          worst = std::max(worst, std::abs(v[static_cast<Eigen::Index>(p[static_cast<std::size_t>(i)])] - chi * v[i]));
        CHECK(worst < 1e-12);
      }
      CHECK((red.restrict(s, v) - es.eigenvectors().col(j)).norm() < 1e-12);
    }
  }
}

TEST_CASE("streamed symmetric solve equals the unreduced solve") {
  const auto cases = fixtures::small_cases();
  const SparseOperator &op = cases[2].op;
  const SymmetryReduction red(op, symmetric_axes(op.grid()));
  SolverOptions o;
  o.slice_target = 50;
  std::vector<double> with, without;
  solve_lowest_streaming(op, 250, o, &red, [&](const EigenSolution &s) {
    CHECK(residual_norms(op, s).maxCoeff() <= 1e-8);
    with.insert(with.end(), s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
  });
  solve_lowest_streaming(op, 250, o, nullptr, [&](const EigenSolution &s) {
    without.insert(without.end(), s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
  });
  REQUIRE(with.size() == 250);
  REQUIRE(without.size() == 250);
  for (std::size_t i = 0; i < 250; ++i) CHECK(with[i] == doctest::Approx(without[i]).epsilon(1e-9));
}

TEST_CASE("reductions refuse asymmetric operators") {
  const SparseOperator lopsided = fixtures::hamiltonian(
      Form::planar_2var, {{Coord::R, -15, 15, 20}, {Coord::x, -12, 15, 20}}, 0.01);
  CHECK(symmetric_axes(lopsided.grid()) == std::vector<Coord>{Coord::R});
  CHECK_THROWS_AS(SymmetryReduction(lopsided, {Coord::x}), InvalidParameter);
}
