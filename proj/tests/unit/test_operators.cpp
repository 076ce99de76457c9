#include "qcs/errors.hpp"
#include "qcs/operators.hpp"
#include "qcs/units.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <numbers>

using namespace qcs;

namespace {

SparseOperator small(Form f, std::size_t n = 12, double mu = 0.01, bool radial_half = false) {
  GridSpec g;
  if (f == Form::cylinder_3var)
    g = make_box_grid({{Coord::R, -6, 6, n}, {Coord::x, radial_half ? 0.0 : -6.0, 6, n}, {Coord::y, -6, 6, n}});
  else
    g = make_box_grid({{Coord::R, -6, 6, n}, {Coord::x, radial_half ? 0.0 : -6.0, 6, n}});
  HamiltonianOptions h;
  h.form = f;
  h.mu = mu;
  return build_hamiltonian(g, h);
}

Vector dense_eigenvalues(const Matrix &A) { return Eigen::SelfAdjointEigenSolver<Matrix>(A, Eigen::EigenvaluesOnly).eigenvalues(); }

// Lowest eigenvalues of -d2/dx2 on (0, pi) with Dirichlet walls are k^2.
double pib_error(std::size_t n, Centering c) {
  const Axis a{Coord::x, 0.0, std::numbers::pi, n, c};
  const Vector ev = dense_eigenvalues(build_laplacian_1d(a, 1.0).to_dense());
  double err = 0.0;
  for (int k = 1; k <= 3; ++k) err = std::max(err, std::abs(ev[k - 1] - k * k));
  return err;
}

} // namespace

TEST_CASE("stored operators are exactly symmetric") {
  for (Form f : {Form::planar_2var, Form::cylinder_2var, Form::cylinder_3var}) {
    for (bool half : {false, true}) {
      if (f == Form::planar_2var && half) continue;
      const SparseOperator op = small(f, 8, 0.01, half);
      const auto &m = op.matrix();
      for (Eigen::Index i = 0; i < m.outerSize(); ++i)
        for (CsrMatrix::InnerIterator it(m, i); it; ++it) CHECK(op.entry(it.col(), it.row()) == it.value());
    }
  }
}

TEST_CASE("interior five-point stencil is fourth order") {
  for (Centering c : {Centering::cell, Centering::node}) {
    std::vector<double> order;
    for (std::size_t n : {20, 40, 80}) order.push_back(std::log2(pib_error(n, c) / pib_error(2 * n, c)));
    for (double p : order) CHECK(p == doctest::Approx(4.0).epsilon(0.3 / 4.0));
  }
}

TEST_CASE("reflections commute with every symmetric operator") {
  const double tol = 1e-12;
  for (Form f : {Form::planar_2var, Form::cylinder_2var, Form::cylinder_3var}) {
    const SparseOperator op = small(f, 10);
    const Matrix H = op.to_dense();
    for (Coord c : {Coord::R, Coord::x, Coord::y}) {
      if (!op.grid().has_axis(c)) continue;
      const auto p = reflection_permutation(op.grid(), c);
      CHECK(commutator_max(op, p) <= tol);
      // Independent dense check: (P H P)_{ij} = H_{p(i) p(j)}.
      double worst = 0.0;
      for (Eigen::Index i = 0; i < H.rows(); ++i)
        for (Eigen::Index j = 0; j < H.cols(); ++j)
          worst = std::max(worst, std::abs(H(static_cast<Eigen::Index>(p[i]), static_cast<Eigen::Index>(p[j])) - H(i, j)));
      CHECK(worst <= tol);
    }
  }
}

TEST_CASE("radial flux operator converges to Bessel zeros at second order") {
  // -(1/x)(x u')' on (0, 1) with u(1) = 0: eigenvalues j_{0,k}^2.  The cell
  // quadrature of the x weight near the axis limits the order to two.
  const double j0[2] = {2.404825557695773, 5.520078110286311};
  std::vector<std::array<double, 2>> err;
  for (std::size_t n : {20, 40, 80}) {
    const Axis a{Coord::x, 0.0, 1.0, n, Centering::cell};
    const Matrix K = flux_operator_1d(a, [](double x) { return x; }, WallKind::natural, WallKind::dirichlet);
    Matrix W = Matrix::Zero(K.rows(), K.cols());
    for (std::size_t i = 0; i < n; ++i) W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = a.point(i);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(K, W);
    err.push_back({std::abs(es.eigenvalues()[0] - j0[0] * j0[0]), std::abs(es.eigenvalues()[1] - j0[1] * j0[1])});
  }
  for (std::size_t i = 0; i + 1 < err.size(); ++i)
    for (int m = 0; m < 2; ++m) CHECK(std::log2(err[i][m] / err[i + 1][m]) > 1.8);
  CHECK(err.back()[0] < 1e-3);
}

TEST_CASE("free cylinder operator separates") {
  // No potential: eigenvalues are 8 mu (pi m / L_R)^2 + (j_{0,k} / L_x)^2.
  const double mu = 0.05;
  const GridSpec g = make_box_grid({{Coord::R, -3, 3, 40}, {Coord::x, 0, 3, 60}});
  HamiltonianOptions h;
  h.form = Form::cylinder_2var;
  h.mu = mu;
  h.include_potential = false;
  const Vector ev = dense_eigenvalues(build_hamiltonian(g, h).to_dense());
  const double j01 = 2.404825557695773;
  const double want = 8 * mu * std::pow(std::numbers::pi / 6.0, 2) + std::pow(j01 / 3.0, 2);
  CHECK(ev[0] == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("diamagnetic term never lowers an eigenvalue") {
  const PhysicalSystem sys = deuteron_system();
  for (Form f : {Form::planar_2var, Form::cylinder_2var}) {
    const GridSpec g = make_box_grid({{Coord::R, -6, 6, 14}, {Coord::x, f == Form::planar_2var ? -6.0 : 0.0, 6, 14}});
    HamiltonianOptions h;
    h.form = f;
    h.mu = 0.01;
    const Vector e0 = dense_eigenvalues(build_hamiltonian(g, h).to_dense());
    h.magnetic = MagneticSpec::for_system(sys, {2e4, -3e4, 5e4});
    const SparseOperator mag = build_hamiltonian(g, h);
    const Vector e1 = dense_eigenvalues(mag.to_dense());
    CHECK(mag.metadata().magnetic_coupling > 0.0);
    bool raised_somewhere = false;
    for (Eigen::Index i = 0; i < e0.size(); ++i) {
      CHECK(e1[i] >= e0[i] - 1e-12 * std::abs(e0[i]));
      raised_somewhere = raised_somewhere || e1[i] > e0[i];
    }
    CHECK(raised_somewhere);
  }
}

TEST_CASE("measure carries the radial weight") {
  const SparseOperator op = small(Form::cylinder_2var, 8, 0.01, true);
  const auto &g = op.grid();
  for (std::size_t k = 0; k < g.total_points(); ++k) {
    const double x = g.coordinates(k)[1];
    CHECK(op.measure()[k] == doctest::Approx(g.cell_volume() * x));
  }
}

TEST_CASE("prolate pair: W is diagonal and positive, A symmetric") {
  const GridSpec g = make_box_grid({{Coord::xi, 1.0, 5.0, 20}, {Coord::eta, -1.0, 1.0, 20}});
  const ProlatePair p = build_prolate_fixed_R(g, 2.0, 1.0);
  CHECK(p.W.is_diagonal());
  CHECK(p.W.diagonal().minCoeff() > 0.0);
  const Matrix A = p.A.to_dense();
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bad operator requests are rejected") {
  const GridSpec g = make_box_grid({{Coord::R, -6, 6, 8}, {Coord::x, -6, 6, 8}});
  HamiltonianOptions h;
  h.mu = 0.0;
  CHECK_THROWS_AS(build_hamiltonian(g, h), InvalidParameter);
  h.mu = 0.01;
  h.form = Form::cylinder_3var;
  CHECK_THROWS_AS(build_hamiltonian(g, h), InvalidParameter);
  h.form = Form::prolate_fixed_R;
  CHECK_THROWS_AS(build_hamiltonian(g, h), InvalidParameter);
}
