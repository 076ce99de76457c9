#include "qcs/analysis.hpp"
#include "qcs/operators.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qcs;

namespace {

// Sampled, grid-normalized storage vector for psi on the operator's measure.
template <class F> Vector stored(const SparseOperator &op, F psi) {
  const auto &g = op.grid();
  Vector v(static_cast<Eigen::Index>(g.total_points()));
  for (std::size_t k = 0; k < g.total_points(); ++k) {
    const auto c = g.coordinates(k);
    v[static_cast<Eigen::Index>(k)] = std::sqrt(op.measure()[k]) * psi(c);
  }
  return v.normalized();
}

SparseOperator planar(std::size_t n) {
  HamiltonianOptions h;
  h.mu = 0.01;
  return build_hamiltonian(make_box_grid({{Coord::R, -8, 8, n}, {Coord::x, -8, 8, n}}), h);
}

} // namespace

TEST_CASE("I0 of a Gaussian approaches the continuum integral") {
  // psi = exp(-(R-a)^2/2 - x^2/2): I0 = exp(-a^2) sqrt(pi) / pi = exp(-a^2) / sqrt(pi).
  const double a = 0.4;
  const double exact = std::exp(-a * a) / std::sqrt(std::numbers::pi);
  double prev = 1.0;
  for (std::size_t n : {40, 80, 160}) {
    const SparseOperator op = planar(n);
    const Vector v = stored(op, [a](const std::vector<double> &c) {
      return std::exp(-0.5 * (c[0] - a) * (c[0] - a) - 0.5 * c[1] * c[1]);
    });
    const double err = std::abs(compute_I0(v, op) - exact) / exact;
    CHECK(err < 4e-2);
    // Linear interpolation across R = 0: second order in the spacing.
    if (prev < 1.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
    prev = err;
  }
  CHECK(prev < 2.5e-3);
}

TEST_CASE("states odd in R have vanishing I0") {
  const SparseOperator op = planar(40);
  const Vector v = stored(op, [](const std::vector<double> &c) {
    return c[0] * std::exp(-0.5 * c[0] * c[0] - 0.5 * c[1] * c[1]);
  });
  CHECK(compute_I0(v, op) < 1e-28);
  CHECK(std::abs(psi_at_origin(v, op)) < 1e-14);
  CHECK(parity_R(v, op.grid()) == -1);
}

TEST_CASE("radial I0 carries the x weight") {
  // psi = exp(-R^2/2 - x^2/2) with measure x dx dR over x > 0:
  // norm = sqrt(pi) / 2, plane integral = 1/2, so I0 = 1 / sqrt(pi).
  HamiltonianOptions h;
  h.form = Form::cylinder_2var;
  h.mu = 0.01;
  const SparseOperator op = build_hamiltonian(make_box_grid({{Coord::R, -8, 8, 160}, {Coord::x, 0, 8, 80}}), h);
  const Vector v = stored(op, [](const std::vector<double> &c) { return std::exp(-0.5 * c[0] * c[0] - 0.5 * c[1] * c[1]); });
  CHECK(compute_I0(v, op) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(5e-3));
  // psi(0, 0) = 1 / sqrt(norm) with norm = sqrt(pi) / 2.
  CHECK(psi_at_origin(v, op) == doctest::Approx(1.0 / std::sqrt(std::sqrt(std::numbers::pi) / 2)).epsilon(1e-2));
}

TEST_CASE("psi at origin interpolates the physical wavefunction") {
  const SparseOperator op = planar(160);
  const Vector v = stored(op, [](const std::vector<double> &c) { return std::exp(-0.5 * c[0] * c[0] - 0.5 * c[1] * c[1]); });
  // Continuum normalization: integral of psi^2 = pi.
  CHECK(psi_at_origin(v, op) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(5e-3));
  CHECK(parity_R(v, op.grid()) == 1);
}

TEST_CASE("unnormalized input is rejected") {
  const SparseOperator op = planar(40);
  const Vector v = Vector::Ones(static_cast<Eigen::Index>(op.dimension()));
  CHECK_THROWS_AS(compute_I0(v, op), NormalizationError);
  CHECK_THROWS_AS(compute_I0(Vector::Ones(3).normalized(), op), InvalidParameter);
}

TEST_CASE("proliferation onset is the first QC state of the first dense window") {
  std::vector<bool> f(100, false);
  f[10] = true; // isolated
  for (std::size_t i : {50, 53, 58, 61, 64, 66}) f[i] = true;
  // Window of 20 ending at 66 holds 50..66 minus 46..49: 6 states.
  CHECK(proliferation_onset(f, 20, 5) == std::optional<std::size_t>(50));
  CHECK_FALSE(proliferation_onset(f, 10, 5).has_value());
  CHECK(proliferation_onset(std::vector<bool>(5, true), 20, 5) == std::optional<std::size_t>(0));
  CHECK_FALSE(proliferation_onset({}, 20, 5).has_value());
  CHECK_THROWS_AS(proliferation_onset(f, 0, 5), InvalidParameter);
}

TEST_CASE("spectrum summary classifies against the relative threshold") {
  const PhysicalSystem sys = deuteron_system();
  std::vector<StateObservables> obs;
  const double I0[] = {0.0, 1e-9, 0.5, 0.0, 2e-4, 1.0};
  for (int i = 0; i < 6; ++i) obs.push_back({-2.0 + 0.1 * i, I0[i], 0.0, 1});
  const SpectrumSummary s = summarize_spectrum(obs, sys);
  CHECK(s.max_I0 == 1.0);
  CHECK(s.threshold == doctest::Approx(1e-3));
  CHECK(s.first_qc_index == std::optional<std::size_t>(2));
  CHECK(*s.first_qc_ev == doctest::Approx(0.2 * sys.energy_scale_ev));
  CHECK(s.binding_ev == doctest::Approx(2.0 * sys.energy_scale_ev));
  CHECK(s.states[4].is_quasi_collision == false);
  CHECK(s.states[5].is_quasi_collision);
  CHECK(s.states[0].e_ev == 0.0);
  CHECK_FALSE(s.proliferation_index.has_value());

  AnalysisOptions loose;
  loose.qc_relative_threshold = 1e-4;
  CHECK(summarize_spectrum(obs, sys, loose).states[4].is_quasi_collision);
}
