#include "qcs/bundle_io.hpp"
#include "qcs/sweeps.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace qcs;

namespace {

RunConfig small_base() {
  RunConfig c = preset_config("mu-study");
  c.axes = {{Coord::R, -8, 8, 20}, {Coord::x, -8, 8, 20}};
  c.k = 24;
  c.reference = {};
  return c;
}

SweepRow row(double v, std::size_t qc, double ev, double e0) {
  SweepRow r;
  r.value = v;
  r.ok = true;
  r.first_qc_index = qc;
  r.first_qc_ev = ev;
  r.ground_energy = e0;
  return r;
}

} // namespace

TEST_CASE("configure_row: mu") {
  const RunConfig c = configure_row(small_base(), SweepAxis::mu, 0.05);
  CHECK(effective_mu(c) == 0.05);
  CHECK_FALSE(c.sweep);
  CHECK_THROWS_AS(configure_row(small_base(), SweepAxis::mu, 1.5), ConfigError);
}

TEST_CASE("configure_row: box half width keeps the spacing") {
  RunConfig base = small_base();
  base.axes = {{Coord::R, -8, 8, 20}, {Coord::x, 0, 8, 10}};
  const RunConfig c = configure_row(base, SweepAxis::box_half_width, 12.0);
  CHECK(c.axes[0].min == -12.0);
  CHECK(c.axes[0].max == 12.0);
  CHECK(c.axes[0].n == 30);
  CHECK(c.axes[1].min == 0.0);
  CHECK(c.axes[1].max == 12.0);
  CHECK(c.axes[1].n == 15);
}

TEST_CASE("configure_row: basis size spreads points evenly over the axes") {
  const RunConfig c = configure_row(small_base(), SweepAxis::basis_size, 3600);
  CHECK(c.axes[0].n == 60);
  CHECK(c.axes[1].n == 60);
  CHECK(c.axes[0].min == -8.0);
  RunConfig three = preset_config("threevar-deuteron");
  const RunConfig t = configure_row(three, SweepAxis::basis_size, 27000);
  for (const auto &a : t.axes) CHECK(a.n == 30);
}

TEST_CASE("plans must be strictly monotone") {
  SweepPlan p = SweepPlan::from_config(small_base());
  CHECK(p.axis == SweepAxis::mu);
  CHECK(p.values.size() == 3);
  p.values = {0.1, 0.1};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.values = {0.3, 0.2, 0.25};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.values = {0.3, 0.2, 0.1};
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("indicators") {
  auto ind = sweep_indicators({row(0.001, 40, 150, -2.0), row(0.01, 25, 160, -2.02), row(0.1, 10, 160, -2.04)});
  CHECK(ind.first_qc_index_strictly_decreasing);
  CHECK(ind.first_qc_ev_nondecreasing);
  CHECK(ind.ground_energy_spread == doctest::Approx(0.04 / 2.02));

  ind = sweep_indicators({row(0.001, 40, 150, -2.0), row(0.01, 40, 140, -2.0)});
  CHECK_FALSE(ind.first_qc_index_strictly_decreasing);
  CHECK_FALSE(ind.first_qc_ev_nondecreasing);

  SweepRow failed;
  ind = sweep_indicators({row(0.001, 40, 150, -2.0), failed});
  CHECK_FALSE(ind.first_qc_index_strictly_decreasing);
  CHECK_FALSE(sweep_indicators({}).first_qc_index_strictly_decreasing);
}

TEST_CASE("rows are independent, match direct solves and reproduce") {
  SweepPlan plan = SweepPlan::from_config(small_base());
  plan.values = {0.01, 0.1, 2.0}; // the last mu is out of range
  const SweepResult a = run_sweep(plan);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.rows[0].ok);
  CHECK(a.rows[1].ok);
  CHECK_FALSE(a.rows[2].ok);
  CHECK(a.rows[2].error.find("mu") != std::string::npos);

  for (std::size_t i = 0; i < 2; ++i) {
    const RunConfig c = configure_row(plan.base, plan.axis, plan.values[i]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(build_operator(c).to_dense(), Eigen::EigenvaluesOnly);
    CHECK(a.rows[i].ground_energy == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-9));
    CHECK(a.rows[i].dimension == 400);
    CHECK(a.rows[i].states == 24);
    CHECK(a.rows[i].binding_ev == doctest::Approx(54.4 * std::abs(es.eigenvalues()[0])).epsilon(1e-3));
  }
  // Larger mu adds zero-point energy along R.
  CHECK(a.rows[1].ground_energy > a.rows[0].ground_energy);

  const SweepResult b = run_sweep(plan);
  CHECK(sweep_csv(plan.axis, a.rows) == sweep_csv(plan.axis, b.rows));
}
