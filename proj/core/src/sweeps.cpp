#include "qcs/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace qcs {

SweepPlan SweepPlan::from_config(const RunConfig &cfg) {
  if (!cfg.sweep) throw ConfigError("sweep: no [sweep] section");
  SweepPlan p;
  p.base = cfg;
  p.base.sweep.reset();
  p.axis = cfg.sweep->axis;
  p.values = cfg.sweep->values;
  return p;
}

void SweepPlan::validate() const {
  if (values.empty()) throw ConfigError("sweep: no values");
  for (std::size_t i = 1; i < values.size(); ++i)
    if ((values[i] - values[i - 1]) * (values[1] - values[0]) <= 0.0)
      throw ConfigError("sweep: values must be strictly monotone");
}

RunConfig configure_row(const RunConfig &base, SweepAxis axis, double value) {
  RunConfig c = base;
  c.sweep.reset();
  switch (axis) {
  case SweepAxis::mu:
    if (!(value > 0.0 && value <= 1.0)) throw ConfigError("sweep: mu must lie in (0, 1]");
    c.mu = value;
    break;
  case SweepAxis::box_half_width:
    if (!(value > 0.0)) throw ConfigError("sweep: box half width must be positive");
    for (auto &a : c.axes) {
      const bool radial = a.min == 0.0;
      const double h = (a.max - a.min) / static_cast<double>(a.n);
      a.min = radial ? 0.0 : -value;
      a.max = value;
      a.n = std::max<std::size_t>(4, static_cast<std::size_t>(std::lround((a.max - a.min) / h)));
    }
    break;
  case SweepAxis::basis_size: {
    if (!(value >= 16.0)) throw ConfigError("sweep: basis size must be at least 16");
    const double per = std::pow(value, 1.0 / static_cast<double>(c.axes.size()));
    for (auto &a : c.axes) a.n = static_cast<std::size_t>(std::lround(per));
    break;
  }
  }
  return c;
}

SweepRow summarize_row(double value, const SolveOutcome &o, const AnalysisOptions &opts) {
  SweepRow r;
  r.value = value;
  r.ok = o.complete;
  r.error = o.failure;
  r.dimension = o.dimension;
  r.states = o.summary.states.size();
  r.grid_hash = o.grid_hash;
  r.seed = o.stats.seed;
  r.wall_seconds = o.stats.wall_seconds;
  r.ground_energy = o.summary.ground_energy;
  r.binding_ev = o.summary.binding_ev;
  r.first_qc_index = o.summary.first_qc_index;
  r.first_qc_ev = o.summary.first_qc_ev;
  r.proliferation_ev = o.summary.proliferation_ev;
  r.ground_is_qc = !o.summary.states.empty() && o.summary.states.front().is_quasi_collision;
  if (r.first_qc_index) {
    const std::size_t f = *r.first_qc_index;
    const std::size_t lo = f > opts.window ? f - opts.window : 0;
    for (std::size_t i = lo; i < f; ++i) r.qc_below_first += o.summary.states[i].is_quasi_collision ? 1 : 0;
  }
  return r;
}

SweepIndicators sweep_indicators(const std::vector<SweepRow> &rows) {
  SweepIndicators ind;
  bool dec = true, nondec = true;
  const SweepRow *prev = nullptr;
  std::vector<double> ground;
  for (const auto &r : rows) {
    if (!r.ok || !r.first_qc_index) {
      dec = nondec = false;
      continue;
    }
    ground.push_back(r.ground_energy);
    if (prev) {
      dec = dec && *r.first_qc_index < *prev->first_qc_index;
      nondec = nondec && *r.first_qc_ev >= *prev->first_qc_ev;
    }
    prev = &r;
  }
  ind.first_qc_index_strictly_decreasing = dec && prev;
  ind.first_qc_ev_nondecreasing = nondec && prev;
  if (!ground.empty()) {
    const auto [lo, hi] = std::minmax_element(ground.begin(), ground.end());
    const double mean = std::accumulate(ground.begin(), ground.end(), 0.0) / static_cast<double>(ground.size());
    ind.ground_energy_spread = mean != 0.0 ? (*hi - *lo) / std::abs(mean) : 0.0;
  }
  return ind;
}

SweepResult run_sweep(const SweepPlan &plan) {
  plan.validate();
  SweepResult res;
  for (double v : plan.values) {
    try {
      RunConfig c = configure_row(plan.base, plan.axis, v);
      std::size_t total = 1;
      for (const auto &a : c.axes) total *= a.n;
      c.k = std::min(c.k, total);
      c.command = "solve";
      validate(c);
      res.rows.push_back(summarize_row(v, run_solve(c), c.analysis));
    } catch (const std::exception &e) {
      SweepRow r;
      r.value = v;
      r.error = e.what();
      r.seed = plan.base.solver.seed;
      res.rows.push_back(r);
    }
  }
  res.indicators = sweep_indicators(res.rows);
  return res;
}

} // namespace qcs
