#include "qcs/analysis.hpp"

#include "qcs/operators.hpp"

#include <algorithm>
#include <cmath>

namespace qcs {
namespace {

bool symmetric_axis(const Axis &a) {
  return std::abs(a.min + a.max) <= 1e-12 * std::max(1.0, a.max - a.min);
}

void check_norm(const Vector &v) {
  const double nrm = v.norm();
  if (!(std::abs(nrm - 1.0) <= 1e-6))
    throw NormalizationError("state is not normalized on the grid measure");
}

bool radial_x_axis(const SparseOperator &op) {
  const auto &meta = op.metadata();
  if (meta.form != to_string(Form::cylinder_2var) && meta.form != to_string(Form::cylinder_3var))
    return false;
  const auto &g = op.grid();
  return g.has_axis(Coord::x) && g.axis(g.axis_index(Coord::x)).min == 0.0;
}

} // namespace

Vector physical_wavefunction(const Vector &v, const std::vector<double> &measure) {
  if (static_cast<std::size_t>(v.size()) != measure.size())
    throw InvalidParameter("vector length does not match the grid");
  Vector psi(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) psi[i] = v[i] / std::sqrt(measure[static_cast<std::size_t>(i)]);
  return psi;
}

double compute_I0(const Vector &v, const GridSpec &grid, const std::vector<double> &measure) {
  check_norm(v);
  const Vector psi = physical_wavefunction(v, measure);
  const std::size_t dR = grid.axis_index(Coord::R);
  const Axis &aR = grid.axis(dR);
  const PlaneBracket br = nearest_plane_indices(grid, Coord::R, 0.0);
  const std::size_t stride = grid.stride(dR);
  const double hR = aR.spacing();

  // Walk the plane at R index 0 and offset into the bracketing planes.
  double sum = 0.0;
  const std::size_t N = grid.total_points();
  for (std::size_t lin = 0; lin < N; ++lin) {
    if (grid.index_along(lin, dR) != 0) continue;
    double amp = 0.0;
    double plane_measure = 0.0;
    for (int s = 0; s < 2; ++s) {
      if (br.index[s] < 0 || br.weight[s] == 0.0) continue;
      const std::size_t p = lin + static_cast<std::size_t>(br.index[s]) * stride;
      amp += br.weight[s] * psi[static_cast<Eigen::Index>(p)];
      plane_measure += br.weight[s] * measure[p] / hR;
    }
    sum += amp * amp * plane_measure;
  }
  return sum;
}

double compute_I0(const Vector &v, const SparseOperator &op) {
  return compute_I0(v, op.grid(), op.measure());
}

double psi_at_origin(const Vector &v, const GridSpec &grid, const std::vector<double> &measure,
                     bool radial_x) {
  const Vector psi = physical_wavefunction(v, measure);
  struct Leg {
    std::size_t d;
    PlaneBracket b;
  };
  std::vector<Leg> legs;
  for (std::size_t d = 0; d < grid.rank(); ++d) {
    const Axis &a = grid.axis(d);
    if (0.0 < a.min || 0.0 > a.max) return 0.0;
    PlaneBracket b;
    if (radial_x && a.name == Coord::x && a.min == 0.0) {
      b.index = {0, 0};
      b.weight = {1.0, 0.0};
    } else {
      b = nearest_plane_indices(grid, a.name, 0.0);
    }
    legs.push_back({d, b});
  }
  double value = 0.0;
  const std::size_t corners = std::size_t{1} << legs.size();
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t lin = 0;
    bool wall = false;
    for (std::size_t l = 0; l < legs.size(); ++l) {
      const int s = static_cast<int>((c >> l) & 1U);
      const auto idx = legs[l].b.index[s];
      w *= legs[l].b.weight[s];
      if (idx < 0) { wall = true; break; }
      lin += static_cast<std::size_t>(idx) * grid.stride(legs[l].d);
    }
    if (wall || w == 0.0) continue;
    value += w * psi[static_cast<Eigen::Index>(lin)];
  }
  return value;
}

double psi_at_origin(const Vector &v, const SparseOperator &op) {
  return psi_at_origin(v, op.grid(), op.measure(), radial_x_axis(op));
}

int parity_R(const Vector &v, const GridSpec &grid) {
  if (!grid.has_axis(Coord::R) || !symmetric_axis(grid.axis(grid.axis_index(Coord::R)))) return 1;
  const auto perm = reflection_permutation(grid, Coord::R);
  double overlap = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    overlap += v[static_cast<Eigen::Index>(i)] * v[static_cast<Eigen::Index>(perm[i])];
  return overlap < 0.0 ? -1 : 1;
}

StateObservables observe_state(const Vector &v, double energy, const SparseOperator &op) {
  StateObservables o;
  o.energy = energy;
  o.I0 = compute_I0(v, op);
  o.psi_origin = psi_at_origin(v, op);
  o.parity_R = parity_R(v, op.grid());
  return o;
}

std::optional<std::size_t> proliferation_onset(const std::vector<bool> &flags, std::size_t window,
                                               std::size_t min_count) {
  if (window == 0 || min_count == 0) throw InvalidParameter("window and count must be positive");
  const std::size_t n = flags.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    count += flags[i] ? 1 : 0;
    if (i >= window) count -= flags[i - window] ? 1 : 0;
    if (count >= min_count) {
      const std::size_t start = i + 1 >= window ? i + 1 - window : 0;
      for (std::size_t j = start; j <= i; ++j)
        if (flags[j]) return j;
    }
  }
  return std::nullopt;
}

SpectrumSummary summarize_spectrum(const std::vector<StateObservables> &obs, const PhysicalSystem &sys,
                                   const AnalysisOptions &opts) {
  if (!(opts.qc_relative_threshold > 0.0)) throw InvalidParameter("threshold must be positive");
  SpectrumSummary s;
  if (obs.empty()) return s;
  s.ground_energy = obs.front().energy;
  s.binding_ev = std::abs(s.ground_energy) * sys.energy_scale_ev;
  for (const auto &o : obs) s.max_I0 = std::max(s.max_I0, o.I0);
  s.threshold = opts.qc_relative_threshold * s.max_I0;

  std::vector<bool> flags;
  s.states.reserve(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    StateReport r;
    r.index = i;
    r.e_dimensionless = obs[i].energy;
    r.e_ev = (obs[i].energy - s.ground_energy) * sys.energy_scale_ev;
    r.I0 = obs[i].I0;
    r.psi_origin = obs[i].psi_origin;
    r.parity_R = obs[i].parity_R;
    r.is_quasi_collision = s.max_I0 > 0.0 && obs[i].I0 > s.threshold;
    flags.push_back(r.is_quasi_collision);
    if (r.is_quasi_collision && !s.first_qc_index) {
      s.first_qc_index = i;
      s.first_qc_ev = r.e_ev;
    }
    s.states.push_back(r);
  }
  s.proliferation_index = proliferation_onset(flags, opts.window, opts.window_min_count);
  if (s.proliferation_index) s.proliferation_ev = s.states[*s.proliferation_index].e_ev;
  return s;
}

SpectrumSummary classify_spectrum(const EigenSolution &sol, const SparseOperator &op,
                                  const PhysicalSystem &sys, const AnalysisOptions &opts) {
  std::vector<StateObservables> obs;
  obs.reserve(sol.k());
  for (std::size_t i = 0; i < sol.k(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    obs.push_back(observe_state(sol.eigenvectors.col(c), sol.eigenvalues[c], op));
  }
  return summarize_spectrum(obs, sys, opts);
}

std::vector<std::vector<std::size_t>> symmetry_reflections(const GridSpec &grid) {
  std::vector<std::vector<std::size_t>> out;
  for (Coord c : {Coord::R, Coord::x, Coord::y}) {
    if (!grid.has_axis(c)) continue;
    if (!symmetric_axis(grid.axis(grid.axis_index(c)))) continue;
    out.push_back(reflection_permutation(grid, c));
  }
  return out;
}

} // namespace qcs
