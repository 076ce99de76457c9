#include "qcs/pipeline.hpp"

#include "qcs/symmetry.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace qcs {
namespace {

std::string relative_miss(const char *what, double got, double want, double tol) {
  std::ostringstream o;
  o.precision(6);
  o << what << ": computed " << got << ", reference " << want << " +- " << tol * 100.0 << "%";
  return o.str();
}

void check(std::vector<std::string> &out, const char *what, const std::optional<double> &got,
           const std::optional<double> &want, double tol) {
  if (!want) return;
  if (!got) {
    out.push_back(std::string(what) + ": not found in the computed spectrum, reference " +
                  format_number(*want));
    return;
  }
  if (std::abs(*got - *want) > tol * std::abs(*want)) out.push_back(relative_miss(what, *got, *want, tol));
}

} // namespace

SparseOperator build_operator(const RunConfig &cfg) {
  return build_hamiltonian(build_grid(cfg), hamiltonian_options(cfg));
}

std::vector<std::string> compare_to_reference(const SpectrumSummary &s, const ReferenceValues &ref) {
  std::vector<std::string> out;
  std::optional<double> first_qc_energy;
  std::optional<double> prolif_energy;
  if (s.first_qc_index) first_qc_energy = s.states[*s.first_qc_index].e_dimensionless;
  if (s.proliferation_index) prolif_energy = s.states[*s.proliferation_index].e_dimensionless;
  std::optional<double> binding;
  if (!s.states.empty()) binding = s.binding_ev;
  check(out, "binding_ev", binding, ref.binding_ev, ref.binding_tol);
  check(out, "first_qc_ev", s.first_qc_ev, ref.first_qc_ev, ref.first_qc_tol);
  check(out, "proliferation_ev", s.proliferation_ev, ref.proliferation_ev, ref.proliferation_tol);
  check(out, "first_qc_energy", first_qc_energy, ref.first_qc_energy, ref.first_qc_tol);
  check(out, "proliferation_energy", prolif_energy, ref.proliferation_energy, ref.proliferation_tol);
  return out;
}

SolveOutcome run_solve(const RunConfig &cfg) {
  SolveOutcome out;
  out.system = build_system(cfg);
  const SparseOperator op = build_operator(cfg);
  out.grid_hash = op.grid().hash();
  out.dimension = op.dimension();

  std::unique_ptr<SymmetryReduction> reduction;
  if (cfg.use_symmetry) {
    const auto axes = symmetric_axes(op.grid());
    if (!axes.empty()) {
      try {
        reduction = std::make_unique<SymmetryReduction>(op, axes);
        out.used_symmetry = true;
        out.sectors = reduction->sector_count();
      } catch (const InvalidParameter &e) {
        out.warnings.push_back(std::string("symmetry reduction skipped: ") + e.what());
      }
    }
  }

  const std::size_t k = std::min(cfg.k, op.dimension());
  if (k < cfg.k) out.warnings.push_back("k clamped to the grid dimension " + std::to_string(k));

  std::vector<StateObservables> obs;
  std::vector<double> resid;
  std::vector<Vector> kept;
  obs.reserve(k);
  auto sink = [&](const EigenSolution &slice) {
    for (Eigen::Index i = 0; i < slice.eigenvalues.size(); ++i) {
      const Vector v = slice.eigenvectors.col(i);
      obs.push_back(observe_state(v, slice.eigenvalues[i], op));
      resid.push_back(slice.residuals[i]);
      if (kept.size() < cfg.dump_vectors) kept.push_back(physical_wavefunction(v, op.measure()));
    }
  };

  try {
    const EigenSolution sol = solve_lowest_streaming(op, k, cfg.solver, reduction.get(), sink);
    out.stats = sol.stats;
  } catch (const ConvergenceError &e) {
    out.complete = false;
    out.failure = e.what();
    out.stats = e.partial().stats;
  }
  if (out.complete && obs.size() < k) {
    out.complete = false;
    out.failure = "solver delivered " + std::to_string(obs.size()) + " of " + std::to_string(k) + " states";
  }

  out.summary = summarize_spectrum(obs, out.system, cfg.analysis);
  out.residuals = Eigen::Map<const Vector>(resid.data(), static_cast<Eigen::Index>(resid.size()));
  if (!kept.empty()) {
    out.vectors.resize(static_cast<Eigen::Index>(op.dimension()), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) out.vectors.col(static_cast<Eigen::Index>(j)) = kept[j];
  }
  out.discrepancies = compare_to_reference(out.summary, cfg.reference);
  if (!out.summary.first_qc_index)
    out.warnings.push_back("no quasi-collision state among the computed states");
  return out;
}

} // namespace qcs
