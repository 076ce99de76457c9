#pragma once

#include "qcs/eigensolve.hpp"
#include "qcs/sparse_operator.hpp"
#include "qcs/units.hpp"

#include <optional>
#include <vector>

namespace qcs {

/// Per-state observables, independent of the rest of the spectrum.
struct StateObservables {
  double energy = 0.0; // dimensionless eigenvalue
  double I0 = 0.0;
  double psi_origin = 0.0;
  int parity_R = 1;
};

struct StateReport {
  std::size_t index = 0;
  double e_dimensionless = 0.0;
  double e_ev = 0.0; // above the ground state
  double I0 = 0.0;
  double psi_origin = 0.0;
  bool is_quasi_collision = false;
  int parity_R = 1;
};

struct AnalysisOptions {
  double qc_relative_threshold = 1e-3; // I0 > threshold * max I0
  std::size_t window = 20;
  std::size_t window_min_count = 5;
};

struct SpectrumSummary {
  std::vector<StateReport> states;
  double ground_energy = 0.0;     // dimensionless
  double binding_ev = 0.0;        // |E0| in eV
  double max_I0 = 0.0;
  double threshold = 0.0;         // absolute I0 threshold used
  std::optional<std::size_t> first_qc_index;
  std::optional<double> first_qc_ev;
  std::optional<std::size_t> proliferation_index;
  std::optional<double> proliferation_ev;
};

/// psi_i = v_i / sqrt(measure_i): undoes the storage scaling (and the
/// cylindrical sqrt|x| transform) so that sum measure psi^2 = 1.
Vector physical_wavefunction(const Vector &v, const std::vector<double> &measure);

/// Integral over the non-R coordinates of |psi(R=0, z)|^2.  psi is linearly
/// interpolated onto the R = 0 plane from its two bracketing planes and the
/// square integrated with the grid measure.  `v` is the stored (unit 2-norm)
/// eigenvector; throws NormalizationError if ||v|| deviates from 1 by > 1e-6.
double compute_I0(const Vector &v, const GridSpec &grid,
                  const std::vector<double> &measure);
double compute_I0(const Vector &v, const SparseOperator &op);

/// Multilinear interpolation of psi at the coordinate origin.  A radial axis
/// starting at 0 is extrapolated flat from its first point (the wavefunction
/// has zero slope on the symmetry axis).
double psi_at_origin(const Vector &v, const GridSpec &grid,
                     const std::vector<double> &measure,
                     bool radial_x = false);
double psi_at_origin(const Vector &v, const SparseOperator &op);

/// Sign of <v, P_R v>; +1 when the R axis is not symmetric about 0.
int parity_R(const Vector &v, const GridSpec &grid);

StateObservables observe_state(const Vector &v, double energy,
                               const SparseOperator &op);

SpectrumSummary summarize_spectrum(const std::vector<StateObservables> &obs,
                                   const PhysicalSystem &sys,
                                   const AnalysisOptions &opts = {});

SpectrumSummary classify_spectrum(const EigenSolution &sol,
                                  const SparseOperator &op,
                                  const PhysicalSystem &sys,
                                  const AnalysisOptions &opts = {});

/// First window start s with >= min_count flags in [s, s + window); returns
/// the index of the first flagged state in that window.
std::optional<std::size_t> proliferation_onset(const std::vector<bool> &flags,
                                               std::size_t window,
                                               std::size_t min_count);

/// Reflection permutations of every axis symmetric about zero (R, x, y).
std::vector<std::vector<std::size_t>> symmetry_reflections(const GridSpec &grid);

} // namespace qcs
