#pragma once

#include "qcs/pipeline.hpp"
#include "qcs/run_config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcs {

struct SweepPlan {
  RunConfig base;
  SweepAxis axis = SweepAxis::mu;
  std::vector<double> values;

  static SweepPlan from_config(const RunConfig &cfg);
  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error; // set when the row failed
  std::size_t dimension = 0;
  std::size_t states = 0;
  std::string grid_hash;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  double ground_energy = 0.0;
  double binding_ev = 0.0;
  std::optional<std::size_t> first_qc_index;
  std::optional<double> first_qc_ev;
  std::optional<double> proliferation_ev;
  bool ground_is_qc = false;
  /// QC states within `window` indices below the first one (excluding it).
  std::size_t qc_below_first = 0;
};

struct SweepIndicators {
  bool first_qc_index_strictly_decreasing = false;
  bool first_qc_ev_nondecreasing = false;
  double ground_energy_spread = 0.0; // (max - min) / |mean| over ok rows
};

struct SweepResult {
  std::vector<SweepRow> rows;
  SweepIndicators indicators;
};

/// Base configuration with the sweep value applied.
///  mu:             system mu
///  box_half_width: every axis rescaled to [-w, w] (radial axes to [0, w]),
///                  spacing kept fixed
///  basis_size:     points per axis = round(N^(1/rank)), box fixed
RunConfig configure_row(const RunConfig &base, SweepAxis axis, double value);

/// Rows are independent: a failing row is recorded and the sweep continues.
SweepResult run_sweep(const SweepPlan &plan);

SweepRow summarize_row(double value, const SolveOutcome &o, const AnalysisOptions &opts);
SweepIndicators sweep_indicators(const std::vector<SweepRow> &rows);

} // namespace qcs
