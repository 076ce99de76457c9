#pragma once

#include "qcs/analysis.hpp"
#include "qcs/run_config.hpp"

#include <string>
#include <vector>

namespace qcs {

/// Everything a solve run produces, independent of how it is written out.
struct SolveOutcome {
  PhysicalSystem system;
  std::string grid_hash;
  std::size_t dimension = 0;
  SpectrumSummary summary;
  Vector residuals;
  SolverStats stats;
  bool used_symmetry = false;
  std::size_t sectors = 1;
  bool complete = true; // false when the solver gave up part way
  std::string failure;
  std::vector<std::string> discrepancies;
  std::vector<std::string> warnings;
  /// Leading physical wavefunctions (similarity transform undone), one per column.
  Matrix vectors;
};

SparseOperator build_operator(const RunConfig &cfg);

/// Solve, observe and classify the k lowest states of the configured system.
/// Convergence failures are reported through `complete`, not thrown.
SolveOutcome run_solve(const RunConfig &cfg);

/// Reference comparison; one human-readable line per miss.
std::vector<std::string> compare_to_reference(const SpectrumSummary &s,
                                              const ReferenceValues &ref);

} // namespace qcs
