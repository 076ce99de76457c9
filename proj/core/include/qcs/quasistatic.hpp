#pragma once

#include "qcs/eigensolve.hpp"

#include <vector>

namespace qcs {

struct QuasistaticOptions {
  std::size_t n_xi = 40;
  std::size_t n_eta = 40;
  /// Initial xi_max; 0 picks 1 + 16 / R (about eight length units from the axis).
  double xi_max = 0.0;
  double relative_shift = 1e-3; // stop doubling once the lowest lambda moves less
  int max_doublings = 6;
  SolverOptions solver{};
};

struct LambdaResult {
  std::vector<double> lambda; // ascending in beta
  double xi_max = 0.0;
  double truncation_shift = 0.0; // relative change of the lowest lambda at the last doubling
  std::size_t dimension = 0;
};

/// Lowest `beta_count` fixed-R eigenvalues (alpha = 0) of the prolate
/// spheroidal problem.  xi_max is doubled at constant spacing until the lowest
/// eigenvalue moves by less than opts.relative_shift.
LambdaResult lambda_of_R(double R, double Z, std::size_t beta_count,
                         const QuasistaticOptions &opts = {});

struct EffectivePotentialCurve {
  std::vector<double> R_values;
  std::vector<std::vector<double>> lambda; // [R index][beta]
  std::vector<std::vector<double>> v_eff;  // 4 lambda / R
  std::vector<double> xi_max;
  std::vector<double> truncation_shift;
  bool repulsive_at_origin = false;
};

EffectivePotentialCurve effective_potential_scan(const std::vector<double> &R_values,
                                                 double Z, std::size_t beta_count,
                                                 const QuasistaticOptions &opts = {});

/// Logarithmic R grid, ascending, inclusive of both ends.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// True iff the lowest v_eff strictly increases as R decreases through the
/// three smallest R values.
bool repulsive_at_origin(const EffectivePotentialCurve &curve);

} // namespace qcs
