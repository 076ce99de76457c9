#pragma once

#include "qcs/potentials.hpp"
#include "qcs/sparse_operator.hpp"

#include <complex>
#include <vector>

namespace qcs {

struct PulseSpec {
  double E_field = 1.0; // field amplitude (dimensionless scale)
  double omega = 0.0;   // angular frequency, energy units (hbar = 1)
  double T = 1.0;       // duration

  void validate() const;
};

struct TransitionResult {
  double delta_eps = 0.0;
  double matrix_element = 0.0;
  double prefactor = 0.0; // knob * E_field
  double amplitude = 0.0; // prefactor * |matrix_element| * |time_integral|
  std::complex<double> time_integral{};
};

/// <phi_f | q | phi_i> on the grid measure (stored eigenvectors).
double dipole_matrix_element(const Vector &phi_i, const Vector &phi_f,
                             const SparseOperator &op, Coord q);

/// <phi_f | dV/dq | phi_i> with the analytic potential gradient.
double gradient_matrix_element(const Vector &phi_i, const Vector &phi_f,
                               const SparseOperator &op, const PotentialSpec &spec,
                               Coord q);

/// int_0^T exp(i delta t) t^2 dt.
std::complex<double> time_integral(double delta, double T);

/// First-order amplitude for a transition of energy delta_eps driven by
/// `pulse`; `knob` absorbs the charge and mass bookkeeping.
TransitionResult transition_amplitude(const PulseSpec &pulse, double delta_eps,
                                      double matrix_element, double knob = 1.0);

struct ScanRow {
  double omega = 0.0;
  double T = 0.0;
  double amplitude = 0.0;
  double delta = 0.0;
};

struct ResonanceScan {
  std::vector<ScanRow> rows;               // T-major, omega ascending
  std::vector<double> peak_omega;          // per T
  std::vector<double> peak_amplitude;      // per T
  double T_exponent = 0.0;                 // log-log slope of peak amplitude vs T
  bool spans_resonance = true;
};

ResonanceScan resonance_scan(const std::vector<double> &omegas, const std::vector<double> &Ts,
                             double delta_eps, double matrix_element, double E_field = 1.0,
                             double knob = 1.0);

/// Least-squares slope of log y against log x.
double fit_power_law(const std::vector<double> &x, const std::vector<double> &y);

/// Evenly spaced values, both ends included.
std::vector<double> linspace(double lo, double hi, std::size_t count);

} // namespace qcs
