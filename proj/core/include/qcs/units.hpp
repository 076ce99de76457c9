#pragma once

// Physical constants (CODATA 2018) and the conversion between the
// dimensionless variables used by every solver and SI / eV / Angstrom.
//
// Lengths are measured in units of 1/G^2 with G^2 = m Z e^2 / (2 hbar^2 pi eps0),
// energies in units of hbar^2 G^4 / (2 m), m being the light-particle mass.

namespace qcs {

namespace codata {
inline constexpr double elementary_charge = 1.602176634e-19;   // C (exact)
inline constexpr double hbar = 1.054571817e-34;                // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double electron_mass = 9.1093837015e-31;       // kg
inline constexpr double deuteron_mass = 3.3435837724e-27;       // kg
inline constexpr double bohr_radius = 5.29177210903e-11;        // m
inline constexpr double hartree_ev = 27.211386245988;           // eV
inline constexpr double pi = 3.14159265358979323846;
} // namespace codata

struct PhysicalSystem {
  double light_mass = 0.0;    // kg
  double heavy_mass = 0.0;    // kg
  double charge_number = 1.0; // Z of each heavy particle
  double G_squared = 0.0;     // 1/m
  double mu = 0.0;            // light_mass / heavy_mass
  double length_scale = 0.0;  // m per dimensionless length unit
  double energy_scale = 0.0;  // J per dimensionless energy unit
  double energy_scale_ev = 0.0;
};

/// Derive G^2, mu and the length/energy scales.  Throws InvalidParameter
/// for non-positive masses, Z < 1 or a light particle heavier than the heavy one.
PhysicalSystem derive_system(double light_mass, double heavy_mass, double Z);

/// Electron + two deuterons, Z = 1.
PhysicalSystem deuteron_system();

double to_ev(double e_dimensionless, const PhysicalSystem &sys);
double from_ev(double e_ev, const PhysicalSystem &sys);
double to_angstrom(double x_dimensionless, const PhysicalSystem &sys);
double from_angstrom(double x_angstrom, const PhysicalSystem &sys);

/// e / (hbar G^4): the factor multiplying a physical magnetic field (tesla)
/// in the dimensionless Hamiltonian.
double magnetic_field_factor(const PhysicalSystem &sys);

} // namespace qcs
