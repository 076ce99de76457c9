#include "qcs/units.hpp"

#include "qcs/errors.hpp"

#include <cmath>

namespace qcs {

PhysicalSystem derive_system(double light_mass, double heavy_mass, double Z) {
  if (!(light_mass > 0.0) || !(heavy_mass > 0.0))
    throw InvalidParameter("particle masses must be positive");
  if (!(Z >= 1.0))
    throw InvalidParameter("charge number Z must be >= 1");
  if (light_mass > heavy_mass)
    throw InvalidParameter("light mass exceeds heavy mass (mu must be <= 1)");

  using namespace codata;
  PhysicalSystem s;
  s.light_mass = light_mass;
  s.heavy_mass = heavy_mass;
  s.charge_number = Z;
  s.G_squared = light_mass * Z * elementary_charge * elementary_charge /
                (2.0 * hbar * hbar * pi * vacuum_permittivity);
  s.mu = light_mass / heavy_mass;
  s.length_scale = 1.0 / s.G_squared;
  s.energy_scale = hbar * hbar * s.G_squared * s.G_squared / (2.0 * light_mass);
  s.energy_scale_ev = s.energy_scale / elementary_charge;
  return s;
}

PhysicalSystem deuteron_system() {
  return derive_system(codata::electron_mass, codata::deuteron_mass, 1.0);
}

double to_ev(double e_dimensionless, const PhysicalSystem &sys) {
  return e_dimensionless * sys.energy_scale_ev;
}

double from_ev(double e_ev, const PhysicalSystem &sys) {
  return e_ev / sys.energy_scale_ev;
}

double to_angstrom(double x_dimensionless, const PhysicalSystem &sys) {
  return x_dimensionless * sys.length_scale * 1e10;
}

double from_angstrom(double x_angstrom, const PhysicalSystem &sys) {
  return x_angstrom * 1e-10 / sys.length_scale;
}

double magnetic_field_factor(const PhysicalSystem &sys) {
  return codata::elementary_charge /
         (codata::hbar * sys.G_squared * sys.G_squared);
}

} // namespace qcs
