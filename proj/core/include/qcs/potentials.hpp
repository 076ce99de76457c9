#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace qcs {

/// Which dimensionless Hamiltonian a potential (and operator) belongs to.
///  planar_2var, cylinder_2var: point = (R, x)
///  cylinder_3var:              point = (R, x, y)
///  prolate_fixed_R:            point = (R, xi, eta)
enum class Form { planar_2var, cylinder_2var, cylinder_3var, prolate_fixed_R };

std::string_view to_string(Form f);
Form form_from_string(std::string_view s);
std::size_t coordinate_count(Form f);

struct PotentialSpec {
  double Z = 1.0;
  Form form = Form::planar_2var;
  /// Replaces 1/sqrt(s) by 1/sqrt(s + eps^2) in every Coulomb term.
  double softening = 0.0;
};

/// Dimensionless potential energy at `point` (coordinate order per Form).
/// The heavy-heavy repulsion uses |R| so the potential is even in R.
double eval_potential(const PotentialSpec &spec, std::span<const double> point);

/// Analytic gradient with respect to each coordinate of `point`.
std::vector<double> eval_gradient(const PotentialSpec &spec,
                                  std::span<const double> point);

} // namespace qcs
