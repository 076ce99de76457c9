#pragma once

#include "qcs/grid.hpp"
#include "qcs/potentials.hpp"
#include "qcs/sparse_operator.hpp"
#include "qcs/units.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace qcs {

/// How the 5-point second-derivative stencil is closed at a Dirichlet wall.
///  reflect:  odd-reflection ghosts (psi mirrored with a sign flip through the
///            wall); keeps the matrix symmetric and fourth-order accurate.
///  truncate: out-of-range neighbours are simply dropped.
enum class WallClosure { reflect, truncate };

/// Homogeneous diamagnetic term for a static uniform field.
struct MagneticSpec {
  std::array<double, 3> B_tesla{0.0, 0.0, 0.0};
  /// (e / (hbar G^4))^2, i.e. magnetic_field_factor(sys) squared.
  double coupling = 0.0;

  static MagneticSpec for_system(const PhysicalSystem &sys,
                                 std::array<double, 3> B_tesla);
};

struct HamiltonianOptions {
  Form form = Form::planar_2var;
  double mu = 0.0;
  double Z = 1.0;
  double softening = 0.0;
  std::optional<MagneticSpec> magnetic;
  bool include_potential = true;
  WallClosure closure = WallClosure::reflect;
};

/// Dense 1-D matrix approximating -d^2/dx^2 with the (-1, 16, -30, 16, -1)/12h^2
/// stencil and Dirichlet walls.
Matrix second_difference_1d(const Axis &axis, WallClosure closure);

/// What happens to the flux at an end of a variable-coefficient axis.
enum class WallKind { dirichlet, natural };

/// Dense 1-D matrix approximating -(a(x) psi')' in conservative form
/// D^T diag(a(face)) D, with D the fourth-order staggered first derivative.
/// Symmetric positive semidefinite for a >= 0.  Cell-centered axes only.
template <class Coefficient>
Matrix flux_operator_1d(const Axis &axis, Coefficient &&a, WallKind lo,
                        WallKind hi);

/// Assemble the dimensionless Hamiltonian for a planar, cylindrical or
/// three-variable problem.  Axis names select the coordinates; the R axis
/// gets the -8 mu d^2/dR^2 term.
SparseOperator build_hamiltonian(const GridSpec &grid,
                                 const HamiltonianOptions &opts);

/// -c d^2/dx^2 on a single axis, no potential.
SparseOperator build_laplacian_1d(const Axis &axis, double coefficient,
                                  WallClosure closure = WallClosure::reflect);

/// Fixed-R prolate-spheroidal problem A v = lambda W v (alpha = 0), obtained by
/// multiplying the electronic equation through by (xi^2 - eta^2).
struct ProlatePair {
  SparseOperator A;
  SparseOperator W;
};

ProlatePair build_prolate_fixed_R(const GridSpec &grid, double R, double Z,
                                  int alpha = 0);

/// Permutation of linear indices induced by x -> -x along `axis`.
std::vector<std::size_t> reflection_permutation(const GridSpec &grid, Coord axis);

/// max |(H P - P H)_{ij}| for a reflection permutation P.
double commutator_max(const SparseOperator &op,
                      const std::vector<std::size_t> &perm);

// -- implementation of the template ------------------------------------------

namespace detail {
/// Coefficients of the face derivative on stored nodes, after ghost
/// substitution; `face` in [0, n].
std::vector<std::pair<std::ptrdiff_t, double>>
face_derivative_row(const Axis &axis, std::size_t face, WallKind lo,
                    WallKind hi);
void require_cell_centered(const Axis &axis);
} // namespace detail

template <class Coefficient>
Matrix flux_operator_1d(const Axis &axis, Coefficient &&a, WallKind lo,
                        WallKind hi) {
  detail::require_cell_centered(axis);
  const auto n = static_cast<Eigen::Index>(axis.n);
  const double h = axis.spacing();
  Matrix K = Matrix::Zero(n, n);
  for (std::size_t f = 0; f <= axis.n; ++f) {
    double af = a(axis.min + static_cast<double>(f) * h);
    if (af == 0.0) continue;
    // Trapezoid weight on a Dirichlet wall face: with the odd ghost the
    // integrand a u'^2 is even about the wall, so the end correction vanishes.
    if ((f == 0 && lo == WallKind::dirichlet) || (f == axis.n && hi == WallKind::dirichlet))
      af *= 0.5;
    const auto row = detail::face_derivative_row(axis, f, lo, hi);
    for (const auto &[i, ci] : row)
      for (const auto &[j, cj] : row) K(i, j) += af * ci * cj;
  }
  return K;
}

} // namespace qcs
