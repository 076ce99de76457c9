#include "qcs/symmetry.hpp"

#include "qcs/errors.hpp"
#include "qcs/operators.hpp"

#include <cmath>
#include <string>

namespace qcs {

std::vector<Coord> symmetric_axes(const GridSpec &grid) {
  std::vector<Coord> out;
  for (Coord c : {Coord::R, Coord::x, Coord::y}) {
    if (!grid.has_axis(c)) continue;
    const Axis &a = grid.axis(grid.axis_index(c));
    if (std::abs(a.min + a.max) <= 1e-12 * (a.max - a.min)) out.push_back(c);
  }
  return out;
}

SymmetryReduction::SymmetryReduction(const SparseOperator &op, const std::vector<Coord> &axes)
    : axes_(axes), n_(op.dimension()) {
  if (axes.size() > 8) throw InvalidParameter("too many reflections");
  const double scale = std::max(1.0, op.matrix().coeffs().cwiseAbs().maxCoeff());
  for (Coord c : axes) {
    perms_.push_back(reflection_permutation(op.grid(), c));
    if (commutator_max(op, perms_.back()) > 1e-12 * scale)
      throw InvalidParameter("operator does not commute with the reflection of " +
                             std::string(to_string(c)));
  }
  const std::size_t r = perms_.size();
  const unsigned group = 1U << r;
  auto act = [&](unsigned g, std::size_t i) {
    for (std::size_t b = 0; b < r; ++b)
      if (g & (1U << b)) i = perms_[b][i];
    return i;
  };

  // Orbits are discovered in index order; the first member is the representative.
  const std::size_t none = static_cast<std::size_t>(-1);
  orbit_of_.assign(n_, none);
  element_of_.assign(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (orbit_of_[i] != none) continue;
    const std::size_t id = orbit_.size();
    std::vector<std::size_t> members;
    for (unsigned g = 0; g < group; ++g) {
      const std::size_t j = act(g, i);
      if (orbit_of_[j] == none) {
        orbit_of_[j] = id;
        element_of_[j] = g;
        members.push_back(j);
      }
    }
    orbit_.push_back(std::move(members));
  }

  const auto &M = op.matrix();
  for (unsigned mask = 0; mask < group; ++mask) {
    Sector s;
    for (std::size_t b = 0; b < r; ++b) s.chi.push_back((mask & (1U << b)) ? -1 : 1);
    // An orbit carries a basis vector unless the character is odd on its stabilizer.
    std::vector<std::ptrdiff_t> local(orbit_.size(), -1);
    for (std::size_t o = 0; o < orbit_.size(); ++o) {
      const std::size_t p = orbit_[o].front();
      bool ok = true;
      for (unsigned g = 1; g < group && ok; ++g)
        if (act(g, p) == p && character(s, g) < 0) ok = false;
      if (!ok) continue;
      local[o] = static_cast<std::ptrdiff_t>(s.orbit.size());
      s.orbit.push_back(o);
      s.scale.push_back(1.0 / std::sqrt(static_cast<double>(orbit_[o].size())));
    }
    const std::size_t m = s.orbit.size();
    if (m == 0) continue;

    // <b_a|H|b_c> = sqrt(|O_a| / |O_c|) sum_{q in O_c} chi(g_q) H(p_a, q)
    std::vector<SparseOperator::Triplet> upper;
    std::vector<double> measure(m);
    for (std::size_t a = 0; a < m; ++a) {
      const std::size_t p = orbit_[s.orbit[a]].front();
      measure[a] = op.measure()[p];
      const double size_a = static_cast<double>(orbit_[s.orbit[a]].size());
      for (CsrMatrix::InnerIterator it(M, static_cast<Eigen::Index>(p)); it; ++it) {
        const auto j = static_cast<std::size_t>(it.col());
        const std::ptrdiff_t c = local[orbit_of_[j]];
        if (c < static_cast<std::ptrdiff_t>(a)) continue;
        const double size_c = static_cast<double>(orbit_[orbit_of_[j]].size());
        const double w = std::sqrt(size_a / size_c) * character(s, element_of_[j]);
        upper.push_back({a, static_cast<std::size_t>(c), w * it.value()});
      }
    }
    s.op = SparseOperator::from_upper(op.grid(), m, std::move(upper), std::move(measure), op.metadata());
    sectors_.push_back(std::move(s));
  }
}

int SymmetryReduction::character(const Sector &s, unsigned element) const {
  int c = 1;
  for (std::size_t b = 0; b < s.chi.size(); ++b)
    if (element & (1U << b)) c *= s.chi[b];
  return c;
}

Vector SymmetryReduction::expand(std::size_t si, const Eigen::Ref<const Vector> &u) const {
  const Sector &s = sectors_.at(si);
  if (static_cast<std::size_t>(u.size()) != s.orbit.size())
    throw InvalidParameter("sector vector length mismatch");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(n_));
  for (std::size_t a = 0; a < s.orbit.size(); ++a) {
    const double val = u[static_cast<Eigen::Index>(a)] * s.scale[a];
    for (std::size_t j : orbit_[s.orbit[a]])
      v[static_cast<Eigen::Index>(j)] = character(s, element_of_[j]) * val;
  }
  return v;
}

Matrix SymmetryReduction::expand_columns(std::size_t s, const Matrix &U) const {
  Matrix V(static_cast<Eigen::Index>(n_), U.cols());
  for (Eigen::Index c = 0; c < U.cols(); ++c) V.col(c) = expand(s, U.col(c));
  return V;
}

Vector SymmetryReduction::restrict(std::size_t si, const Vector &v) const {
  const Sector &s = sectors_.at(si);
  if (static_cast<std::size_t>(v.size()) != n_) throw InvalidParameter("full vector length mismatch");
  Vector u(static_cast<Eigen::Index>(s.orbit.size()));
  for (std::size_t a = 0; a < s.orbit.size(); ++a) {
    double acc = 0.0;
    for (std::size_t j : orbit_[s.orbit[a]])
      acc += character(s, element_of_[j]) * v[static_cast<Eigen::Index>(j)];
    u[static_cast<Eigen::Index>(a)] = acc * s.scale[a];
  }
  return u;
}

} // namespace qcs
