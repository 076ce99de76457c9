#pragma once

#include "qcs/grid.hpp"
#include "qcs/sparse_operator.hpp"

#include <vector>

namespace qcs {

/// Block-diagonalization of an operator that commutes with reflections of
/// some of its axes.  Each sector is labelled by one character (+1 / -1) per
/// reflection; sector basis vectors are normalized orbit sums, so sector
/// eigenvectors expand to unit-norm full-grid eigenvectors.
class SymmetryReduction {
public:
  SymmetryReduction() = default;
  /// Throws InvalidParameter if an axis is absent or not symmetric about 0,
  /// or if the operator does not commute with a reflection to 1e-12.
  SymmetryReduction(const SparseOperator &op, const std::vector<Coord> &axes);

  std::size_t sector_count() const { return sectors_.size(); }
  const SparseOperator &sector(std::size_t s) const { return sectors_.at(s).op; }
  const std::vector<int> &characters(std::size_t s) const { return sectors_.at(s).chi; }
  const std::vector<Coord> &axes() const { return axes_; }
  const std::vector<std::vector<std::size_t>> &reflections() const { return perms_; }

  /// Full-grid vector of a sector vector.
  Vector expand(std::size_t s, const Eigen::Ref<const Vector> &u) const;
  Matrix expand_columns(std::size_t s, const Matrix &U) const;
  /// Sector coordinates of a full-grid vector (orthogonal projection).
  Vector restrict(std::size_t s, const Vector &v) const;

  std::size_t full_dimension() const { return n_; }

private:
  struct Sector {
    std::vector<int> chi;
    SparseOperator op;
    std::vector<std::size_t> orbit; // orbit carrying each basis vector
    std::vector<double> scale;      // 1 / sqrt(|orbit|)
  };
  // For every full index: its orbit representative and the group element
  // (bit mask over reflections) mapping the representative onto it.
  std::vector<std::size_t> orbit_of_;
  std::vector<unsigned> element_of_;
  std::vector<std::vector<std::size_t>> orbit_;
  std::vector<std::vector<std::size_t>> perms_;
  std::vector<Coord> axes_;
  std::vector<Sector> sectors_;
  std::size_t n_ = 0;

  int character(const Sector &s, unsigned element) const;
};

/// Axes of `grid` among R, x, y that are symmetric about zero.
std::vector<Coord> symmetric_axes(const GridSpec &grid);

} // namespace qcs
