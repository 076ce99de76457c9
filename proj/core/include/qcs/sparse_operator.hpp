#pragma once

#include "qcs/grid.hpp"
#include "qcs/potentials.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace qcs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

/// Builder parameters carried alongside an assembled operator.
struct OperatorMetadata {
  std::string form;
  double mu = 0.0;
  double Z = 0.0;
  double softening = 0.0;
  std::array<double, 3> B_tesla{0.0, 0.0, 0.0};
  double magnetic_coupling = 0.0;
  double R_fixed = 0.0; // prolate only
  std::vector<std::string> warnings;
};

/// Symmetric sparse matrix on a grid.
///
/// Symmetry is exact: assembly only ever accumulates the upper triangle and
/// mirrors it, so entry(i, j) and entry(j, i) are the same double.
///
/// `measure()` maps an eigenvector v with sum v_i^2 = 1 back to the physical
/// wavefunction psi_i = v_i / sqrt(measure_i), normalized so that
/// sum measure_i psi_i^2 = 1.  For Cartesian axes measure_i is the cell volume;
/// the cylindrical radial axis contributes an extra |x_i|.
class SparseOperator {
public:
  SparseOperator() = default;
  SparseOperator(GridSpec grid, CsrMatrix matrix, std::vector<double> measure,
                 OperatorMetadata meta);

  /// Upper-triangle (row <= col) coordinate entries; duplicates are summed.
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };
  static SparseOperator from_upper(GridSpec grid, std::size_t dimension,
                                   std::vector<Triplet> upper,
                                   std::vector<double> measure,
                                   OperatorMetadata meta);

  std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }
  const CsrMatrix &matrix() const { return m_; }
  const GridSpec &grid() const { return grid_; }
  const std::vector<double> &measure() const { return measure_; }
  const OperatorMetadata &metadata() const { return meta_; }

  double entry(std::size_t i, std::size_t j) const { return m_.coeff(i, j); }
  bool is_diagonal() const;
  Vector diagonal() const { return m_.diagonal(); }

  /// y = A v.  Deterministic: rows are reduced in storage order.
  Vector apply(const Vector &v) const;
  void apply(const double *v, double *y) const;

  Matrix to_dense() const { return Matrix(m_); }

  /// Gershgorin bounds [lo, hi] on the spectrum.
  std::pair<double, double> gershgorin() const;

private:
  GridSpec grid_;
  CsrMatrix m_;
  std::vector<double> measure_;
  OperatorMetadata meta_;
};

Vector apply(const SparseOperator &op, const Vector &v);

/// Text triplet dump: a header (dimension, nnz, metadata) followed by one
/// "row col value" line per stored upper-triangle entry.
void write_triplets(std::ostream &os, const SparseOperator &op);

} // namespace qcs
