#include "qcs/sparse_operator.hpp"

#include "qcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace qcs {

SparseOperator::SparseOperator(GridSpec grid, CsrMatrix matrix,
                               std::vector<double> measure,
                               OperatorMetadata meta)
    : grid_(std::move(grid)), m_(std::move(matrix)),
      measure_(std::move(measure)), meta_(std::move(meta)) {
  if (m_.rows() != m_.cols())
    throw InvalidParameter("operator matrix must be square");
  if (measure_.size() != static_cast<std::size_t>(m_.rows()))
    throw InvalidParameter("measure length must equal the operator dimension");
  m_.makeCompressed();
}

SparseOperator SparseOperator::from_upper(GridSpec grid, std::size_t n,
                                          std::vector<Triplet> upper,
                                          std::vector<double> measure,
                                          OperatorMetadata meta) {
  // Sum duplicates in a fixed order so the result does not depend on the
  // order in which contributions were pushed.
  std::sort(upper.begin(), upper.end(), [](const Triplet &a, const Triplet &b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Eigen::Triplet<double, std::int64_t>> full;
  full.reserve(2 * upper.size());
  for (std::size_t k = 0; k < upper.size();) {
    const auto r = upper[k].row, c = upper[k].col;
    if (r > c || c >= n) throw InvalidParameter("triplet outside upper triangle");
    double v = 0.0;
    for (; k < upper.size() && upper[k].row == r && upper[k].col == c; ++k)
      v += upper[k].value;
    if (v == 0.0) continue;
    const auto ri = static_cast<std::int64_t>(r), ci = static_cast<std::int64_t>(c);
    full.emplace_back(ri, ci, v);
    if (r != c) full.emplace_back(ci, ri, v);
  }
  CsrMatrix m(static_cast<std::int64_t>(n), static_cast<std::int64_t>(n));
  m.setFromTriplets(full.begin(), full.end());
  return SparseOperator(std::move(grid), std::move(m), std::move(measure),
                        std::move(meta));
}

bool SparseOperator::is_diagonal() const {
  for (std::int64_t r = 0; r < m_.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(m_, r); it; ++it)
      if (it.col() != r && it.value() != 0.0) return false;
  return true;
}

void SparseOperator::apply(const double *v, double *y) const {
  const auto *outer = m_.outerIndexPtr();
  const auto *inner = m_.innerIndexPtr();
  const auto *val = m_.valuePtr();
  for (std::int64_t r = 0; r < m_.rows(); ++r) {
    double s = 0.0;
    for (auto k = outer[r]; k < outer[r + 1]; ++k) s += val[k] * v[inner[k]];
    y[r] = s;
  }
}

Vector SparseOperator::apply(const Vector &v) const {
  if (static_cast<std::size_t>(v.size()) != dimension())
    throw InvalidParameter("vector length does not match operator dimension");
  Vector y(v.size());
  apply(v.data(), y.data());
  return y;
}

std::pair<double, double> SparseOperator::gershgorin() const {
  double lo = INFINITY, hi = -INFINITY;
  for (std::int64_t r = 0; r < m_.outerSize(); ++r) {
    double d = 0.0, off = 0.0;
    for (CsrMatrix::InnerIterator it(m_, r); it; ++it) {
      if (it.col() == r) d = it.value();
      else off += std::abs(it.value());
    }
    lo = std::min(lo, d - off);
    hi = std::max(hi, d + off);
  }
  return {lo, hi};
}

Vector apply(const SparseOperator &op, const Vector &v) { return op.apply(v); }

void write_triplets(std::ostream &os, const SparseOperator &op) {
  const auto &m = op.matrix();
  std::size_t upper = 0;
  for (std::int64_t r = 0; r < m.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(m, r); it; ++it)
      if (it.col() >= r) ++upper;
  const auto &md = op.metadata();
  os << "# qcs-operator-triplets v1\n";
  os << "dimension " << op.dimension() << "\n";
  os << "nnz_upper " << upper << "\n";
  os << "form " << md.form << "\n";
  os << std::setprecision(17);
  os << "mu " << md.mu << "\nZ " << md.Z << "\nsoftening " << md.softening
     << "\nB " << md.B_tesla[0] << ' ' << md.B_tesla[1] << ' ' << md.B_tesla[2]
     << "\ngrid_hash " << op.grid().hash() << "\n";
  os << "# row col value\n";
  os << std::scientific << std::setprecision(16);
  for (std::int64_t r = 0; r < m.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(m, r); it; ++it)
      if (it.col() >= r) os << r << ' ' << it.col() << ' ' << it.value() << '\n';
}

} // namespace qcs
