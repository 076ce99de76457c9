#include "qcs/operators.hpp"

#include "qcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace qcs {

MagneticSpec MagneticSpec::for_system(const PhysicalSystem &sys,
                                      std::array<double, 3> B_tesla) {
  const double f = magnetic_field_factor(sys);
  return MagneticSpec{B_tesla, f * f};
}

namespace {

constexpr double kStencil5[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};

// Odd-reflection ghost for a Dirichlet wall: stored index and sign, or
// nullopt when the ghost coincides with the wall itself (value zero).
std::optional<std::pair<std::ptrdiff_t, double>>
dirichlet_ghost(const Axis &axis, std::ptrdiff_t j) {
  const auto n = static_cast<std::ptrdiff_t>(axis.n);
  if (axis.centering == Centering::cell) {
    if (j < 0) return std::pair{-1 - j, -1.0};
    return std::pair{2 * n - 1 - j, -1.0};
  }
  if (j == -1 || j == n) return std::nullopt;
  if (j < -1) return std::pair{-2 - j, -1.0};
  return std::pair{2 * n - j, -1.0};
}

} // namespace

Matrix second_difference_1d(const Axis &axis, WallClosure closure) {
  const auto n = static_cast<std::ptrdiff_t>(axis.n);
  const double h = axis.spacing();
  const double scale = 1.0 / (12.0 * h * h);
  Matrix K = Matrix::Zero(n, n);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (int o = -2; o <= 2; ++o) {
      const double c = -kStencil5[o + 2] * scale;
      const std::ptrdiff_t j = i + o;
      if (j >= 0 && j < n) {
        K(i, j) += c;
        continue;
      }
      if (closure == WallClosure::truncate) continue;
      // A ghost two cells out can map back beyond the far wall on tiny grids.
      if (auto g = dirichlet_ghost(axis, j); g && g->first >= 0 && g->first < n)
        K(i, g->first) += c * g->second;
    }
  }
  return K;
}

namespace detail {

void require_cell_centered(const Axis &axis) {
  if (axis.centering != Centering::cell)
    throw InvalidParameter("variable-coefficient axis '" +
                           std::string(to_string(axis.name)) +
                           "' must be cell-centered");
}

std::vector<std::pair<std::ptrdiff_t, double>>
face_derivative_row(const Axis &axis, std::size_t face, WallKind lo,
                    WallKind hi) {
  const auto n = static_cast<std::ptrdiff_t>(axis.n);
  const double s = 1.0 / (24.0 * axis.spacing());
  const auto f = static_cast<std::ptrdiff_t>(face);
  const std::ptrdiff_t nodes[4] = {f - 2, f - 1, f, f + 1};
  const double coef[4] = {s, -27.0 * s, 27.0 * s, -s};

  std::map<std::ptrdiff_t, double> row;
  auto add_extrapolated = [&](std::ptrdiff_t depth, bool left, double c) {
    // Cubic extrapolation from the four nearest stored nodes.
    static constexpr double w1[4] = {4.0, -6.0, 4.0, -1.0};
    static constexpr double w2[4] = {10.0, -20.0, 15.0, -4.0};
    const double *w = depth == 1 ? w1 : w2;
    for (int q = 0; q < 4; ++q) row[left ? q : n - 1 - q] += c * w[q];
  };
  for (int q = 0; q < 4; ++q) {
    const std::ptrdiff_t j = nodes[q];
    const double c = coef[q];
    if (j >= 0 && j < n) {
      row[j] += c;
    } else if (j < 0) {
      if (lo == WallKind::natural) add_extrapolated(-j, true, c);
      else row[-1 - j] -= c;
    } else {
      if (hi == WallKind::natural) add_extrapolated(j - n + 1, false, c);
      else row[2 * n - 1 - j] -= c;
    }
  }
  return {row.begin(), row.end()};
}

} // namespace detail

namespace {

// Symmetrized cylindrical radial operator W^{-1/2} K W^{-1/2} with W = |x|,
// plus the |x| measure weights.  x = 0 is a natural (zero-flux) wall; on a
// symmetric axis each half is built separately and the halves decouple.
std::pair<Matrix, std::vector<double>> radial_operator(const Axis &axis) {
  detail::require_cell_centered(axis);
  const auto n = static_cast<Eigen::Index>(axis.n);
  auto absx = [](double x) { return std::abs(x); };
  Matrix K;
  if (axis.min < 0.0 && axis.max > 0.0) {
    if (axis.n % 2 != 0 ||
        std::abs(axis.min + axis.max) > 1e-12 * std::abs(axis.max))
      throw InvalidParameter(
          "symmetric radial axis needs an even point count and min = -max");
    const Axis half{axis.name, 0.0, axis.max, axis.n / 2, Centering::cell};
    const Matrix Kh =
        flux_operator_1d(half, absx, WallKind::natural, WallKind::dirichlet);
    const Eigen::Index m = n / 2;
    K = Matrix::Zero(n, n);
    K.bottomRightCorner(m, m) = Kh;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) K(m - 1 - i, m - 1 - j) = Kh(i, j);
  } else if (axis.min == 0.0) {
    K = flux_operator_1d(axis, absx, WallKind::natural, WallKind::dirichlet);
  } else if (axis.min > 0.0) {
    K = flux_operator_1d(axis, absx, WallKind::dirichlet, WallKind::dirichlet);
  } else {
    throw InvalidParameter("radial axis must extend to positive x");
  }
  std::vector<double> w(axis.n);
  for (std::size_t i = 0; i < axis.n; ++i) w[i] = std::abs(axis.point(i));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (K(i, j) != 0.0)
        K(i, j) /= std::sqrt(w[static_cast<std::size_t>(i)]) *
                   std::sqrt(w[static_cast<std::size_t>(j)]);
  return {K, w};
}

using RowEntries = std::vector<std::vector<std::pair<std::size_t, double>>>;

// Upper-triangle entries (j >= i) per row of a dense 1-D matrix.
RowEntries upper_rows(const Matrix &K, double scale) {
  RowEntries rows(static_cast<std::size_t>(K.rows()));
  for (Eigen::Index i = 0; i < K.rows(); ++i)
    for (Eigen::Index j = i; j < K.cols(); ++j)
      if (K(i, j) != 0.0)
        rows[static_cast<std::size_t>(i)].emplace_back(
            static_cast<std::size_t>(j), scale * K(i, j));
  return rows;
}

// Adds sum_d (I x ... x K_d x ... x I) to `out` (upper triangle only).
void add_kronecker_sum(const GridSpec &grid, const std::vector<RowEntries> &axis_rows,
                       std::vector<SparseOperator::Triplet> &out) {
  const std::size_t N = grid.total_points();
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t d = 0; d < grid.rank(); ++d) {
      const std::size_t i = grid.index_along(k, d);
      const std::size_t stride = grid.stride(d);
      for (const auto &[j, v] : axis_rows[d][i])
        out.push_back({k, k + (j - i) * stride, v});
    }
  }
}

double magnetic_diagonal(const MagneticSpec &m, double mu, double Z, double R,
                         double x) {
  const auto &B = m.B_tesla;
  return m.coupling * (0.25 * x * x * (B[2] * B[2] + B[1] * B[1]) +
                       0.25 * Z * Z * mu * R * R * (B[2] * B[2] + B[0] * B[0]));
}

} // namespace

SparseOperator build_hamiltonian(const GridSpec &grid,
                                 const HamiltonianOptions &opts) {
  if (opts.form == Form::prolate_fixed_R)
    throw InvalidParameter("use build_prolate_fixed_R for the prolate form");
  if (!(opts.mu > 0.0)) throw InvalidParameter("mu must be positive");
  if (!(opts.Z > 0.0)) throw InvalidParameter("Z must be positive");
  if (opts.softening < 0.0) throw InvalidParameter("softening must be >= 0");
  const bool three = opts.form == Form::cylinder_3var;
  if (grid.rank() != (three ? 3u : 2u) || !grid.has_axis(Coord::R) ||
      !grid.has_axis(Coord::x) || (three && !grid.has_axis(Coord::y)))
    throw InvalidParameter("grid axes do not match form " +
                           std::string(to_string(opts.form)));
  const bool cylinder = opts.form != Form::planar_2var;

  const std::size_t dR = grid.axis_index(Coord::R);
  const std::size_t dx = grid.axis_index(Coord::x);
  const std::size_t dy = three ? grid.axis_index(Coord::y) : 0;

  std::vector<RowEntries> rows(grid.rank());
  std::vector<double> radial_w;
  rows[dR] = upper_rows(second_difference_1d(grid.axis(dR), opts.closure),
                        8.0 * opts.mu);
  if (cylinder) {
    auto [Kx, w] = radial_operator(grid.axis(dx));
    rows[dx] = upper_rows(Kx, 1.0);
    radial_w = std::move(w);
  } else {
    rows[dx] = upper_rows(second_difference_1d(grid.axis(dx), opts.closure), 1.0);
  }
  if (three)
    rows[dy] = upper_rows(second_difference_1d(grid.axis(dy), opts.closure), 1.0);

  const std::size_t N = grid.total_points();
  std::vector<SparseOperator::Triplet> upper;
  upper.reserve(N * 8);
  add_kronecker_sum(grid, rows, upper);

  const PotentialSpec pot{opts.Z, opts.form, opts.softening};
  const double vol = grid.cell_volume();
  std::vector<double> measure(N, vol);
  std::vector<double> point(three ? 3 : 2);
  for (std::size_t k = 0; k < N; ++k) {
    const auto c = grid.coordinates(k);
    point[0] = c[dR];
    point[1] = c[dx];
    if (three) point[2] = c[dy];
    double diag = 0.0;
    if (opts.include_potential) diag += eval_potential(pot, point);
    if (opts.magnetic)
      diag += magnetic_diagonal(*opts.magnetic, opts.mu, opts.Z, c[dR], c[dx]);
    if (diag != 0.0) upper.push_back({k, k, diag});
    if (cylinder) measure[k] *= radial_w[grid.index_along(k, dx)];
  }

  OperatorMetadata meta;
  meta.form = std::string(to_string(opts.form));
  meta.mu = opts.mu;
  meta.Z = opts.Z;
  meta.softening = opts.softening;
  if (opts.magnetic) {
    meta.B_tesla = opts.magnetic->B_tesla;
    meta.magnetic_coupling = opts.magnetic->coupling;
  }
  if (opts.mu == 1.0)
    meta.warnings.push_back("mu = 1: equal masses, outside the mu << 1 regime");
  return SparseOperator::from_upper(grid, N, std::move(upper),
                                    std::move(measure), std::move(meta));
}

SparseOperator build_laplacian_1d(const Axis &axis, double coefficient,
                                  WallClosure closure) {
  GridSpec grid({axis});
  const Matrix K = second_difference_1d(axis, closure);
  std::vector<SparseOperator::Triplet> upper;
  for (Eigen::Index i = 0; i < K.rows(); ++i)
    for (Eigen::Index j = i; j < K.cols(); ++j)
      if (K(i, j) != 0.0)
        upper.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                         coefficient * K(i, j)});
  OperatorMetadata meta;
  meta.form = "laplacian_1d";
  return SparseOperator::from_upper(grid, axis.n, std::move(upper),
                                    std::vector<double>(axis.n, axis.spacing()),
                                    std::move(meta));
}

ProlatePair build_prolate_fixed_R(const GridSpec &grid, double R, double Z,
                                  int alpha) {
  if (alpha != 0)
    throw InvalidParameter("only the alpha = 0 sector is implemented");
  if (!(R > 0.0)) throw InvalidParameter("R must be positive");
  if (grid.rank() != 2 || !grid.has_axis(Coord::xi) || !grid.has_axis(Coord::eta))
    throw InvalidParameter("prolate grid needs exactly the axes xi and eta");
  const std::size_t dxi = grid.axis_index(Coord::xi);
  const std::size_t deta = grid.axis_index(Coord::eta);
  const Axis &ax = grid.axis(dxi);
  const Axis &ae = grid.axis(deta);
  if (ax.min < 1.0 || ax.point(0) <= 1.0)
    throw InvalidParameter("xi grid must lie strictly above xi = 1");
  if (ae.min < -1.0 || ae.max > 1.0 || ae.point(0) <= -1.0 ||
      ae.point(ae.n - 1) >= 1.0)
    throw InvalidParameter("eta grid must lie strictly inside (-1, 1)");

  const WallKind xi_lo = ax.min == 1.0 ? WallKind::natural : WallKind::dirichlet;
  const WallKind eta_lo = ae.min == -1.0 ? WallKind::natural : WallKind::dirichlet;
  const WallKind eta_hi = ae.max == 1.0 ? WallKind::natural : WallKind::dirichlet;
  const Matrix Kxi = flux_operator_1d(
      ax, [](double s) { return s * s - 1.0; }, xi_lo, WallKind::dirichlet);
  const Matrix Keta = flux_operator_1d(
      ae, [](double s) { return 1.0 - s * s; }, eta_lo, eta_hi);

  const double area = grid.cell_volume();
  std::vector<RowEntries> rows(2);
  rows[dxi] = upper_rows(Kxi, area / R);
  rows[deta] = upper_rows(Keta, area / R);

  const std::size_t N = grid.total_points();
  std::vector<SparseOperator::Triplet> a_upper, w_upper;
  a_upper.reserve(N * 8);
  add_kronecker_sum(grid, rows, a_upper);
  std::vector<double> weight(N);
  for (std::size_t k = 0; k < N; ++k) {
    const auto c = grid.coordinates(k);
    const double xi = c[dxi], eta = c[deta];
    const double q = xi * xi - eta * eta;
    a_upper.push_back({k, k, area * 0.25 * (Z * q - 4.0 * xi)});
    weight[k] = area * q;
    w_upper.push_back({k, k, weight[k]});
  }

  OperatorMetadata meta;
  meta.form = std::string(to_string(Form::prolate_fixed_R));
  meta.Z = Z;
  meta.R_fixed = R;
  auto A = SparseOperator::from_upper(grid, N, std::move(a_upper), weight, meta);
  auto W = SparseOperator::from_upper(grid, N, std::move(w_upper), weight, meta);
  return {std::move(A), std::move(W)};
}

std::vector<std::size_t> reflection_permutation(const GridSpec &grid, Coord c) {
  const std::size_t d = grid.axis_index(c);
  const Axis &a = grid.axis(d);
  if (std::abs(a.min + a.max) > 1e-12 * std::max(std::abs(a.min), std::abs(a.max)))
    throw InvalidParameter("reflection needs an axis symmetric about zero");
  std::vector<std::size_t> p(grid.total_points());
  const std::size_t stride = grid.stride(d);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const std::size_t i = grid.index_along(k, d);
    const std::size_t m = mirror_index(a, i);
    p[k] = k - i * stride + m * stride;
  }
  return p;
}

double commutator_max(const SparseOperator &op,
                      const std::vector<std::size_t> &perm) {
  const auto &m = op.matrix();
  double worst = 0.0;
  for (std::int64_t r = 0; r < m.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(m, r); it; ++it) {
      const auto pr = static_cast<std::int64_t>(perm[static_cast<std::size_t>(r)]);
      const auto pc = static_cast<std::int64_t>(perm[static_cast<std::size_t>(it.col())]);
      worst = std::max(worst, std::abs(it.value() - m.coeff(pr, pc)));
    }
  return worst;
}

} // namespace qcs
