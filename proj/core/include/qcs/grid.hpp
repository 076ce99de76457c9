#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace qcs {

/// Dimensionless coordinate carried by a grid axis.
enum class Coord { R, x, y, xi, eta };

std::string_view to_string(Coord c);
Coord coord_from_string(std::string_view s);

enum class Centering { cell, node };

/// A uniform axis with Dirichlet (or natural) walls at min and max.  Walls are
/// never stored: cell-centered points sit at min + (i + 1/2) h with
/// h = (max - min) / n, node-centered points at min + (i + 1) h with
/// h = (max - min) / (n + 1).
struct Axis {
  Coord name = Coord::x;
  double min = 0.0;
  double max = 1.0;
  std::size_t n = 4;
  Centering centering = Centering::cell;

  double spacing() const;
  double point(std::size_t i) const;
  std::vector<double> points() const;
};

/// Two-point linear interpolation stencil along one axis.  An index of -1
/// stands for a wall, where the wavefunction vanishes.
struct PlaneBracket {
  std::array<std::ptrdiff_t, 2> index{};
  std::array<double, 2> weight{};
};

class GridSpec {
public:
  GridSpec() = default;
  explicit GridSpec(std::vector<Axis> axes);

  const std::vector<Axis> &axes() const { return axes_; }
  std::size_t rank() const { return axes_.size(); }
  std::size_t total_points() const { return total_; }
  const Axis &axis(std::size_t d) const { return axes_.at(d); }

  /// Position of the named axis; throws InvalidParameter if absent.
  std::size_t axis_index(Coord c) const;
  bool has_axis(Coord c) const;

  /// Row-major: the last axis varies fastest.
  std::size_t stride(std::size_t d) const { return strides_[d]; }
  std::size_t linear(const std::vector<std::size_t> &multi) const;
  std::vector<std::size_t> multi(std::size_t linear) const;
  std::size_t index_along(std::size_t linear, std::size_t d) const {
    return (linear / strides_[d]) % axes_[d].n;
  }

  /// Coordinates of a stored point, one entry per axis.
  std::vector<double> coordinates(std::size_t linear) const;

  /// Product of the axis spacings: the trapezoidal cell volume.
  double cell_volume() const;

  /// Stable 64-bit FNV-1a hash of the axis definitions.
  std::string hash() const;

private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

struct AxisRequest {
  Coord name;
  double min;
  double max;
  std::size_t n;
  Centering centering = Centering::cell;
};

/// Validates bounds (min < max, n >= 4) and name uniqueness.
GridSpec make_box_grid(std::initializer_list<AxisRequest> axes);
GridSpec make_box_grid(const std::vector<AxisRequest> &axes);

/// The two stored points (or wall) bracketing `value` along `axis`, with
/// linear-interpolation weights summing to one.  A value coinciding with a
/// stored point returns that index with weight 1.
PlaneBracket nearest_plane_indices(const GridSpec &grid, Coord axis,
                                   double value);

/// Index of the stored point mirrored through the centre of the axis.
inline std::size_t mirror_index(const Axis &a, std::size_t i) {
  return a.n - 1 - i;
}

} // namespace qcs
