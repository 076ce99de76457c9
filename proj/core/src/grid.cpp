#include "qcs/grid.hpp"

#include "qcs/errors.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace qcs {

std::string_view to_string(Coord c) {
  switch (c) {
  case Coord::R: return "R";
  case Coord::x: return "x";
  case Coord::y: return "y";
  case Coord::xi: return "xi";
  case Coord::eta: return "eta";
  }
  return "?";
}

Coord coord_from_string(std::string_view s) {
  if (s == "R") return Coord::R;
  if (s == "x") return Coord::x;
  if (s == "y") return Coord::y;
  if (s == "xi") return Coord::xi;
  if (s == "eta") return Coord::eta;
  throw InvalidParameter("unknown coordinate name '" + std::string(s) + "'");
}

double Axis::spacing() const {
  const double span = max - min;
  return centering == Centering::cell ? span / static_cast<double>(n)
                                      : span / static_cast<double>(n + 1);
}

double Axis::point(std::size_t i) const {
  const double h = spacing();
  const double offset = centering == Centering::cell
                            ? static_cast<double>(i) + 0.5
                            : static_cast<double>(i) + 1.0;
  return min + offset * h;
}

std::vector<double> Axis::points() const {
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = point(i);
  return p;
}

GridSpec::GridSpec(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw InvalidParameter("grid needs at least one axis");
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const Axis &a = axes_[d];
    if (!(a.min < a.max))
      throw InvalidParameter("axis '" + std::string(to_string(a.name)) +
                             "': min must be < max");
    if (a.n < 4)
      throw InvalidParameter("axis '" + std::string(to_string(a.name)) +
                             "': need at least 4 points");
    for (std::size_t e = 0; e < d; ++e)
      if (axes_[e].name == a.name)
        throw InvalidParameter("duplicate axis name '" +
                               std::string(to_string(a.name)) + "'");
  }
  strides_.assign(axes_.size(), 1);
  for (std::size_t d = axes_.size() - 1; d > 0; --d)
    strides_[d - 1] = strides_[d] * axes_[d].n;
  total_ = strides_[0] * axes_[0].n;
}

std::size_t GridSpec::axis_index(Coord c) const {
  for (std::size_t d = 0; d < axes_.size(); ++d)
    if (axes_[d].name == c) return d;
  throw InvalidParameter("grid has no axis '" + std::string(to_string(c)) +
                         "'");
}

bool GridSpec::has_axis(Coord c) const {
  for (const auto &a : axes_)
    if (a.name == c) return true;
  return false;
}

std::size_t GridSpec::linear(const std::vector<std::size_t> &m) const {
  std::size_t k = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) k += m[d] * strides_[d];
  return k;
}

std::vector<std::size_t> GridSpec::multi(std::size_t k) const {
  std::vector<std::size_t> m(axes_.size());
  for (std::size_t d = 0; d < axes_.size(); ++d) m[d] = index_along(k, d);
  return m;
}

std::vector<double> GridSpec::coordinates(std::size_t k) const {
  std::vector<double> c(axes_.size());
  for (std::size_t d = 0; d < axes_.size(); ++d)
    c[d] = axes_[d].point(index_along(k, d));
  return c;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (const auto &a : axes_) v *= a.spacing();
  return v;
}

std::string GridSpec::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void *p, std::size_t len) {
    const auto *b = static_cast<const unsigned char *>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto &a : axes_) {
    const auto name = static_cast<int>(a.name);
    const auto cent = static_cast<int>(a.centering);
    const std::uint64_t n = a.n;
    mix(&name, sizeof name);
    mix(&a.min, sizeof a.min);
    mix(&a.max, sizeof a.max);
    mix(&n, sizeof n);
    mix(&cent, sizeof cent);
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

GridSpec make_box_grid(const std::vector<AxisRequest> &req) {
  std::vector<Axis> axes;
  axes.reserve(req.size());
  for (const auto &r : req)
    axes.push_back(Axis{r.name, r.min, r.max, r.n, r.centering});
  return GridSpec(std::move(axes));
}

GridSpec make_box_grid(std::initializer_list<AxisRequest> req) {
  return make_box_grid(std::vector<AxisRequest>(req));
}

PlaneBracket nearest_plane_indices(const GridSpec &grid, Coord c,
                                   double value) {
  const Axis &a = grid.axis(grid.axis_index(c));
  if (value < a.min || value > a.max)
    throw InvalidParameter("value outside axis bounds");

  const double h = a.spacing();
  const double first = a.point(0);
  // Position in units of h relative to the first stored point; -1 and n are walls.
  const double s = (value - first) / h;
  const double tol = 1e-12 * std::max(1.0, std::abs(s));
  const double nearest = std::round(s);
  PlaneBracket b;
  if (std::abs(s - nearest) <= tol && nearest >= 0.0 &&
      nearest <= static_cast<double>(a.n - 1)) {
    b.index = {static_cast<std::ptrdiff_t>(nearest),
               static_cast<std::ptrdiff_t>(nearest)};
    b.weight = {1.0, 0.0};
    return b;
  }
  auto lo = static_cast<std::ptrdiff_t>(std::floor(s));
  const double t = s - static_cast<double>(lo);
  const auto last = static_cast<std::ptrdiff_t>(a.n) - 1;
  const std::ptrdiff_t hi = lo + 1;
  b.index = {lo < 0 ? -1 : lo, hi > last ? -1 : hi};
  // Cell-centered walls sit half a spacing outside the outer points.
  double w_hi = t;
  if (a.centering == Centering::cell) {
    if (lo < 0) w_hi = (value - a.min) / (first - a.min);
    if (hi > last) w_hi = (value - a.point(a.n - 1)) / (a.max - a.point(a.n - 1));
  }
  b.weight = {1.0 - w_hi, w_hi};
  return b;
}

} // namespace qcs
