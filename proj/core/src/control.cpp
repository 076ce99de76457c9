#include "qcs/control.hpp"

#include "qcs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qcs {
namespace {

void check_pair(const Vector &a, const Vector &b, const SparseOperator &op) {
  if (static_cast<std::size_t>(a.size()) != op.dimension() ||
      static_cast<std::size_t>(b.size()) != op.dimension())
    throw InvalidParameter("state does not belong to this grid");
}

} // namespace

void PulseSpec::validate() const {
  if (!(T > 0.0)) throw InvalidParameter("pulse duration must be positive");
  if (!(E_field >= 0.0)) throw InvalidParameter("field amplitude must be non-negative");
  if (!std::isfinite(omega)) throw InvalidParameter("omega must be finite");
}

double dipole_matrix_element(const Vector &phi_i, const Vector &phi_f, const SparseOperator &op,
                             Coord q) {
  check_pair(phi_i, phi_f, op);
  const GridSpec &g = op.grid();
  const std::size_t d = g.axis_index(q);
  const auto pts = g.axis(d).points();
  double acc = 0.0;
  for (std::size_t k = 0; k < g.total_points(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    acc += phi_f[i] * pts[g.index_along(k, d)] * phi_i[i];
  }
  return acc;
}

double gradient_matrix_element(const Vector &phi_i, const Vector &phi_f, const SparseOperator &op,
                               const PotentialSpec &spec, Coord q) {
  check_pair(phi_i, phi_f, op);
  const GridSpec &g = op.grid();
  const std::size_t d = g.axis_index(q);
  // Potential arguments are ordered (R, x[, y]).
  std::vector<std::size_t> order;
  for (Coord c : {Coord::R, Coord::x, Coord::y})
    if (g.has_axis(c)) order.push_back(g.axis_index(c));
  std::size_t slot = 0;
  while (order[slot] != d) ++slot;
  std::vector<double> point(order.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < g.total_points(); ++k) {
    const auto c = g.coordinates(k);
    for (std::size_t s = 0; s < order.size(); ++s) point[s] = c[order[s]];
    const auto grad = eval_gradient(spec, point);
    const auto i = static_cast<Eigen::Index>(k);
    acc += phi_f[i] * grad[slot] * phi_i[i];
  }
  return acc;
}

std::complex<double> time_integral(double delta, double T) {
  if (!(T > 0.0)) throw InvalidParameter("pulse duration must be positive");
  using namespace std::complex_literals;
  const double x = delta * T;
  if (std::abs(x) < 1.0) {
    // T^3 sum_n (i x)^n / (n! (n + 3)); the closed form cancels badly here.
    std::complex<double> term = 1.0;
    std::complex<double> sum = 0.0;
    for (int n = 0; n < 40; ++n) {
      sum += term / static_cast<double>(n + 3);
      term *= 1i * x / static_cast<double>(n + 1);
    }
    return sum * T * T * T;
  }
  const std::complex<double> e = std::exp(1i * x);
  return (e * (x * x + 2i * x - 2.0) + 2.0) / (1i * delta * delta * delta);
}

TransitionResult transition_amplitude(const PulseSpec &pulse, double delta_eps,
                                      double matrix_element, double knob) {
  pulse.validate();
  TransitionResult r;
  r.delta_eps = delta_eps;
  r.matrix_element = matrix_element;
  r.prefactor = knob * pulse.E_field;
  r.time_integral = time_integral(pulse.omega - delta_eps, pulse.T);
  r.amplitude = std::abs(r.prefactor) * std::abs(matrix_element) * std::abs(r.time_integral);
  return r;
}

ResonanceScan resonance_scan(const std::vector<double> &omegas, const std::vector<double> &Ts,
                             double delta_eps, double matrix_element, double E_field, double knob) {
  if (omegas.empty() || Ts.empty()) throw InvalidParameter("empty scan grid");
  if (!std::is_sorted(omegas.begin(), omegas.end())) throw InvalidParameter("omega grid must ascend");
  ResonanceScan s;
  s.spans_resonance = omegas.front() <= delta_eps && delta_eps <= omegas.back();
  for (double T : Ts) {
    double best = -1.0;
    double best_omega = omegas.front();
    for (double w : omegas) {
      const auto r = transition_amplitude({E_field, w, T}, delta_eps, matrix_element, knob);
      s.rows.push_back({w, T, r.amplitude, w - delta_eps});
      if (r.amplitude > best) {
        best = r.amplitude;
        best_omega = w;
      }
    }
    s.peak_omega.push_back(best_omega);
    s.peak_amplitude.push_back(best);
  }
  if (Ts.size() >= 2) s.T_exponent = fit_power_law(Ts, s.peak_amplitude);
  return s;
}

double fit_power_law(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidParameter("need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidParameter("power-law fit needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw InvalidParameter("linspace needs at least two points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  out.back() = hi;
  return out;
}

} // namespace qcs
