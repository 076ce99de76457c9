#include "qcs/quasistatic.hpp"

#include "qcs/operators.hpp"

#include <cmath>

namespace qcs {
namespace {

std::vector<double> solve_at(double R, double Z, double xi_max, std::size_t n_xi,
                             std::size_t n_eta, std::size_t beta_count,
                             const SolverOptions &solver) {
  const GridSpec g = make_box_grid({{Coord::xi, 1.0, xi_max, n_xi}, {Coord::eta, -1.0, 1.0, n_eta}});
  const ProlatePair p = build_prolate_fixed_R(g, R, Z);
  const EigenSolution sol = solve_lowest_generalized(p.A, p.W, beta_count, solver);
  return {sol.eigenvalues.data(), sol.eigenvalues.data() + sol.eigenvalues.size()};
}

} // namespace

LambdaResult lambda_of_R(double R, double Z, std::size_t beta_count,
                         const QuasistaticOptions &opts) {
  if (!(R > 0.0)) throw InvalidParameter("R must be positive");
  if (beta_count == 0) throw InvalidParameter("beta_count must be positive");
  if (opts.n_xi < 4 || opts.n_eta < 4) throw InvalidParameter("prolate grid too small");
  double xi_max = opts.xi_max > 1.0 ? opts.xi_max : 1.0 + 16.0 / R;
  std::size_t n_xi = opts.n_xi;

  LambdaResult out;
  std::vector<double> prev = solve_at(R, Z, xi_max, n_xi, opts.n_eta, beta_count, opts.solver);
  for (int d = 0; d < opts.max_doublings; ++d) {
    const double next_max = 1.0 + 2.0 * (xi_max - 1.0);
    const std::size_t next_n = 2 * n_xi;
    std::vector<double> cur = solve_at(R, Z, next_max, next_n, opts.n_eta, beta_count, opts.solver);
    const double shift = std::abs(cur[0] - prev[0]) / std::max(std::abs(cur[0]), 1e-300);
    xi_max = next_max;
    n_xi = next_n;
    prev = std::move(cur);
    if (shift < opts.relative_shift) {
      out.lambda = std::move(prev);
      out.xi_max = xi_max;
      out.truncation_shift = shift;
      out.dimension = n_xi * opts.n_eta;
      return out;
    }
  }
  throw ConvergenceError("xi truncation did not converge at R = " + std::to_string(R), {});
}

EffectivePotentialCurve effective_potential_scan(const std::vector<double> &R_values, double Z,
                                                 std::size_t beta_count,
                                                 const QuasistaticOptions &opts) {
  if (R_values.empty()) throw InvalidParameter("empty R list");
  for (std::size_t i = 0; i < R_values.size(); ++i) {
    if (!(R_values[i] > 0.0)) throw InvalidParameter("R values must be positive");
    if (i > 0 && !(R_values[i] > R_values[i - 1])) throw InvalidParameter("R values must ascend");
  }
  EffectivePotentialCurve c;
  c.R_values = R_values;
  for (double R : R_values) {
    LambdaResult r = lambda_of_R(R, Z, beta_count, opts);
    std::vector<double> v(r.lambda.size());
    for (std::size_t b = 0; b < v.size(); ++b) v[b] = 4.0 * r.lambda[b] / R;
    c.lambda.push_back(std::move(r.lambda));
    c.v_eff.push_back(std::move(v));
    c.xi_max.push_back(r.xi_max);
    c.truncation_shift.push_back(r.truncation_shift);
  }
  c.repulsive_at_origin = repulsive_at_origin(c);
  return c;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw InvalidParameter("invalid log grid");
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

bool repulsive_at_origin(const EffectivePotentialCurve &curve) {
  if (curve.R_values.size() < 3) return false;
  const double v0 = curve.v_eff[0][0];
  const double v1 = curve.v_eff[1][0];
  const double v2 = curve.v_eff[2][0];
  return v0 > v1 && v1 > v2;
}

} // namespace qcs
