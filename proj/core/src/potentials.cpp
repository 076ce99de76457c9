#include "qcs/potentials.hpp"

#include "qcs/errors.hpp"

#include <cmath>
#include <string>

namespace qcs {

std::string_view to_string(Form f) {
  switch (f) {
  case Form::planar_2var: return "planar_2var";
  case Form::cylinder_2var: return "cylinder_2var";
  case Form::cylinder_3var: return "cylinder_3var";
  case Form::prolate_fixed_R: return "prolate_fixed_R";
  }
  return "?";
}

Form form_from_string(std::string_view s) {
  if (s == "planar_2var") return Form::planar_2var;
  if (s == "cylinder_2var") return Form::cylinder_2var;
  if (s == "cylinder_3var") return Form::cylinder_3var;
  if (s == "prolate_fixed_R") return Form::prolate_fixed_R;
  throw InvalidParameter("unknown form '" + std::string(s) + "'");
}

std::size_t coordinate_count(Form f) {
  return f == Form::planar_2var || f == Form::cylinder_2var ? 2 : 3;
}

namespace {

void check_arity(const PotentialSpec &spec, std::span<const double> p) {
  if (p.size() != coordinate_count(spec.form))
    throw InvalidParameter("point has wrong number of coordinates for form " +
                           std::string(to_string(spec.form)));
}

// 1/sqrt(s + eps^2), refusing the bare singularity.
double inv_sqrt(double s, double eps2, const char *what) {
  const double d = s + eps2;
  if (d <= 0.0) throw SingularityError(what);
  return 1.0 / std::sqrt(d);
}

} // namespace

double eval_potential(const PotentialSpec &spec, std::span<const double> p) {
  check_arity(spec, p);
  const double e2 = spec.softening * spec.softening;
  const double Z = spec.Z;
  const double R = p[0];
  const double rep = Z * inv_sqrt(R * R, e2, "heavy particles coincide (R = 0)");

  switch (spec.form) {
  case Form::planar_2var:
  case Form::cylinder_2var: {
    const double x = p[1];
    return rep -
           2.0 * inv_sqrt(x * x + 0.25 * R * R, e2,
                          "light particle on the heavy pair (R = x = 0)");
  }
  case Form::cylinder_3var: {
    const double x = p[1], y = p[2];
    const double a = 0.5 * R - y, b = 0.5 * R + y;
    return rep -
           inv_sqrt(x * x + a * a, e2, "light particle on a heavy particle") -
           inv_sqrt(x * x + b * b, e2, "light particle on a heavy particle");
  }
  case Form::prolate_fixed_R: {
    // 1/r_a + 1/r_b = 4 xi / (R (xi^2 - eta^2)); softening is not defined here.
    const double xi = p[1], eta = p[2];
    const double d = R * (xi * xi - eta * eta);
    if (d == 0.0) throw SingularityError("prolate point on a nucleus");
    return rep - 4.0 * xi / d;
  }
  }
  return 0.0;
}

std::vector<double> eval_gradient(const PotentialSpec &spec,
                                  std::span<const double> p) {
  check_arity(spec, p);
  const double e2 = spec.softening * spec.softening;
  const double Z = spec.Z;
  const double R = p[0];
  // d/dR [Z (R^2 + e2)^{-1/2}] = -Z R (R^2 + e2)^{-3/2}
  const double ir = inv_sqrt(R * R, e2, "heavy particles coincide (R = 0)");
  const double drep = -Z * R * ir * ir * ir;

  switch (spec.form) {
  case Form::planar_2var:
  case Form::cylinder_2var: {
    const double x = p[1];
    const double is =
        inv_sqrt(x * x + 0.25 * R * R, e2, "light particle on the heavy pair");
    const double is3 = is * is * is;
    // V = rep - 2 s^{-1/2},  dV/dq = s^{-3/2} ds/dq
    return {drep + is3 * 0.5 * R, 2.0 * x * is3};
  }
  case Form::cylinder_3var: {
    const double x = p[1], y = p[2];
    const double a = 0.5 * R - y, b = 0.5 * R + y;
    const double ia = inv_sqrt(x * x + a * a, e2, "light particle on a heavy particle");
    const double ib = inv_sqrt(x * x + b * b, e2, "light particle on a heavy particle");
    const double ia3 = ia * ia * ia, ib3 = ib * ib * ib;
    // -s^{-1/2} differentiates to +1/2 s^{-3/2} ds
    return {drep + ia3 * a * 0.5 + ib3 * b * 0.5, x * (ia3 + ib3),
            -a * ia3 + b * ib3};
  }
  case Form::prolate_fixed_R: {
    const double xi = p[1], eta = p[2];
    const double q = xi * xi - eta * eta;
    if (q == 0.0 || R == 0.0) throw SingularityError("prolate point on a nucleus");
    const double att = 4.0 * xi / (R * q);
    const double dxi = -(4.0 / (R * q) - 8.0 * xi * xi / (R * q * q));
    const double deta = -(8.0 * xi * eta / (R * q * q));
    return {drep + att / R, dxi, deta};
  }
  }
  return {};
}

} // namespace qcs
