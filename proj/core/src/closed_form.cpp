#include "fbms/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "fbms/errors.hpp"

namespace fbms {

namespace {

void validate(const ClosedFormInput& in) {
  if (!(in.area >= 0.0)) throw ParameterError("area must be nonnegative");
  if (!(in.rho >= 0.0)) throw ParameterError("rho must be nonnegative");
  if (!(in.c1 > 0.0) || !(in.c2 > 0.0)) throw ParameterError("c1 and c2 must be positive");
  if (in.n_amb < 3) throw ParameterError("ambient dimension must be at least 3");
  if (in.mode == BoundMode::dimN) {
    if (in.n < 3) throw ParameterError("dimN mode needs n >= 3");
    if (!(in.p_integral >= 0.0)) throw ParameterError("p integral must be nonnegative");
  }
  if (!(in.rel_tol > 0.0)) throw ParameterError("tolerance must be positive");
  if (!(in.t_lo > 0.0) || !(in.t_hi > in.t_lo)) throw ParameterError("search interval must satisfy 0 < t_lo < t_hi");
}

// log(1 - e^{-x}) for x > 0.
double log1mexp(double x) { return x > 0.6931471805599453 ? std::log1p(-std::exp(-x)) : std::log(-std::expm1(-x)); }

}  // namespace

double closed_form_log_objective(const ClosedFormInput& in, double t) {
  if (in.mode == BoundMode::dim2) {
    return std::log(static_cast<double>(in.n_amb - 2)) + 2.0 * std::log(in.c2) + in.rho * t -
           2.0 * log1mexp(in.c2 * t / (2.0 * in.c1));
  }
  const double half = 0.5 * in.n;
  return half * std::log(in.c2) + 2.0 * t - half * log1mexp(4.0 * in.c2 * t / (in.n * in.c1));
}

ClosedFormResult index_bound_closed_form(const ClosedFormInput& in) {
  validate(in);
  ClosedFormResult r;
  const double scale = in.mode == BoundMode::dim2 ? in.area : in.p_integral;
  auto f = [&](double s) { return closed_form_log_objective(in, std::exp(s)); };

  constexpr double inv_phi = 0.6180339887498949;
  double a = std::log(in.t_lo);
  double b = std::log(in.t_hi);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > in.rel_tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    ++r.iterations;
  }
  double s_star = 0.5 * (a + b);
  double best = f(s_star);
  // Compare against the interval ends so monotone objectives report the edge.
  for (double edge : {std::log(in.t_lo), std::log(in.t_hi)}) {
    const double fe = f(edge);
    if (fe <= best) {
      best = fe;
      s_star = edge;
    }
  }
  const double width = std::log(in.t_hi) - std::log(in.t_lo);
  r.at_grid_boundary = std::abs(s_star - std::log(in.t_lo)) <= 1e-6 * width ||
                       std::abs(s_star - std::log(in.t_hi)) <= 1e-6 * width;
  r.t_star = std::exp(s_star);
  r.bound = scale == 0.0 ? 0.0 : scale * std::exp(best);
  return r;
}

double betti_bound_evaluator(int n, double p_integral, double c3) {
  if (n < 3) throw ParameterError("dimension must be at least 3");
  if (!(p_integral >= 0.0)) throw ParameterError("p integral must be nonnegative");
  if (!(c3 > 0.0)) throw ParameterError("c3 must be positive");
  return c3 * p_integral;
}

}  // namespace fbms
