#pragma once

namespace fbms {

enum class BoundMode { dim2, dimN };

struct ClosedFormInput {
  double area = 0.0;
  double rho = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  int n_amb = 3;
  BoundMode mode = BoundMode::dim2;
  /// dimN only: intrinsic dimension n >= 3 and int_Sigma p^{n/2} dA.
  int n = 3;
  double p_integral = 0.0;
  double rel_tol = 1e-10;
  double t_lo = 1e-4;
  double t_hi = 1e4;
};

struct ClosedFormResult {
  double bound = 0.0;
  double t_star = 0.0;
  /// The minimizer sits on an end of [t_lo, t_hi]; the bound is then the value there
  /// (for dim2 with rho = 0 this approximates the t -> infinity infimum).
  bool at_grid_boundary = false;
  int iterations = 0;
};

/// Logarithm of the minimized objective at t (without the area or p-integral factor).
double closed_form_log_objective(const ClosedFormInput& in, double t);

/// Golden-section search on log t for
///   dim2: (n_amb - 2) c2^2 e^{rho t} / (1 - e^{-c2 t / (2 c1)})^2 * area
///   dimN: c2^{n/2} e^{2t} / (1 - e^{-4 c2 t / (n c1)})^{n/2} * p_integral
ClosedFormResult index_bound_closed_form(const ClosedFormInput& in);

/// c3 * p_integral.
double betti_bound_evaluator(int n, double p_integral, double c3);

}  // namespace fbms
