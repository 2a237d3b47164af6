#pragma once

// Reference values computed without the library: series, bisection and a
// one-dimensional finite element solve.

#include <vector>

namespace oracle {

/// Modified Bessel functions by their power series.
double bessel_i0(double x);
double bessel_i1(double x);

/// Root of s I1(s) = I0(s) by bisection on [0.5, 3]. The flat unit disk's
/// negative Robin mode has eigenvalue -s^2.
double disk_robin_root();

/// Root of t tanh(t) = 1 by bisection.
double catenoid_neck();

/// Lowest `count` eigenvalues of the area second variation of the critical
/// catenoid restricted to the rotational mode e^{i m theta}, from a P1 solve
/// on the profile interval with `elements` elements.
std::vector<double> catenoid_mode_eigenvalues(int m, int count, int elements = 400);

/// Lowest `count` eigenvalues of the full operator (modes m >= 1 counted twice).
std::vector<double> catenoid_eigenvalues(int count, int elements = 400);

/// max over a log-spaced grid of `points` values in [lo, hi] of the closed-form
/// objective for surfaces, evaluated directly in double precision.
struct GridMin {
  double value;
  double t;
};
GridMin closed_form_grid_scan(double area, double rho, double c1, double c2, int n_amb, double lo, double hi,
                              long points);

}  // namespace oracle
