#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace oracle {

double bessel_i0(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= (x / 2) * (x / 2) / (double(k) * k);
    sum += term;
  }
  return sum;
}

double bessel_i1(double x) {
  double term = x / 2, sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= (x / 2) * (x / 2) / (double(k) * (k + 1));
    sum += term;
  }
  return sum;
}

namespace {

template <typename F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double disk_robin_root() {
  return bisect([](double s) { return s * bessel_i1(s) - bessel_i0(s); }, 0.5, 3.0);
}

double catenoid_neck() {
  return bisect([](double t) { return t * std::tanh(t) - 1.0; }, 0.5, 2.0);
}

std::vector<double> catenoid_mode_eigenvalues(int m, int count, int elements) {
  // Conformal profile coordinate s in [-t, t]: metric c^2 cosh^2 s (ds^2 + dtheta^2),
  // |A|^2 dA = 2 sech^2 s ds dtheta, boundary length element c cosh t dtheta.
  const double t = catenoid_neck();
  const double c = 1.0 / std::sqrt(std::cosh(t) * std::cosh(t) + t * t);
  const int n = elements;
  const double h = 2 * t / n;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1), M = K;
  const double gauss[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  for (int e = 0; e < n; ++e) {
    for (double xq : gauss) {
      const double s = -t + (e + xq) * h;
      const double w = h / 2;
      const double shape[2] = {1 - xq, xq};
      const double dshape[2] = {-1 / h, 1 / h};
      const double potential = m * m - 2 / (std::cosh(s) * std::cosh(s));
      const double density = c * c * std::cosh(s) * std::cosh(s);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          K(e + a, e + b) += w * (dshape[a] * dshape[b] + potential * shape[a] * shape[b]);
          M(e + a, e + b) += w * density * shape[a] * shape[b];
        }
    }
  }
  K(0, 0) -= c * std::cosh(t);
  K(n, n) -= c * std::cosh(t);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  std::vector<double> out;
  for (int i = 0; i < count && i <= n; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

std::vector<double> catenoid_eigenvalues(int count, int elements) {
  std::vector<double> all;
  for (int m = 0; m <= 6; ++m) {
    for (double l : catenoid_mode_eigenvalues(m, count, elements)) {
      all.push_back(l);
      if (m > 0) all.push_back(l);
    }
  }
  std::sort(all.begin(), all.end());
  all.resize(std::min<std::size_t>(all.size(), count));
  return all;
}

GridMin closed_form_grid_scan(double area, double rho, double c1, double c2, int n_amb, double lo, double hi,
                              long points) {
  GridMin best{std::numeric_limits<double>::infinity(), lo};
  const double llo = std::log(lo), lhi = std::log(hi);
  for (long i = 0; i < points; ++i) {
    const double t = std::exp(llo + (lhi - llo) * double(i) / double(points - 1));
    const double denom = 1.0 - std::exp(-c2 * t / (2 * c1));
    const double v = (n_amb - 2) * c2 * c2 * std::exp(rho * t) / (denom * denom) * area;
    if (v < best.value) best = {v, t};
  }
  return best;
}

}  // namespace oracle
