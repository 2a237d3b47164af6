#pragma once

#include <cstdint>

#include "fbms/variation_forms.hpp"

namespace fbms {

struct SobolevResult {
  double lhs = 0.0;                ///< (int |phi|^{n/(n-1)})^{(n-1)/n}
  double rhs_gradient_part = 0.0;  ///< int |grad phi|
  double rhs_l1_part = 0.0;        ///< int |phi|
  double ratio = 0.0;
};

/// Free-boundary Sobolev quotient for a P1 field; n is the intrinsic dimension.
SobolevResult sobolev_check(const ImmersedSurface& immersed, const Vector& phi, int n = 2);

struct TraceResult {
  double boundary_l1 = 0.0;     ///< int_{dSigma} |phi| dL
  double gradient_part = 0.0;   ///< int |grad phi|
  double curvature_part = 0.0;  ///< int |H phi|
  double l1_part = 0.0;         ///< int |phi|
  double interior_terms = 0.0;
  double ratio = 0.0;
};

TraceResult boundary_trace_check(const ImmersedSurface& immersed, const Vector& phi);

/// Quotient (int phi^2)^{3/2} / int |phi| over int |grad phi|^2 + int phi^2,
/// the inequality used with a single constant c1 = c2.
double interpolation_ratio(const ImmersedSurface& immersed, const Vector& phi);

/// Sum of 1 to 3 Gaussian bumps with centres drawn around the surface's centroid.
/// The draw depends on the seed and the surface extent, not on the mesh.
Vector random_bump_field(const ImmersedSurface& immersed, std::uint64_t seed, int sample);

struct RatioStatistics {
  int samples = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Empirical constants: sup over seeded random fields. The constants in the
/// inequalities are non-constructive; these are estimates only.
struct EmpiricalConstants {
  std::uint64_t seed = 0;
  RatioStatistics sobolev;
  RatioStatistics trace;
  RatioStatistics interpolation;
  double c = 0.0;   ///< sup Sobolev ratio
  double c1 = 0.0;  ///< sup interpolation ratio
  double c2 = 0.0;  ///< same as c1
  double trace_constant = 0.0;
};

EmpiricalConstants empirical_constants(const ImmersedSurface& immersed, int samples = 100,
                                       std::uint64_t seed = 20240601ULL);

}  // namespace fbms
