#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fbms/mesh.hpp"

namespace fbms {

using Mat3 = Eigen::Matrix3d;

/// Boundary level sets from a fixed catalogue. The domain is {f <= 0}, so the
/// gradient points outward.
class LevelSet {
 public:
  enum class Kind { sphere, half_space, ball_exterior, ellipsoid };

  /// |x| <= r.
  static LevelSet sphere(double radius = 1.0);
  /// x3 <= 0.
  static LevelSet half_space();
  /// |x| >= r; the boundary sphere is concave with II = -1/r.
  static LevelSet ball_exterior(double radius);
  /// (x/a)^2 + (y/b)^2 + (z/c)^2 <= 1. No analytic curvature bound is used.
  static LevelSet ellipsoid(double a, double b, double c);

  Kind kind() const { return kind_; }
  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  Mat3 hessian(const Vec3& x) const;
  /// A nearby point on {f = 0}: closed form where available, else Newton
  /// steps along the gradient.
  Vec3 project(const Vec3& x) const;
  /// Exact infimum of the boundary principal curvatures when known.
  std::optional<double> min_curvature() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::sphere;
  Vec3 params_ = Vec3::Ones();
};

/// Ambient 3-manifold with optional boundary. Space forms are represented in
/// a Euclidean chart with the constant-curvature tensor attached.
class AmbientSpace {
 public:
  enum class Kind { euclidean_3, unit_ball_3, space_form, level_set_domain };

  static AmbientSpace euclidean();
  static AmbientSpace unit_ball();
  static AmbientSpace space_form(double kappa, std::optional<LevelSet> boundary = LevelSet::sphere());
  static AmbientSpace level_set_domain(LevelSet boundary);

  Kind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  int dimension() const { return 3; }
  bool has_boundary() const { return boundary_.has_value(); }
  /// Throws AmbientError when there is no boundary.
  const LevelSet& boundary() const;
  std::string describe() const;

  /// Outward unit normal W of the boundary level set at (or near) x.
  Vec3 boundary_normal(const Vec3& x) const;
  /// Matrix of II at the projection of x onto the boundary, extended by zero
  /// in the W direction: P_W Hess(f) P_W / |grad f|.
  Mat3 shape_operator(const Vec3& x) const;
  /// Distance-like residual |f(x)| / |grad f(x)|.
  double boundary_residual(const Vec3& x) const;

 private:
  Kind kind_ = Kind::euclidean_3;
  double kappa_ = 0.0;
  std::optional<LevelSet> boundary_;
};

/// Parses "unit_ball_3", "euclidean_3", "space_form,kappa=-1,boundary=ball_exterior:2",
/// "level_set_domain,level=half_space", "level_set_domain,level=ellipsoid:1:2:3".
AmbientSpace parse_ambient(std::string_view text);

/// Curvature operator V -> sum_l R(V, e_l) e_l over an orthonormal tangent 2-frame.
Vec3 evaluate_curvature_operator(const AmbientSpace& ambient, const Vec3& point, const Vec3& e1,
                                 const Vec3& e2, const Vec3& v);

inline constexpr double kTolBoundary = 1e-8;
inline constexpr double kTolTangency = 1e-8;

/// II(X, Y) = <nabla_X W, Y> for X, Y tangent to the boundary at `point`.
double boundary_second_form(const AmbientSpace& ambient, const Vec3& point, const Vec3& x, const Vec3& y);

enum class BoundSource { analytic, probed };

struct AmbientBounds {
  double rho = 0.0;
  double alpha = 0.0;
  BoundSource rho_source = BoundSource::analytic;
  BoundSource alpha_source = BoundSource::analytic;
  std::string warning;
};

/// rho = sup |R| and alpha = min{0, inf II}. Analytic values are used when the
/// catalogue provides them; otherwise the probe sample is scanned.
AmbientBounds ambient_bounds(const AmbientSpace& ambient, const std::vector<Vec3>& probe_points);

/// Probed infimum of the smallest boundary principal curvature over the
/// projections of the probe points (not clamped).
double probe_min_curvature(const AmbientSpace& ambient, const std::vector<Vec3>& probe_points);
/// Probed supremum of the operator norm of the curvature operator.
double probe_rho(const AmbientSpace& ambient, const std::vector<Vec3>& probe_points);

/// Deterministic quasi-uniform sample of `count` points on the sphere of radius r.
std::vector<Vec3> fibonacci_sphere(int count, double radius = 1.0);

}  // namespace fbms
