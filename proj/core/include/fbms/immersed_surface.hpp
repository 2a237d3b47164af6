#pragma once

#include <vector>

#include "fbms/ambient.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

/// Per-element P1 geometry: area, unit normal and the three constant basis
/// gradients grad N_i = n x (x_{i+2} - x_{i+1}) / (2 A).
struct ElementGeometry {
  double area = 0.0;
  Vec3 normal = Vec3::Zero();
  std::array<Vec3, 3> grad{};
  Mat3 tangent_projector() const { return Mat3::Identity() - normal * normal.transpose(); }
};

/// A triangulated surface placed in an ambient space, with the normal and
/// conormal frames used by the second-variation assemblies.
class ImmersedSurface {
 public:
  ImmersedSurface(TriangulatedSurface surface, AmbientSpace ambient);

  const TriangulatedSurface& surface() const { return surface_; }
  const AmbientSpace& ambient() const { return ambient_; }

  const ElementGeometry& element(int f) const { return elements_[static_cast<std::size_t>(f)]; }
  const std::vector<ElementGeometry>& elements() const { return elements_; }
  /// Area-weighted unit vertex normal; at boundary vertices it is projected
  /// onto the tangent plane of the ambient boundary.
  const Vec3& normal(int v) const { return normals_[static_cast<std::size_t>(v)]; }
  /// Outward unit conormal at boundary vertices, zero elsewhere.
  const Vec3& conormal(int v) const { return conormals_[static_cast<std::size_t>(v)]; }
  /// Unit tangent of the boundary loop at a boundary vertex, zero elsewhere.
  const Vec3& boundary_tangent(int v) const { return tangents_[static_cast<std::size_t>(v)]; }
  /// One third of the incident triangle area.
  double vertex_area(int v) const { return vertex_areas_[static_cast<std::size_t>(v)]; }
  /// Mean length of the edges incident to v.
  double local_edge_length(int v) const { return local_lengths_[static_cast<std::size_t>(v)]; }

 private:
  TriangulatedSurface surface_;
  AmbientSpace ambient_;
  std::vector<ElementGeometry> elements_;
  std::vector<Vec3> normals_;
  std::vector<Vec3> conormals_;
  std::vector<Vec3> tangents_;
  std::vector<double> vertex_areas_;
  std::vector<double> local_lengths_;
};

struct FreeBoundaryReport {
  double mean_curvature_residual = 0.0;
  double orthogonality_residual = 0.0;
  double boundary_residual = 0.0;
  double tol_min = 0.0;
  double tol_orth = 0.0;
  double tol_bdry = 0.0;
  bool pass = false;
};

inline constexpr double kDefaultTolMin = 1e-2;
inline constexpr double kDefaultTolOrth = 1e-2;

/// Discrete minimality and free-boundary orthogonality residuals. Reports;
/// never throws for a valid surface.
FreeBoundaryReport validate_free_boundary(const ImmersedSurface& immersed, double tol_min = kDefaultTolMin,
                                          double tol_orth = kDefaultTolOrth, double tol_bdry = kTolBoundary);

/// Cotangent Laplacian of the vertex positions divided by the vertex area:
/// the discrete mean curvature vector at every vertex.
std::vector<Vec3> discrete_mean_curvature(const ImmersedSurface& immersed);

}  // namespace fbms
