#include "fbms/immersed_surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbms/errors.hpp"

namespace fbms {

ImmersedSurface::ImmersedSurface(TriangulatedSurface surface, AmbientSpace ambient)
    : surface_(std::move(surface)), ambient_(std::move(ambient)) {
  const auto& x = surface_.vertices();
  const std::size_t nv = x.size();
  normals_.assign(nv, Vec3::Zero());
  conormals_.assign(nv, Vec3::Zero());
  tangents_.assign(nv, Vec3::Zero());
  vertex_areas_.assign(nv, 0.0);
  local_lengths_.assign(nv, 0.0);

  elements_.reserve(surface_.triangles().size());
  for (const auto& t : surface_.triangles()) {
    ElementGeometry el;
    const Vec3& a = x[static_cast<std::size_t>(t[0])];
    const Vec3& b = x[static_cast<std::size_t>(t[1])];
    const Vec3& c = x[static_cast<std::size_t>(t[2])];
    const Vec3 cross = (b - a).cross(c - a);
    el.area = 0.5 * cross.norm();
    el.normal = cross.normalized();
    const std::array<const Vec3*, 3> p{&a, &b, &c};
    for (int i = 0; i < 3; ++i)
      el.grad[static_cast<std::size_t>(i)] =
          el.normal.cross(*p[static_cast<std::size_t>((i + 2) % 3)] - *p[static_cast<std::size_t>((i + 1) % 3)]) /
          (2.0 * el.area);
    for (int v : t) {
      normals_[static_cast<std::size_t>(v)] += el.area * el.normal;
      vertex_areas_[static_cast<std::size_t>(v)] += el.area / 3.0;
    }
    elements_.push_back(el);
  }
  for (auto& n : normals_) n.normalize();
  // Keep normal sections admissible: at boundary vertices the normal is
  // projected onto the tangent plane of the ambient boundary.
  if (ambient_.has_boundary()) {
    for (std::size_t v = 0; v < nv; ++v) {
      if (!surface_.is_boundary_vertex(static_cast<int>(v))) continue;
      const Vec3 w = ambient_.boundary_normal(x[v]);
      const Vec3 projected = normals_[v] - normals_[v].dot(w) * w;
      if (projected.norm() > 1e-3) normals_[v] = projected.normalized();
    }
  }

  std::vector<int> degree(nv, 0);
  for (const auto& e : surface_.edges()) {
    const double len = (x[static_cast<std::size_t>(e.v0)] - x[static_cast<std::size_t>(e.v1)]).norm();
    for (int v : {e.v0, e.v1}) {
      local_lengths_[static_cast<std::size_t>(v)] += len;
      ++degree[static_cast<std::size_t>(v)];
    }
  }
  for (std::size_t v = 0; v < nv; ++v) local_lengths_[v] /= degree[v];

  // Outward in-plane direction of each boundary edge, averaged at its endpoints.
  for (const auto& e : surface_.edges()) {
    if (!e.is_boundary()) continue;
    const auto& t = surface_.triangles()[static_cast<std::size_t>(e.tri0)];
    int a = e.v0, b = e.v1;
    for (int k = 0; k < 3; ++k)
      if (t[static_cast<std::size_t>(k)] == e.v1 && t[static_cast<std::size_t>((k + 1) % 3)] == e.v0) std::swap(a, b);
    const Vec3 out = (x[static_cast<std::size_t>(b)] - x[static_cast<std::size_t>(a)])
                         .cross(elements_[static_cast<std::size_t>(e.tri0)].normal)
                         .normalized();
    conormals_[static_cast<std::size_t>(a)] += out;
    conormals_[static_cast<std::size_t>(b)] += out;
  }
  for (const auto& loop : surface_.boundary_loops()) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::size_t>(loop[i]);
      const Vec3 tangent =
          (x[static_cast<std::size_t>(loop[(i + 1) % n])] - x[static_cast<std::size_t>(loop[(i + n - 1) % n])])
              .normalized();
      tangents_[v] = tangent;
      Vec3& eta = conormals_[v];
      eta -= eta.dot(tangent) * tangent;
      eta.normalize();
    }
  }
}

std::vector<Vec3> discrete_mean_curvature(const ImmersedSurface& immersed) {
  const auto& x = immersed.surface().vertices();
  std::vector<Vec3> lap(x.size(), Vec3::Zero());
  for (const auto& t : immersed.surface().triangles()) {
    for (int k = 0; k < 3; ++k) {
      const auto i = static_cast<std::size_t>(t[static_cast<std::size_t>(k)]);
      const auto j = static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)]);
      const auto o = static_cast<std::size_t>(t[static_cast<std::size_t>((k + 2) % 3)]);
      const Vec3 u = x[i] - x[o], w = x[j] - x[o];
      const double cot = u.dot(w) / u.cross(w).norm();
      lap[i] += 0.5 * cot * (x[j] - x[i]);
      lap[j] += 0.5 * cot * (x[i] - x[j]);
    }
  }
  for (std::size_t v = 0; v < x.size(); ++v) lap[v] /= immersed.vertex_area(static_cast<int>(v));
  return lap;
}

FreeBoundaryReport validate_free_boundary(const ImmersedSurface& immersed, double tol_min, double tol_orth,
                                          double tol_bdry) {
  FreeBoundaryReport r;
  r.tol_min = tol_min;
  r.tol_orth = tol_orth;
  r.tol_bdry = tol_bdry;
  const auto& s = immersed.surface();
  const auto h = discrete_mean_curvature(immersed);
  for (int v = 0; v < s.num_vertices(); ++v)
    if (!s.is_boundary_vertex(v))
      r.mean_curvature_residual =
          std::max(r.mean_curvature_residual, h[static_cast<std::size_t>(v)].norm() * immersed.local_edge_length(v));

  const auto& ambient = immersed.ambient();
  if (!ambient.has_boundary()) {
    r.orthogonality_residual = std::numeric_limits<double>::infinity();
    r.boundary_residual = std::numeric_limits<double>::infinity();
    r.pass = false;
    return r;
  }
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (!s.is_boundary_vertex(v)) continue;
    const Vec3& p = s.vertices()[static_cast<std::size_t>(v)];
    r.boundary_residual = std::max(r.boundary_residual, ambient.boundary_residual(p));
    const Vec3 w = ambient.boundary_normal(p);
    r.orthogonality_residual = std::max(r.orthogonality_residual, 1.0 - std::abs(immersed.conormal(v).dot(w)));
  }
  r.pass = r.mean_curvature_residual <= tol_min && r.orthogonality_residual <= tol_orth &&
           r.boundary_residual <= tol_bdry;
  return r;
}

}  // namespace fbms
