#include <cmath>
#include <numbers>
#include <unordered_map>

#include "fbms/errors.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  theta = std::fmod(theta, kTwoPi);
  return theta < 0.0 ? theta + kTwoPi : theta;
}

// Embedding of a parameter point for each analytic surface.
Vec3 embed(const BuiltinTag& tag, const Vec2& q) {
  switch (tag.kind) {
    case BuiltinKind::flat_disk:
    case BuiltinKind::offset_disk: {
      const double radius = std::sqrt(1.0 - tag.shape_a * tag.shape_a);
      return {radius * q[0], radius * q[1], tag.shape_a};
    }
    case BuiltinKind::critical_catenoid: {
      const double c = tag.shape_a;
      return {c * std::cosh(q[1]) * std::cos(q[0]), c * std::cosh(q[1]) * std::sin(q[0]), c * q[1]};
    }
    case BuiltinKind::flat_annulus:
      return {q[1] * std::cos(q[0]), q[1] * std::sin(q[0]), 0.0};
    case BuiltinKind::none: break;
  }
  throw ParameterError("surface has no analytic embedding");
}

bool angular_params(BuiltinKind kind) {
  return kind == BuiltinKind::critical_catenoid || kind == BuiltinKind::flat_annulus;
}

Vec2 param_midpoint(const BuiltinTag& tag, const Vec2& a, const Vec2& b, bool boundary_edge) {
  if (angular_params(tag.kind)) {
    double ta = a[0], tb = b[0];
    if (tb - ta > std::numbers::pi) tb -= kTwoPi;
    if (ta - tb > std::numbers::pi) ta -= kTwoPi;
    return {wrap_angle(0.5 * (ta + tb)), 0.5 * (a[1] + b[1])};
  }
  Vec2 mid = 0.5 * (a + b);
  if (boundary_edge) mid.normalize();  // disks: unit parameter circle
  return mid;
}

// Hexagonal ring triangulation of the unit parameter disk: ring k carries 6k
// vertices at radius k/rings, giving 6 rings^2 triangles.
TriangulatedSurface hex_disk(int rings, double height, BuiltinKind kind) {
  if (rings < 1) throw ResolutionError("resolution must be at least 1");
  BuiltinTag tag;
  tag.kind = kind;
  tag.shape_a = height;
  tag.params.emplace_back(0.0, 0.0);
  std::vector<int> ring_start{0};
  for (int k = 1; k <= rings; ++k) {
    ring_start.push_back(static_cast<int>(tag.params.size()));
    const double r = static_cast<double>(k) / rings;
    for (int i = 0; i < 6 * k; ++i) {
      const double theta = kTwoPi * i / (6.0 * k);
      tag.params.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
  }

  auto ring_vertex = [&](int k, int i) {
    if (k == 0) return 0;
    return ring_start[static_cast<std::size_t>(k)] + (i % (6 * k));
  };
  std::vector<Triangle> tris;
  for (int k = 1; k <= rings; ++k) {
    for (int s = 0; s < 6; ++s) {
      for (int j = 0; j < k; ++j) {
        const int inner = ring_vertex(k - 1, s * (k - 1) + j);
        tris.push_back({inner, ring_vertex(k, s * k + j), ring_vertex(k, s * k + j + 1)});
        if (j + 1 < k) tris.push_back({inner, ring_vertex(k, s * k + j + 1), ring_vertex(k - 1, s * (k - 1) + j + 1)});
      }
    }
  }
  std::vector<Vec3> verts;
  verts.reserve(tag.params.size());
  for (const auto& q : tag.params) verts.push_back(embed(tag, q));
  return TriangulatedSurface::build(std::move(verts), std::move(tris), std::move(tag));
}

// Periodic-in-theta grid over [0, 2pi) x [lo, hi] in (theta, s) parameters.
TriangulatedSurface angular_grid(BuiltinTag tag, int n_theta, int n_s, double lo, double hi) {
  std::vector<Vec3> verts;
  for (int j = 0; j <= n_s; ++j) {
    const double s = j == n_s ? hi : lo + (hi - lo) * j / n_s;
    for (int i = 0; i < n_theta; ++i) tag.params.emplace_back(kTwoPi * i / n_theta, s);
  }
  for (const auto& q : tag.params) verts.push_back(embed(tag, q));
  std::vector<Triangle> tris;
  auto id = [n_theta](int i, int j) { return j * n_theta + (i % n_theta); };
  for (int j = 0; j < n_s; ++j) {
    for (int i = 0; i < n_theta; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriangulatedSurface::build(std::move(verts), std::move(tris), std::move(tag));
}

}  // namespace

double critical_catenoid_neck() {
  // f(t) = t tanh t - 1 is increasing on (0, inf) with f(1) < 0 < f(2).
  double lo = 1.0, hi = 2.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::tanh(mid) - 1.0 < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

TriangulatedSurface offset_disk(int resolution, double height) {
  if (!(std::abs(height) < 1.0)) throw ParameterError("offset disk height must lie in (-1, 1)");
  return hex_disk(resolution, height, BuiltinKind::offset_disk);
}

TriangulatedSurface builtin_surface(BuiltinKind kind, int resolution) {
  if (resolution < 1) throw ResolutionError("resolution must be at least 1");
  switch (kind) {
    case BuiltinKind::flat_disk:
      return hex_disk(resolution, 0.0, BuiltinKind::flat_disk);
    case BuiltinKind::offset_disk:
      return hex_disk(resolution, 0.5, BuiltinKind::offset_disk);
    case BuiltinKind::critical_catenoid: {
      // X(theta, u) = c (cosh u cos theta, cosh u sin theta, u), u in [-t, t]:
      // |X| = 1 and X parallel to the conormal at u = +-t exactly when t tanh t = 1.
      BuiltinTag tag;
      tag.kind = kind;
      tag.shape_b = critical_catenoid_neck();
      const double t = tag.shape_b;
      tag.shape_a = 1.0 / std::sqrt(std::cosh(t) * std::cosh(t) + t * t);
      return angular_grid(std::move(tag), 4 * resolution, 2 * resolution, -t, t);
    }
    case BuiltinKind::flat_annulus: {
      BuiltinTag tag;
      tag.kind = kind;
      tag.shape_a = 0.5;
      tag.shape_b = 1.0;
      return angular_grid(std::move(tag), 8 * resolution, resolution, 0.5, 1.0);
    }
    case BuiltinKind::none: break;
  }
  throw ParameterError("unknown builtin surface");
}

TriangulatedSurface refine_mesh(const TriangulatedSurface& surface, int levels) {
  if (levels < 0) throw ResolutionError("refinement levels must be nonnegative");
  TriangulatedSurface current = surface;
  for (int level = 0; level < levels; ++level) {
    const auto& tag = current.tag();
    const bool analytic = tag.kind != BuiltinKind::none;
    std::vector<Vec3> verts = current.vertices();
    BuiltinTag next_tag = tag;

    std::unordered_map<std::uint64_t, int> midpoint;
    auto key = [](int a, int b) {
      if (a > b) std::swap(a, b);
      return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    };
    for (const auto& e : current.edges()) {
      midpoint[key(e.v0, e.v1)] = static_cast<int>(verts.size());
      if (analytic) {
        const Vec2 q = param_midpoint(tag, tag.params[static_cast<std::size_t>(e.v0)],
                                      tag.params[static_cast<std::size_t>(e.v1)], e.is_boundary());
        next_tag.params.push_back(q);
        verts.push_back(embed(tag, q));
      } else {
        verts.push_back(0.5 * (verts[static_cast<std::size_t>(e.v0)] + verts[static_cast<std::size_t>(e.v1)]));
      }
    }
    std::vector<Triangle> tris;
    tris.reserve(current.triangles().size() * 4);
    for (const auto& t : current.triangles()) {
      const int ab = midpoint.at(key(t[0], t[1]));
      const int bc = midpoint.at(key(t[1], t[2]));
      const int ca = midpoint.at(key(t[2], t[0]));
      tris.push_back({t[0], ab, ca});
      tris.push_back({ab, t[1], bc});
      tris.push_back({ca, bc, t[2]});
      tris.push_back({ab, bc, ca});
    }
    current = TriangulatedSurface::build(std::move(verts), std::move(tris), std::move(next_tag));
  }
  return current;
}

}  // namespace fbms
