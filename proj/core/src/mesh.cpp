#include "fbms/mesh.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include "fbms/errors.hpp"

namespace fbms {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// True when triangle t traverses a -> b.
bool traverses(const Triangle& t, int a, int b) {
  for (int k = 0; k < 3; ++k)
    if (t[k] == a && t[(k + 1) % 3] == b) return true;
  return false;
}

double bbox_area(const std::vector<Vec3>& vertices) {
  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const auto& p : vertices) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::array<double, 3> ext{hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
  std::sort(ext.begin(), ext.end());
  return ext[1] * ext[2];
}

}  // namespace

std::string_view to_string(BuiltinKind kind) {
  switch (kind) {
    case BuiltinKind::flat_disk: return "flat_disk";
    case BuiltinKind::critical_catenoid: return "critical_catenoid";
    case BuiltinKind::flat_annulus: return "flat_annulus";
    case BuiltinKind::offset_disk: return "offset_disk";
    case BuiltinKind::none: break;
  }
  return "none";
}

std::optional<BuiltinKind> builtin_from_string(std::string_view name) {
  for (auto k : {BuiltinKind::flat_disk, BuiltinKind::critical_catenoid, BuiltinKind::flat_annulus,
                 BuiltinKind::offset_disk})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

TriangulatedSurface TriangulatedSurface::build(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                                               BuiltinTag tag) {
  const int nv = static_cast<int>(vertices.size());
  if (nv < 3 || triangles.empty()) throw ParseError("mesh needs at least 3 vertices and one triangle");
  if (tag.kind != BuiltinKind::none && tag.params.size() != vertices.size())
    throw ParseError("builtin parameter list does not match vertex count");

  std::vector<char> used(static_cast<std::size_t>(nv), 0);
  for (const auto& t : triangles) {
    for (int v : t) {
      if (v < 0 || v >= nv) throw ParseError("triangle references vertex " + std::to_string(v));
      used[static_cast<std::size_t>(v)] = 1;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw DegenerateTriangleError("triangle repeats a vertex");
  }
  for (int v = 0; v < nv; ++v)
    if (!used[static_cast<std::size_t>(v)])
      throw NonManifoldError("vertex " + std::to_string(v) + " belongs to no triangle");

  const double area_floor = 1e-14 * bbox_area(vertices);
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    const auto& t = triangles[f];
    const Vec3& a = vertices[static_cast<std::size_t>(t[0])];
    const Vec3& b = vertices[static_cast<std::size_t>(t[1])];
    const Vec3& c = vertices[static_cast<std::size_t>(t[2])];
    const double area = 0.5 * (b - a).cross(c - a).norm();
    if (!(area >= area_floor) || area == 0.0)
      throw DegenerateTriangleError("triangle " + std::to_string(f) + " has area " + std::to_string(area));
  }

  // Edge table.
  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(triangles.size() * 2);
  for (int f = 0; f < static_cast<int>(triangles.size()); ++f) {
    const auto& t = triangles[static_cast<std::size_t>(f)];
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<int>(edges.size()));
      if (inserted) {
        edges.push_back({std::min(a, b), std::max(a, b), f, -1});
      } else {
        Edge& e = edges[static_cast<std::size_t>(it->second)];
        if (e.tri1 >= 0 || e.tri0 == f)
          throw NonManifoldError("edge (" + std::to_string(e.v0) + "," + std::to_string(e.v1) +
                                 ") has more than two incident triangles");
        e.tri1 = f;
      }
    }
  }

  // Consistent orientation by breadth-first propagation across interior edges.
  const int nf = static_cast<int>(triangles.size());
  std::vector<std::vector<int>> face_edges(static_cast<std::size_t>(nf));
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    face_edges[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].tri0)].push_back(e);
    if (edges[static_cast<std::size_t>(e)].tri1 >= 0)
      face_edges[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].tri1)].push_back(e);
  }
  std::vector<char> visited(static_cast<std::size_t>(nf), 0);
  bool flipped_any = false;
  for (int seed = 0; seed < nf; ++seed) {
    if (visited[static_cast<std::size_t>(seed)]) continue;
    visited[static_cast<std::size_t>(seed)] = 1;
    std::queue<int> queue;
    queue.push(seed);
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop();
      for (int e : face_edges[static_cast<std::size_t>(f)]) {
        const Edge& edge = edges[static_cast<std::size_t>(e)];
        if (edge.tri1 < 0) continue;
        const int g = edge.tri0 == f ? edge.tri1 : edge.tri0;
        const bool f_forward = traverses(triangles[static_cast<std::size_t>(f)], edge.v0, edge.v1);
        const bool g_forward = traverses(triangles[static_cast<std::size_t>(g)], edge.v0, edge.v1);
        if (!visited[static_cast<std::size_t>(g)]) {
          if (f_forward == g_forward) {
            std::swap(triangles[static_cast<std::size_t>(g)][1], triangles[static_cast<std::size_t>(g)][2]);
            flipped_any = true;
          }
          visited[static_cast<std::size_t>(g)] = 1;
          queue.push(g);
        } else if (f_forward == g_forward) {
          throw OrientationError("surface is not orientable");
        }
      }
    }
  }

  // Boundary loops: follow boundary edges in the direction of their triangle.
  std::vector<int> next(static_cast<std::size_t>(nv), -1);
  int boundary_edges = 0;
  for (const auto& e : edges) {
    if (!e.is_boundary()) continue;
    ++boundary_edges;
    const auto& t = triangles[static_cast<std::size_t>(e.tri0)];
    const int a = traverses(t, e.v0, e.v1) ? e.v0 : e.v1;
    const int b = a == e.v0 ? e.v1 : e.v0;
    if (next[static_cast<std::size_t>(a)] >= 0)
      throw NonManifoldError("boundary is pinched at vertex " + std::to_string(a));
    next[static_cast<std::size_t>(a)] = b;
  }
  if (boundary_edges == 0) throw ClosedSurfaceError("surface has no boundary edges");

  TriangulatedSurface s;
  s.boundary_vertex_.assign(static_cast<std::size_t>(nv), 0);
  s.loop_of_vertex_.assign(static_cast<std::size_t>(nv), -1);
  for (int v = 0; v < nv; ++v) {
    if (next[static_cast<std::size_t>(v)] < 0 || s.boundary_vertex_[static_cast<std::size_t>(v)]) continue;
    std::vector<int> loop;
    int cur = v;
    do {
      if (s.boundary_vertex_[static_cast<std::size_t>(cur)] || next[static_cast<std::size_t>(cur)] < 0)
        throw NonManifoldError("boundary edges do not close into loops");
      s.boundary_vertex_[static_cast<std::size_t>(cur)] = 1;
      s.loop_of_vertex_[static_cast<std::size_t>(cur)] = static_cast<int>(s.boundary_loops_.size());
      loop.push_back(cur);
      cur = next[static_cast<std::size_t>(cur)];
    } while (cur != v);
    s.boundary_loops_.push_back(std::move(loop));
  }

  s.vertices_ = std::move(vertices);
  s.triangles_ = std::move(triangles);
  s.edges_ = std::move(edges);
  s.tag_ = std::move(tag);
  s.reoriented_ = flipped_any;
  return s;
}

double TriangulatedSurface::mean_edge_length() const {
  double sum = 0.0;
  for (const auto& e : edges_)
    sum += (vertices_[static_cast<std::size_t>(e.v0)] - vertices_[static_cast<std::size_t>(e.v1)]).norm();
  return sum / static_cast<double>(edges_.size());
}

double TriangulatedSurface::total_area() const {
  double sum = 0.0;
  for (const auto& t : triangles_) {
    const Vec3& a = vertices_[static_cast<std::size_t>(t[0])];
    sum += 0.5 * (vertices_[static_cast<std::size_t>(t[1])] - a)
                     .cross(vertices_[static_cast<std::size_t>(t[2])] - a)
                     .norm();
  }
  return sum;
}

double TriangulatedSurface::boundary_length() const {
  double sum = 0.0;
  for (const auto& e : edges_)
    if (e.is_boundary())
      sum += (vertices_[static_cast<std::size_t>(e.v0)] - vertices_[static_cast<std::size_t>(e.v1)]).norm();
  return sum;
}

TopologyInvariants compute_topology(const TriangulatedSurface& surface) {
  TopologyInvariants inv;
  inv.euler_char = surface.num_vertices() - surface.num_edges() + surface.num_faces();
  inv.boundary_count = static_cast<int>(surface.boundary_loops().size());
  const int twice_genus = 2 - inv.euler_char - inv.boundary_count;
  if (twice_genus < 0 || twice_genus % 2 != 0)
    throw TopologyError("2 - chi - m = " + std::to_string(twice_genus) + " is not a nonnegative even integer");
  inv.genus = twice_genus / 2;
  return inv;
}

}  // namespace fbms
