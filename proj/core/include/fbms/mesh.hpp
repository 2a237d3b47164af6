#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fbms {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Triangle = std::array<int, 3>;

/// Genus, number of boundary components and Euler characteristic.
struct TopologyInvariants {
  int genus = 0;
  int boundary_count = 0;
  int euler_char = 0;

  friend bool operator==(const TopologyInvariants&, const TopologyInvariants&) = default;
};

/// Analytic surfaces the library can generate and reproject onto.
enum class BuiltinKind { none, flat_disk, critical_catenoid, flat_annulus, offset_disk };

std::string_view to_string(BuiltinKind kind);
std::optional<BuiltinKind> builtin_from_string(std::string_view name);

/// Provenance of a generated surface. `params` holds one parameter-domain
/// coordinate per vertex; refinement subdivides in that domain and maps the
/// midpoints back through the analytic embedding.
struct BuiltinTag {
  BuiltinKind kind = BuiltinKind::none;
  std::vector<Vec2> params;
  // disks: plane height h (radius sqrt(1 - h^2)); critical_catenoid: scale c;
  // flat_annulus: inner radius.
  double shape_a = 0.0;
  // critical_catenoid: neck parameter t with t*tanh(t) = 1; flat_annulus: outer radius.
  double shape_b = 0.0;
};

/// An undirected edge together with its (one or two) incident triangles.
struct Edge {
  int v0 = -1;
  int v1 = -1;
  int tri0 = -1;
  int tri1 = -1;  ///< -1 for boundary edges
  bool is_boundary() const { return tri1 < 0; }
};

/// Oriented, validated triangle mesh of a compact surface with nonempty
/// boundary. Immutable after construction.
class TriangulatedSurface {
 public:
  /// Validates and builds a surface. Inconsistently oriented input is
  /// reoriented (orientation_flag() then reports true).
  static TriangulatedSurface build(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                                   BuiltinTag tag = {});

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Boundary cycles, each traversed with the surface on its left.
  const std::vector<std::vector<int>>& boundary_loops() const { return boundary_loops_; }
  const BuiltinTag& tag() const { return tag_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_faces() const { return static_cast<int>(triangles_.size()); }

  bool is_boundary_vertex(int v) const { return boundary_vertex_[static_cast<std::size_t>(v)] != 0; }
  /// Index of the boundary loop containing `v`, or -1.
  int boundary_loop_of(int v) const { return loop_of_vertex_[static_cast<std::size_t>(v)]; }
  /// True when some input triangles had to be flipped for a consistent orientation.
  bool orientation_flag() const { return reoriented_; }

  double mean_edge_length() const;
  double total_area() const;
  double boundary_length() const;

 private:
  TriangulatedSurface() = default;

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> boundary_loops_;
  std::vector<char> boundary_vertex_;
  std::vector<int> loop_of_vertex_;
  BuiltinTag tag_;
  bool reoriented_ = false;
};

enum class MeshFormat { off, obj };

std::optional<MeshFormat> mesh_format_from_string(std::string_view name);

TriangulatedSurface load_mesh(const std::filesystem::path& path, std::optional<MeshFormat> format = {});
TriangulatedSurface parse_mesh(std::string_view text, MeshFormat format);
void save_off(const TriangulatedSurface& surface, const std::filesystem::path& path);
std::string to_off(const TriangulatedSurface& surface);

TopologyInvariants compute_topology(const TriangulatedSurface& surface);

/// Analytic test surfaces. flat_disk and critical_catenoid have their
/// boundary on the unit sphere; flat_annulus is a planar parameter surface.
TriangulatedSurface builtin_surface(BuiltinKind kind, int resolution);

/// Planar disk at height `height` whose boundary lies on the unit sphere but
/// meets it at an angle. Negative control for free-boundary validation.
TriangulatedSurface offset_disk(int resolution, double height);

/// Neck parameter of the critical catenoid, root of t*tanh(t) = 1.
double critical_catenoid_neck();

/// Each level splits every triangle into four. Built-in surfaces are
/// subdivided in parameter space and mapped back onto the analytic surface.
TriangulatedSurface refine_mesh(const TriangulatedSurface& surface, int levels);

}  // namespace fbms
