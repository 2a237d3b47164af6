#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "fbms/errors.hpp"
#include "fbms/mesh.hpp"

using namespace fbms;

namespace {

// Two triangles forming the unit square.
TriangulatedSurface square() {
  return TriangulatedSurface::build({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 3}});
}

// Planar annulus between radii 1 and 2 with `n` segments per circle.
std::string annulus_off(int n) {
  std::string s = "OFF\n" + std::to_string(2 * n) + " " + std::to_string(2 * n) + " 0\n";
  for (int r = 1; r <= 2; ++r)
    for (int i = 0; i < n; ++i) {
      const double a = 2 * std::numbers::pi * i / n;
      s += std::to_string(r * std::cos(a)) + " " + std::to_string(r * std::sin(a)) + " 0\n";
    }
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    s += "3 " + std::to_string(i) + " " + std::to_string(n + i) + " " + std::to_string(n + j) + "\n";
    s += "3 " + std::to_string(i) + " " + std::to_string(n + j) + " " + std::to_string(j) + "\n";
  }
  return s;
}

}  // namespace

TEST(Topology, SquareIsADisk) {
  const auto t = compute_topology(square());
  EXPECT_EQ(t, (TopologyInvariants{0, 1, 1}));
}

TEST(Topology, Builtins) {
  EXPECT_EQ(compute_topology(builtin_surface(BuiltinKind::flat_disk, 4)), (TopologyInvariants{0, 1, 1}));
  EXPECT_EQ(compute_topology(builtin_surface(BuiltinKind::critical_catenoid, 8)), (TopologyInvariants{0, 2, 0}));
  EXPECT_EQ(compute_topology(builtin_surface(BuiltinKind::flat_annulus, 6)), (TopologyInvariants{0, 2, 0}));
}

TEST(Topology, EulerCharacteristicFromCounts) {
  const auto s = builtin_surface(BuiltinKind::flat_disk, 5);
  EXPECT_EQ(s.num_vertices() - s.num_edges() + s.num_faces(), 1);
  ASSERT_EQ(s.boundary_loops().size(), 1u);
}

TEST(Topology, PuncturedTorusHasGenusOne) {
  // 3x3 periodic torus grid with one square removed.
  std::vector<Vec3> v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double a = 2 * std::numbers::pi * i / 3, b = 2 * std::numbers::pi * j / 3;
      v.push_back({(2 + std::cos(b)) * std::cos(a), (2 + std::cos(b)) * std::sin(a), std::sin(b)});
    }
  auto id = [](int i, int j) { return 3 * (i % 3) + (j % 3); };
  std::vector<Triangle> f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == 0 && j == 0) continue;
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  const auto t = compute_topology(TriangulatedSurface::build(v, f));
  EXPECT_EQ(t, (TopologyInvariants{1, 1, -1}));
}

TEST(Mesh, ReorientsInconsistentInput) {
  const auto s = TriangulatedSurface::build({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 3, 2}});
  EXPECT_TRUE(s.orientation_flag());
  EXPECT_FALSE(square().orientation_flag());
}

TEST(Mesh, Errors) {
  EXPECT_THROW(TriangulatedSurface::build({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 1}}), DegenerateTriangleError);
  EXPECT_THROW(TriangulatedSurface::build({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}}), DegenerateTriangleError);
  // Closed tetrahedron.
  EXPECT_THROW(TriangulatedSurface::build({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                                          {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}}),
               ClosedSurfaceError);
  // Three triangles on one edge.
  EXPECT_THROW(TriangulatedSurface::build({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}},
                                          {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}),
               NonManifoldError);
  EXPECT_THROW(builtin_surface(BuiltinKind::flat_disk, 0), ResolutionError);
  EXPECT_THROW(refine_mesh(square(), -1), ResolutionError);
}

TEST(MeshIO, OffRoundTrip) {
  const auto s = builtin_surface(BuiltinKind::flat_disk, 3);
  const auto back = parse_mesh(to_off(s), MeshFormat::off);
  ASSERT_EQ(back.num_vertices(), s.num_vertices());
  ASSERT_EQ(back.num_faces(), s.num_faces());
  for (int v = 0; v < s.num_vertices(); ++v) EXPECT_LT((back.vertices()[v] - s.vertices()[v]).norm(), 1e-15);
  EXPECT_EQ(back.triangles(), s.triangles());
}

TEST(MeshIO, OffAnnulusAndFiles) {
  const auto s = parse_mesh(annulus_off(12), MeshFormat::off);
  EXPECT_EQ(compute_topology(s), (TopologyInvariants{0, 2, 0}));
  const auto path = std::filesystem::temp_directory_path() / "fbms_mesh_io_test.off";
  save_off(s, path);
  const auto back = load_mesh(path);
  EXPECT_EQ(back.num_faces(), s.num_faces());
  std::filesystem::remove(path);
}

TEST(MeshIO, Obj) {
  const std::string obj =
      "# square\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\nf 1/1/1 3/1/1 4/1/1\n";
  const auto s = parse_mesh(obj, MeshFormat::obj);
  EXPECT_EQ(s.num_vertices(), 4);
  EXPECT_NEAR(s.total_area(), 1.0, 1e-15);
  EXPECT_NEAR(s.boundary_length(), 4.0, 1e-15);
}

TEST(MeshIO, ParseErrors) {
  EXPECT_THROW(parse_mesh("OF\n3 1 0\n", MeshFormat::off), ParseError);
  EXPECT_THROW(parse_mesh("OFF\n3 1 0\n0 0 0\n1 0 0\n", MeshFormat::off), ParseError);
  EXPECT_THROW(parse_mesh("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n", MeshFormat::off), ParseError);
  EXPECT_THROW(parse_mesh("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n", MeshFormat::off), ParseError);
  EXPECT_THROW(parse_mesh("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 x\n", MeshFormat::obj), ParseError);
  EXPECT_THROW(load_mesh("/nonexistent/mesh.off"), ParseError);
}

TEST(Builtins, DiskAndCatenoidGeometry) {
  const auto disk = refine_mesh(builtin_surface(BuiltinKind::flat_disk, 8), 1);
  for (int v = 0; v < disk.num_vertices(); ++v)
    if (disk.is_boundary_vertex(v)) EXPECT_NEAR(disk.vertices()[v].norm(), 1.0, 1e-14);
  EXPECT_NEAR(disk.total_area(), std::numbers::pi, 2e-2);

  const auto cat = builtin_surface(BuiltinKind::critical_catenoid, 16);
  for (int v = 0; v < cat.num_vertices(); ++v)
    if (cat.is_boundary_vertex(v)) EXPECT_NEAR(cat.vertices()[v].norm(), 1.0, 1e-14);
  const double t = critical_catenoid_neck();
  EXPECT_NEAR(t * std::tanh(t), 1.0, 1e-14);
}

TEST(Builtins, RefinementQuadruplesFaces) {
  const auto s = builtin_surface(BuiltinKind::critical_catenoid, 6);
  const auto r = refine_mesh(s, 2);
  EXPECT_EQ(r.num_faces(), 16 * s.num_faces());
  EXPECT_EQ(compute_topology(r), compute_topology(s));
  EXPECT_LT(r.mean_edge_length(), 0.3 * s.mean_edge_length());
}

TEST(Builtins, Names) {
  for (auto k : {BuiltinKind::flat_disk, BuiltinKind::critical_catenoid, BuiltinKind::flat_annulus,
                 BuiltinKind::offset_disk})
    EXPECT_EQ(builtin_from_string(to_string(k)), k);
  EXPECT_FALSE(builtin_from_string("sphere"));
}
