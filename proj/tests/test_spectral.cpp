#include <gtest/gtest.h>

#include <cmath>

#include "fbms/errors.hpp"
#include "fbms/spectral.hpp"
#include "oracles.hpp"

using namespace fbms;

namespace {

SparseMatrix diagonal(const Vector& d) {
  SparseMatrix m(d.size(), d.size());
  for (int i = 0; i < d.size(); ++i) m.insert(i, i) = d[i];
  m.makeCompressed();
  return m;
}

SparseMatrix identity(int n) { return diagonal(Vector::Ones(n)); }

// 1-D Dirichlet Laplacian with a negative well; eigenvalues are known from the
// tridiagonal structure only through the solvers, so it serves the agreement test.
SparseMatrix well_operator(int n) {
  SparseMatrix a(n, n);
  std::vector<Eigen::Triplet<double>> t;
  const double h = 1.0 / (n + 1);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 1) * h;
    t.emplace_back(i, i, 2 / (h * h) - 400 * std::exp(-100 * (x - 0.5) * (x - 0.5)));
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1 / (h * h));
      t.emplace_back(i + 1, i, -1 / (h * h));
    }
  }
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

ImmersedSurface immersed(BuiltinKind kind, int res, int levels = 0) {
  return ImmersedSurface(refine_mesh(builtin_surface(kind, res), levels), AmbientSpace::unit_ball());
}

}  // namespace

TEST(Spectral, IdentityPencil) {
  Vector d(50);
  for (int i = 0; i < 50; ++i) d[i] = 50 - i;
  SolveOptions o;
  o.k = 6;
  for (bool lanczos : {false, true}) {
    o.force_lanczos = lanczos;
    const auto s = solve_pencil(diagonal(d), identity(50), o);
    ASSERT_EQ(s.size(), 6);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(s.eigenvalues[i], i + 1, 1e-10);
    EXPECT_EQ(s.solver, lanczos ? SolverKind::lanczos : SolverKind::dense);
  }
}

TEST(Spectral, DenseAndLanczosAgreeOn500Dofs) {
  const auto a = well_operator(500);
  Vector m(500);
  for (int i = 0; i < 500; ++i) m[i] = 1.0 + 0.5 * std::sin(0.1 * i);
  SolveOptions o;
  o.k = 12;
  o.want_vectors = true;
  const auto dense = solve_pencil(a, diagonal(m), o);
  o.force_lanczos = true;
  const auto lanczos = solve_pencil(a, diagonal(m), o);
  ASSERT_LT(dense.eigenvalues[0], 0.0);
  for (int i = 0; i < o.k; ++i)
    EXPECT_NEAR(lanczos.eigenvalues[i], dense.eigenvalues[i], 1e-8 * std::max(1.0, std::abs(dense.eigenvalues[i])));
  EXPECT_LE(lanczos.max_residual, kResidualBound);
  // M-orthonormal Ritz vectors.
  const Matrix v = *lanczos.eigenvectors;
  EXPECT_LT((v.transpose() * diagonal(m) * v - Matrix::Identity(o.k, o.k)).norm(), 1e-8);
}

TEST(Spectral, DenseAndLanczosAgreeOnTheCatenoidAreaForm) {
  const auto form = assemble_area_form(immersed(BuiltinKind::critical_catenoid, 12));
  ASSERT_GT(form.reduced_dim(), 400);
  ASSERT_LT(form.reduced_dim(), 2000);
  SolveOptions o;
  o.k = 10;
  const auto dense = solve_spectrum(form, o);
  o.force_lanczos = true;
  const auto lanczos = solve_spectrum(form, o);
  for (int i = 0; i < o.k; ++i)
    EXPECT_NEAR(lanczos.eigenvalues[i], dense.eigenvalues[i], 1e-8 * std::max(1.0, std::abs(dense.eigenvalues[i])));
}

TEST(Spectral, Errors) {
  SolveOptions o;
  o.k = 11;
  EXPECT_THROW(solve_pencil(identity(10), identity(10), o), DimensionError);
  o.k = 2;
  EXPECT_THROW(solve_pencil(identity(10), identity(9), o), DimensionError);
  o.k = 0;
  EXPECT_THROW(solve_pencil(identity(10), identity(10), o), DimensionError);
}

TEST(Spectral, FlatDiskMatchesBesselRoot) {
  const double s = oracle::disk_robin_root();
  EXPECT_NEAR(s * oracle::bessel_i1(s), oracle::bessel_i0(s), 1e-12);
  const auto sp = solve_spectrum(assemble_area_form(immersed(BuiltinKind::flat_disk, 16)));
  const double expected = -s * s;
  EXPECT_NEAR(sp.eigenvalues[0], expected, 1e-2 * std::abs(expected));
  const auto c = classify_spectrum(sp);
  EXPECT_EQ(c.index, 1);
  EXPECT_EQ(c.nullity, 2);
}

TEST(Spectral, CatenoidMatchesRotationalOracle) {
  const auto ref = oracle::catenoid_eigenvalues(8);
  // Four negative modes, then the rotation pair at zero.
  ASSERT_LT(ref[3], -1.0);
  ASSERT_NEAR(ref[4], 0.0, 1e-4);
  SolveOptions o;
  o.k = 8;
  const auto sp = solve_spectrum(assemble_area_form(immersed(BuiltinKind::critical_catenoid, 24)), o);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(sp.eigenvalues[i], ref[i], 2e-2 * std::abs(ref[i])) << i;
  for (int i = 4; i < 6; ++i) EXPECT_NEAR(sp.eigenvalues[i], ref[i], 2e-2) << i;
  EXPECT_NEAR(sp.eigenvalues[6], ref[6], 2e-2 * std::abs(ref[6]));
}

TEST(Classification, CountsAndAmbiguity) {
  Spectrum s;
  s.eigenvalues = Vector::LinSpaced(6, -2.0, 3.0);  // -2 -1 0 1 2 3
  s.tol_zero = 1e-3;
  s.reduced_dim = 6;
  auto c = classify_spectrum(s);
  EXPECT_EQ(c.index, 2);
  EXPECT_EQ(c.nullity, 1);
  EXPECT_FALSE(c.ambiguous);
  EXPECT_DOUBLE_EQ(c.nearest_nonzero, 1.0);

  s.eigenvalues[2] = -1.05e-3;
  c = classify_spectrum(s);
  EXPECT_TRUE(c.ambiguous);
  EXPECT_FALSE(c.warning.empty());
  EXPECT_EQ(c.index, 3);

  EXPECT_DOUBLE_EQ(default_tol_zero(s.eigenvalues), 2e-3);
  EXPECT_DOUBLE_EQ(default_tol_zero(Vector::Ones(3)), 1e-9);
}

TEST(Classification, BetaCount) {
  Spectrum s;
  s.eigenvalues = (Vector(5) << -1.0, 0.0, 0.5, 1.0, 2.0).finished();
  s.tol_zero = 1e-6;
  s.reduced_dim = 10;
  EXPECT_EQ(beta_count(s, 0.0).beta, 2);
  EXPECT_EQ(beta_count(s, 1.0).beta, 4);
  EXPECT_FALSE(beta_count(s, 1.0).truncated);
  const auto all = beta_count(s, 5.0);
  EXPECT_EQ(all.beta, 5);
  EXPECT_TRUE(all.truncated);
}
