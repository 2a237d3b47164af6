#include <gtest/gtest.h>

#include <cmath>

#include "fbms/errors.hpp"
#include "fbms/heat.hpp"

using namespace fbms;

namespace {

Spectrum spectrum_of(std::initializer_list<double> values, int reduced_dim) {
  Spectrum s;
  s.eigenvalues = Vector(static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) s.eigenvalues[i++] = v;
  s.reduced_dim = reduced_dim;
  s.tol_zero = 1e-9;
  return s;
}

ImmersedSurface small_disk() {
  return ImmersedSurface(builtin_surface(BuiltinKind::flat_disk, 3), AmbientSpace::unit_ball());
}

}  // namespace

TEST(HeatTrace, Arithmetic) {
  const auto h = heat_trace(spectrum_of({1.0, 2.0}, 5), {1.0, 2.0});
  EXPECT_NEAR(h.values[0], std::exp(-1.0) + std::exp(-2.0), 1e-15);
  EXPECT_NEAR(h.values[1], std::exp(-2.0) + std::exp(-4.0), 1e-15);
  EXPECT_NEAR(h.remainder[0], 3 * std::exp(-2.0), 1e-15);
  EXPECT_EQ(h.terms, 2);
  EXPECT_TRUE(h.monotone_checked);
  EXPECT_TRUE(h.monotone);
  EXPECT_TRUE(h.log_convex);

  const auto full = heat_trace(spectrum_of({-1.0, 0.0, 3.0}, 3), default_t_grid());
  EXPECT_FALSE(full.monotone_checked);
  EXPECT_TRUE(full.log_convex);
  EXPECT_EQ(full.remainder.back(), 0.0);
}

TEST(HeatTrace, Grid) {
  const auto g = default_t_grid();
  ASSERT_EQ(g.size(), 32u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-3);
  EXPECT_NEAR(g.back(), 1e2, 1e-12);
  EXPECT_NEAR(g[1] / g[0], g[31] / g[30], 1e-12);
  EXPECT_THROW(default_t_grid(0), GridError);
  EXPECT_THROW(default_t_grid(4, 0.0, 1.0), GridError);
  const auto s = spectrum_of({1.0}, 1);
  EXPECT_THROW(heat_trace(s, {}), GridError);
  EXPECT_THROW(heat_trace(s, {1.0, 1.0}), GridError);
  EXPECT_THROW(heat_trace(s, {-1.0}), GridError);
}

TEST(HeatTrace, LowerBound) {
  const auto h = heat_trace(spectrum_of({0.0, 0.0, 1.0}, 3), default_t_grid());
  const auto ok = trace_lower_bound_check(h, 2, 0.0);
  EXPECT_TRUE(ok.pass);
  // k(t) = 2 + e^{-t} approaches the bound 2 at large t.
  EXPECT_GE(ok.worst_margin, 0.0);
  EXPECT_FALSE(trace_lower_bound_check(h, 4, 0.0).pass);
  EXPECT_TRUE(trace_lower_bound_check(h, 3, 1.0).pass);
}

TEST(KernelDomination, MassBoundHoldsWithNeumannScalarKernel) {
  const auto im = small_disk();
  const auto grid = default_t_grid(8);
  const auto r = kernel_domination_check(im, grid);
  EXPECT_EQ(r.alpha, 0.0);
  EXPECT_EQ(r.bundle_dofs, 3 * im.surface().num_vertices());
  ASSERT_EQ(r.points.size(), grid.size());
  EXPECT_TRUE(r.mass_pass);
  EXPECT_LT(r.small_t_mass_error, 1e-10);
  for (const auto& p : r.points) EXPECT_LE(p.max_row_sum, 1.0 + 1e-8);
  EXPECT_EQ(r.trace_factor, 1);
}

TEST(KernelDomination, SupremumCoefficientTradesMassForDomination) {
  DominationOptions o;
  o.alpha_override = 1.0;
  const auto r = kernel_domination_check(small_disk(), default_t_grid(8), o);
  EXPECT_TRUE(r.alpha_overridden);
  EXPECT_TRUE(r.domination_pass);
  EXPECT_FALSE(r.mass_pass);
}

TEST(KernelDomination, SizeLimit) {
  DominationOptions o;
  o.max_dofs = 10;
  EXPECT_THROW(kernel_domination_check(small_disk(), {1.0}, o), SizeError);
}
