#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "fbms/bounds.hpp"
#include "fbms/errors.hpp"

using namespace fbms;

TEST(Combinatorics, TableOf200Cases) {
  int cases = 0;
  for (int g = 0; g < 20; ++g) {
    for (int m = 1; m <= 10; ++m, ++cases) {
      const int chi = 2 - 2 * g - m;
      int expected = 0;
      if (chi == 0) expected = 1;
      if (chi < 0) expected = 6 * g - 6 + 3 * m;
      EXPECT_EQ(upsilon(g, m), expected) << g << "," << m;

      const auto rr = riemann_roch(1, chi, 2 * chi);
      EXPECT_EQ(rr.h0_difference, 3 * chi);
      EXPECT_EQ(rr.index, 3 * chi);
      EXPECT_EQ(rr.obstruction_count, expected);
      EXPECT_EQ(*rr.surjective_hint, chi > 0);

      const auto q = acs_lower_bound(g, m);
      EXPECT_GT(q.den, 0);
      EXPECT_EQ(std::gcd(q.num, q.den), q.num == 0 ? q.den : 1);
      EXPECT_EQ(3 * q.num, (2 * g + m - 1) * q.den);
    }
  }
  EXPECT_EQ(cases, 200);
  EXPECT_EQ(upsilon(0, 1), 0);
  EXPECT_EQ(upsilon(0, 2), 1);
  EXPECT_EQ(upsilon(1, 1), 3);
  EXPECT_EQ(acs_lower_bound(0, 2).str(), "1/3");
  EXPECT_EQ(acs_lower_bound(1, 2).str(), "1");
}

TEST(Combinatorics, Errors) {
  EXPECT_THROW(upsilon(-1, 1), ParameterError);
  EXPECT_THROW(upsilon(0, 0), ParameterError);
  EXPECT_THROW(riemann_roch(2, 1, 0), RankError);
  EXPECT_NO_THROW(riemann_roch(2, 1, 0, false));
  EXPECT_EQ(riemann_roch(3, -1, 4, false).index, 1);
  EXPECT_THROW(Rational::make(1, 0), ParameterError);
  EXPECT_EQ(Rational::make(4, -6), (Rational{-2, 3}));
}

TEST(AreaBounds, Convex) {
  AreaBoundInput in;
  in.g = 1;
  in.m = 2;
  in.alpha = 2.0;
  in.area = 10.0;
  const auto r = geometric_area_bounds(in);
  // min{4 pi 3 / 2, 16 pi 2 / 2}
  EXPECT_NEAR(r.cap, 6 * std::numbers::pi, 1e-12);
  EXPECT_TRUE(r.pass);
  in.area = 20.0;
  EXPECT_FALSE(geometric_area_bounds(in).pass);
  in.alpha = 0.0;
  EXPECT_THROW(geometric_area_bounds(in), SignError);
}

TEST(AreaBounds, Concave) {
  AreaBoundInput in;
  in.regime = AreaRegime::concave;
  in.g = 0;
  in.m = 3;
  in.alpha = 0.5;
  in.kappa = 1.0;
  in.area = 1.0;
  in.boundary_length = 4.0;
  const auto r = geometric_area_bounds(in);
  EXPECT_DOUBLE_EQ(r.lhs, 3.0);
  EXPECT_NEAR(r.rhs, 2 * std::numbers::pi, 1e-12);
  EXPECT_TRUE(r.pass);
  in.m = 1;
  const auto disk = geometric_area_bounds(in);
  EXPECT_TRUE(disk.regime_inapplicable);
  EXPECT_FALSE(disk.pass);
  in.kappa = -1.0;
  EXPECT_THROW(geometric_area_bounds(in), SignError);
}

namespace {

BoundInputs catenoid_like() {
  BoundInputs in;
  in.surface_id = "test";
  in.num_vertices = 100;
  in.topology = {0, 2, 0};
  in.area = {4, 2, 100};
  in.energy = {3, 4, 100};
  in.tangential = {0, 1, 100};
  in.beta = 7;
  in.beta_vertices = 100;
  in.area_measure = 2.0;
  in.convex_euclidean = true;
  return in;
}

const InequalityRecord& find(const BoundReport& r, const std::string& prefix) {
  for (const auto& rec : r.records)
    if (rec.name.rfind(prefix, 0) == 0) return rec;
  throw std::runtime_error("no record " + prefix);
}

}  // namespace

TEST(Inequalities, AllHoldForConsistentCounts) {
  const auto r = verify_inequalities(catenoid_like());
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.upsilon, 1);
  EXPECT_EQ(find(r, "sandwich_upper").margin, 0.0);
  EXPECT_TRUE(find(r, "acs_lower").asserted);
  EXPECT_FALSE(r.composite_bound.has_value());
  EXPECT_NEAR(r.composite_cap, 8 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(r.composite_tight_c, 3 / (8 * std::numbers::pi), 1e-12);
  EXPECT_FALSE(format_table(r).empty());
  EXPECT_TRUE(to_json(r)["pass"].get<bool>());
}

TEST(Inequalities, DetectsViolations) {
  auto in = catenoid_like();
  in.area.index = 6;  // exceeds ind_E + upsilon
  auto r = verify_inequalities(in);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(find(r, "sandwich_upper").pass);
  EXPECT_TRUE(find(r, "sandwich_lower").pass);

  in = catenoid_like();
  in.beta = 6;
  EXPECT_FALSE(find(verify_inequalities(in), "robin_count").pass);

  in = catenoid_like();
  in.c_empirical = 0.01;
  r = verify_inequalities(in);
  EXPECT_FALSE(find(r, "composite_area_index").pass);
  EXPECT_FALSE(r.pass());
  in.composite_asserted = false;
  EXPECT_TRUE(verify_inequalities(in).pass());
}

TEST(Inequalities, MismatchedInputs) {
  auto in = catenoid_like();
  in.energy.num_vertices = 99;
  EXPECT_THROW(verify_inequalities(in), InputMismatchError);
  in = catenoid_like();
  in.topology.euler_char = 1;
  EXPECT_THROW(verify_inequalities(in), InputMismatchError);
}

TEST(Inequalities, ClosedFormIsInformational) {
  auto in = catenoid_like();
  in.rho = 0.0;
  in.closed_form = ClosedFormInput{};
  const auto r = verify_inequalities(in);
  ASSERT_TRUE(r.closed_form.has_value());
  EXPECT_DOUBLE_EQ(r.closed_form->bound, 2.0);
  EXPECT_FALSE(find(r, "heat_bound").asserted);
  EXPECT_TRUE(r.pass());
}
