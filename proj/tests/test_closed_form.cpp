#include <gtest/gtest.h>

#include <cmath>

#include "fbms/closed_form.hpp"
#include "fbms/errors.hpp"
#include "oracles.hpp"

using namespace fbms;

TEST(ClosedForm, FlatAmbientLimitIsExact) {
  ClosedFormInput in;
  in.area = 3.7;
  in.rho = 0.0;
  const auto r = index_bound_closed_form(in);
  EXPECT_EQ(r.bound, (in.n_amb - 2) * in.c2 * in.c2 * in.area);
  EXPECT_TRUE(r.at_grid_boundary);
}

TEST(ClosedForm, MatchesGridScan) {
  for (double rho : {0.5, 1.0, 2.0}) {
    for (double c1 : {0.3, 1.0}) {
      ClosedFormInput in;
      in.area = 2.0;
      in.rho = rho;
      in.c1 = c1;
      in.c2 = 1.0;
      const auto r = index_bound_closed_form(in);
      const auto scan = oracle::closed_form_grid_scan(in.area, rho, c1, 1.0, 3, in.t_lo, in.t_hi, 1000000);
      EXPECT_NEAR(r.bound, scan.value, 1e-6 * scan.value) << rho << " " << c1;
      EXPECT_LE(r.bound, scan.value * (1 + 1e-12));
      EXPECT_FALSE(r.at_grid_boundary);
    }
  }
}

TEST(ClosedForm, LogObjectiveMatchesDirectFormula) {
  ClosedFormInput in;
  in.rho = 1.0;
  in.c1 = 0.5;
  in.c2 = 2.0;
  in.n_amb = 4;
  for (double t : {1e-3, 0.1, 1.0, 10.0}) {
    const double d = 1 - std::exp(-in.c2 * t / (2 * in.c1));
    EXPECT_NEAR(closed_form_log_objective(in, t), std::log(2 * 4.0 * std::exp(t) / (d * d)), 1e-12);
  }
}

TEST(ClosedForm, HigherDimensions) {
  ClosedFormInput in;
  in.mode = BoundMode::dimN;
  in.n = 4;
  in.p_integral = 1.5;
  const auto r = index_bound_closed_form(in);
  // Direct scan of c2^{n/2} e^{2t} / (1 - e^{-4 c2 t / (n c1)})^{n/2} p.
  double best = INFINITY;
  for (int i = 0; i < 200000; ++i) {
    const double t = std::exp(std::log(1e-4) + (std::log(1e4) - std::log(1e-4)) * i / 199999.0);
    best = std::min(best, std::exp(2 * t) / std::pow(1 - std::exp(-t), 2) * 1.5);
  }
  EXPECT_NEAR(r.bound, best, 1e-5 * best);
  EXPECT_DOUBLE_EQ(betti_bound_evaluator(4, 1.5, 2.0), 3.0);
}

TEST(ClosedForm, EdgeCasesAndErrors) {
  ClosedFormInput in;
  in.area = 0.0;
  in.rho = 1.0;
  EXPECT_EQ(index_bound_closed_form(in).bound, 0.0);
  in.area = 1.0;
  in.rho = -1.0;
  EXPECT_THROW(index_bound_closed_form(in), ParameterError);
  in.rho = 0.0;
  in.c1 = 0.0;
  EXPECT_THROW(index_bound_closed_form(in), ParameterError);
  in.c1 = 1.0;
  in.n_amb = 2;
  EXPECT_THROW(index_bound_closed_form(in), ParameterError);
  EXPECT_THROW(betti_bound_evaluator(2, 1.0, 1.0), ParameterError);
  EXPECT_THROW(betti_bound_evaluator(3, 1.0, 0.0), ParameterError);
}
