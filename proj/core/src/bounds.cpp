#include "fbms/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fbms/errors.hpp"

namespace fbms {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ParameterError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

namespace {

void check_topology(int g, int m) {
  if (g < 0) throw ParameterError("genus must be nonnegative");
  if (m < 1) throw ParameterError("boundary count must be positive");
}

}  // namespace

int upsilon(int g, int m) {
  check_topology(g, m);
  const int chi = 2 - 2 * g - m;
  if (chi > 0) return 0;
  if (chi == 0) return 1;
  return 6 * g - 6 + 3 * m;
}

RiemannRoch riemann_roch(int n_rank, int chi, int mu, bool with_hints) {
  if (n_rank < 1) throw RankError("bundle rank must be positive");
  if (with_hints && n_rank != 1) throw RankError("injectivity/surjectivity hints are only defined for rank 1");
  RiemannRoch r;
  r.index = n_rank * chi + mu;
  if (with_hints) {
    r.injective_hint = mu < 0;
    r.surjective_hint = mu + 2 * chi > 0;
  }
  r.maslov_antiholomorphic = 2 * chi;
  r.h0_difference = 3 * chi;
  r.obstruction_count = chi > 0 ? 0 : (chi == 0 ? 1 : -3 * chi);
  return r;
}

Rational acs_lower_bound(int g, int m) {
  check_topology(g, m);
  return Rational::make(2 * g + m - 1, 3);
}

AreaBoundReport geometric_area_bounds(const AreaBoundInput& in) {
  check_topology(in.g, in.m);
  if (!(in.area >= 0.0) || !(in.boundary_length >= 0.0)) throw SignError("area and boundary length must be nonnegative");
  AreaBoundReport r;
  r.regime = in.regime;
  constexpr double pi = std::numbers::pi;
  if (in.regime == AreaRegime::convex) {
    if (!(in.alpha > 0.0)) throw SignError("convex regime needs alpha > 0");
    if (!(in.c1 > 0.0)) throw SignError("c1 must be positive");
    const double a = 4.0 * pi / in.alpha * (in.g + in.m);
    const double b = 16.0 * pi / in.alpha * ((in.g + 3) / 2);
    r.cap = in.c1 * std::min(a, b);
    r.lhs = in.area;
    r.rhs = r.cap;
    r.margin = r.rhs - r.lhs;
    r.pass = r.margin >= 0.0;
    return r;
  }
  if (!(in.alpha >= 0.0) || !(in.kappa >= 0.0)) throw SignError("concave regime needs kappa >= 0 and alpha >= 0");
  const int chi = 2 - 2 * in.g - in.m;
  r.lhs = in.kappa * in.area + in.alpha * in.boundary_length;
  r.rhs = -2.0 * pi * chi;
  r.margin = r.rhs - r.lhs;
  if (chi > 0) {
    r.regime_inapplicable = true;
    r.pass = false;
    r.note = "right-hand side -2 pi chi is negative; no such surface exists under these hypotheses";
  } else {
    r.pass = r.margin >= 0.0;
  }
  return r;
}

bool BoundReport::pass() const {
  for (const auto& rec : records)
    if (rec.asserted && !rec.pass) return false;
  return true;
}

namespace {

InequalityRecord at_most(std::string name, double lhs, double rhs, double tol = 0.0, bool asserted = true) {
  InequalityRecord r;
  r.name = std::move(name);
  r.relation = "<=";
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.tolerance = tol;
  r.asserted = asserted;
  r.pass = r.margin >= -tol;
  return r;
}

}  // namespace

BoundReport verify_inequalities(const BoundInputs& in) {
  const int nv = in.num_vertices;
  const auto mismatch = [&](const char* what, int got) {
    if (got != nv)
      throw InputMismatchError(std::string(what) + " counts come from a mesh with " + std::to_string(got) +
                               " vertices, expected " + std::to_string(nv));
  };
  mismatch("area", in.area.num_vertices);
  mismatch("energy", in.energy.num_vertices);
  mismatch("tangential", in.tangential.num_vertices);
  mismatch("beta", in.beta_vertices);
  const auto& t = in.topology;
  if (t.euler_char != 2 - 2 * t.genus - t.boundary_count) throw InputMismatchError("inconsistent topology");

  BoundReport r;
  r.surface_id = in.surface_id;
  r.topology = t;
  r.ind_area = in.area.index;
  r.nul_area = in.area.nullity;
  r.ind_energy = in.energy.index;
  r.nul_energy = in.energy.nullity;
  r.nul_tangential = in.tangential.nullity;
  r.beta = in.beta;
  r.upsilon = upsilon(t.genus, t.boundary_count);
  r.acs_lower = acs_lower_bound(t.genus, t.boundary_count);
  r.area = in.area_measure;
  r.boundary_length = in.boundary_length;

  const int ua = r.ind_area, na = r.nul_area, ue = r.ind_energy, ne = r.nul_energy, nt = r.nul_tangential;
  const int ups = r.upsilon;
  r.records.push_back(at_most("sandwich_lower: ind_E <= ind_A", ue, ua));
  r.records.push_back(at_most("sandwich_upper: ind_A <= ind_E + upsilon", ua, ue + ups));
  r.records.push_back(at_most("nullity_lower: ind_E + nul_E - nul_ET <= ind_A + nul_A", ue + ne - nt, ua + na));
  r.records.push_back(at_most("nullity_upper: ind_A + nul_A <= ind_E + nul_E - nul_ET + upsilon", ua + na,
                              ue + ne - nt + ups));
  r.records.push_back(at_most("nullity_sandwich: |nul_A - (nul_E - nul_ET)| <= upsilon", std::abs(na - (ne - nt)), ups));
  r.records.push_back(at_most("robin_count: ind_E + nul_E <= beta", ue + ne, in.beta));

  constexpr double pi = std::numbers::pi;
  r.composite_cap = std::min(4.0 * pi * (t.genus + t.boundary_count), 16.0 * pi * ((t.genus + 3) / 2));
  r.composite_tight_c = std::max(0.0, (ua - ups) / r.composite_cap);
  if (in.c_empirical) {
    if (!(*in.c_empirical > 0.0)) throw ParameterError("c must be positive");
    r.composite_bound = *in.c_empirical * r.composite_cap + ups;
    r.records.push_back(at_most("composite_area_index: ind_A <= c min{4pi(g+m), 16pi[(g+3)/2]} + upsilon", ua,
                                *r.composite_bound, 0.0, in.composite_asserted));
  }
  {
    InequalityRecord rec;
    rec.name = "acs_lower: (2g+m-1)/3 <= ind_A";
    rec.relation = "<=";
    rec.lhs = r.acs_lower.value();
    rec.rhs = ua;
    rec.margin = rec.rhs - rec.lhs;
    rec.asserted = in.convex_euclidean;
    rec.pass = r.acs_lower.at_most(ua);
    r.records.push_back(rec);
  }
  if (in.closed_form) {
    ClosedFormInput cf = *in.closed_form;
    cf.area = in.area_measure;
    cf.rho = in.rho;
    r.closed_form = index_bound_closed_form(cf);
    // Consistency only: the constants are empirical estimates.
    r.records.push_back(at_most("heat_bound: ind_E + nul_E <= closed-form minimum", ue + ne, r.closed_form->bound, 0.0,
                                false));
  }
  return r;
}

nlohmann::json to_json(const Rational& r) {
  return {{"num", r.num}, {"den", r.den}, {"text", r.str()}, {"value", r.value()}};
}

nlohmann::json to_json(const RiemannRoch& r) {
  nlohmann::json j{{"index", r.index},
                   {"maslov_antiholomorphic", r.maslov_antiholomorphic},
                   {"h0_difference", r.h0_difference},
                   {"obstruction_count", r.obstruction_count}};
  j["injective_hint"] = r.injective_hint ? nlohmann::json(*r.injective_hint) : nlohmann::json(nullptr);
  j["surjective_hint"] = r.surjective_hint ? nlohmann::json(*r.surjective_hint) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const AreaBoundReport& r) {
  return {{"regime", r.regime == AreaRegime::convex ? "convex" : "concave"},
          {"cap", r.cap},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"margin", r.margin},
          {"pass", r.pass},
          {"regime_inapplicable", r.regime_inapplicable},
          {"note", r.note}};
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["surface_id"] = r.surface_id;
  j["topology"] = {{"genus", r.topology.genus}, {"boundary_count", r.topology.boundary_count},
                   {"euler_char", r.topology.euler_char}};
  j["ind_area"] = r.ind_area;
  j["nul_area"] = r.nul_area;
  j["ind_energy"] = r.ind_energy;
  j["nul_energy"] = r.nul_energy;
  j["nul_tangential"] = r.nul_tangential;
  j["beta"] = r.beta;
  j["upsilon"] = r.upsilon;
  j["acs_lower"] = to_json(r.acs_lower);
  j["area"] = r.area;
  j["boundary_length"] = r.boundary_length;
  j["composite_cap"] = r.composite_cap;
  j["composite_bound"] = r.composite_bound ? nlohmann::json(*r.composite_bound) : nlohmann::json(nullptr);
  j["composite_tight_c"] = r.composite_tight_c;
  if (r.closed_form)
    j["closed_form"] = {{"bound", r.closed_form->bound},
                        {"t_star", r.closed_form->t_star},
                        {"at_grid_boundary", r.closed_form->at_grid_boundary}};
  auto& recs = j["inequalities"] = nlohmann::json::array();
  for (const auto& rec : r.records)
    recs.push_back({{"name", rec.name},
                    {"relation", rec.relation},
                    {"lhs", rec.lhs},
                    {"rhs", rec.rhs},
                    {"margin", rec.margin},
                    {"tolerance", rec.tolerance},
                    {"asserted", rec.asserted},
                    {"pass", rec.pass}});
  j["pass"] = r.pass();
  return j;
}

std::string format_table(const BoundReport& r) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%s  g=%d m=%d chi=%d upsilon=%d\n", r.surface_id.c_str(), r.topology.genus,
                r.topology.boundary_count, r.topology.euler_char, r.upsilon);
  out << line;
  std::snprintf(line, sizeof line, "ind_A=%d nul_A=%d ind_E=%d nul_E=%d nul_ET=%d beta=%d\n", r.ind_area, r.nul_area,
                r.ind_energy, r.nul_energy, r.nul_tangential, r.beta);
  out << line;
  for (const auto& rec : r.records) {
    const char* status = rec.pass ? "PASS" : (rec.asserted ? "FAIL" : "info");
    std::snprintf(line, sizeof line, "  [%s] %-72s %12.6g %s %-12.6g margin %.6g\n", status, rec.name.c_str(), rec.lhs,
                  rec.relation.c_str(), rec.rhs, rec.margin);
    out << line;
  }
  return out.str();
}

}  // namespace fbms
