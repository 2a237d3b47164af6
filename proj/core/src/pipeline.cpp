#include "fbms/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fbms/bounds.hpp"
#include "fbms/errors.hpp"
#include "fbms/heat.hpp"
#include "fbms/sobolev.hpp"

namespace fbms {

std::string_view version() { return FBMS_VERSION; }

namespace {

const std::vector<std::pair<Subcommand, std::string_view>> kNames = {
    {Subcommand::topo, "topo"},       {Subcommand::validate, "validate"}, {Subcommand::spectrum, "spectrum"},
    {Subcommand::index, "index"},     {Subcommand::compare, "compare"},   {Subcommand::heat, "heat"},
    {Subcommand::sobolev, "sobolev"}, {Subcommand::bounds, "bounds"},     {Subcommand::report, "report"}};

}  // namespace

std::string_view to_string(Subcommand sub) {
  for (const auto& [s, n] : kNames)
    if (s == sub) return n;
  return "?";
}

std::optional<Subcommand> subcommand_from_string(std::string_view name) {
  for (const auto& [s, n] : kNames)
    if (n == name) return s;
  return std::nullopt;
}

const std::vector<Subcommand>& all_subcommands() {
  static const std::vector<Subcommand> subs = [] {
    std::vector<Subcommand> v;
    for (const auto& [s, n] : kNames) v.push_back(s);
    return v;
  }();
  return subs;
}

TriangulatedSurface load_surface(const RunConfig& config) {
  validate_config(config);
  TriangulatedSurface base = config.builtin
                                 ? builtin_surface(*config.builtin,
                                                   config.resolution.value_or(default_resolution(*config.builtin)))
                                 : load_mesh(*config.mesh, config.format);
  return config.refine > 0 ? refine_mesh(base, config.refine) : base;
}

std::string surface_id(const RunConfig& config) {
  if (config.builtin)
    return "builtin:" + std::string(to_string(*config.builtin)) + ":r" +
           std::to_string(config.resolution.value_or(default_resolution(*config.builtin))) + ":l" +
           std::to_string(config.refine);
  return "mesh:" + config.mesh->filename().string() + ":l" + std::to_string(config.refine);
}

namespace {

using json = nlohmann::json;

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

struct Partial {
  json result = json::object();
  std::ostringstream text;
  std::vector<Assertion> assertions;
  std::vector<std::string> warnings;
  std::string csv;

  void check(std::string name, bool pass, bool asserted = true) {
    assertions.push_back({std::move(name), pass, asserted});
  }
};

class Session {
 public:
  explicit Session(const RunConfig& cfg)
      : cfg_(cfg), surface_(load_surface(cfg)), ambient_(parse_ambient(cfg.ambient)), id_(surface_id(cfg)) {
    aopts_.tol_min = cfg.tol_min;
    aopts_.tol_orth = cfg.tol_orth;
    std::vector<Vec3> probes;
    for (int v = 0; v < surface_.num_vertices(); ++v)
      if (surface_.is_boundary_vertex(v)) probes.push_back(surface_.vertices()[v]);
    bounds_ = ambient_bounds(ambient_, probes);
  }

  const RunConfig& cfg() const { return cfg_; }
  const TriangulatedSurface& surface() const { return surface_; }
  const AmbientSpace& ambient() const { return ambient_; }
  const std::string& id() const { return id_; }
  const AmbientBounds& bounds() const { return bounds_; }
  const AssemblyOptions& assembly() const { return aopts_; }

  const ImmersedSurface& immersed() {
    if (!immersed_) immersed_.emplace(surface_, ambient_);
    return *immersed_;
  }

  FormAssembly assemble(FormKind kind) {
    switch (kind) {
      case FormKind::area: return assemble_area_form(immersed(), aopts_);
      case FormKind::energy: return assemble_energy_form(immersed(), aopts_);
      case FormKind::energy_tangential: return assemble_tangential_form(immersed(), aopts_);
      case FormKind::robin_bundle: return assemble_robin_bundle_form(immersed(), aopts_);
      case FormKind::robin_scalar: return assemble_scalar_robin_form(immersed(), scalar_alpha(), aopts_);
    }
    throw ParameterError("unknown form");
  }

  double scalar_alpha() const { return cfg_.alpha_override ? *cfg_.alpha_override : bounds_.alpha; }

  /// k lowest eigenpairs (k = 0: the whole spectrum when it is small enough for the dense solver).
  Spectrum solve(FormKind kind, std::optional<double> tol_zero, int k) {
    const FormAssembly form = assemble(kind);
    SolveOptions o;
    const int dim = form.reduced_dim();
    o.k = k == 0 ? (dim <= o.dense_threshold ? dim : cfg_.k) : k;
    o.k = std::min(o.k, dim);
    o.tol_zero = tol_zero;
    o.rho = bounds_.rho;
    o.seed = cfg_.seed;
    Spectrum s = solve_spectrum(form, o);
    s.mesh_scale = surface_.mean_edge_length();
    return s;
  }

  const Spectrum& area_spectrum() {
    if (!area_) area_ = solve(FormKind::area, cfg_.tol_zero, cfg_.k);
    return *area_;
  }

  /// Classification tolerance shared by every form on this surface.
  double shared_tol() { return cfg_.tol_zero ? *cfg_.tol_zero : area_spectrum().tol_zero; }

 private:
  const RunConfig& cfg_;
  TriangulatedSurface surface_;
  AmbientSpace ambient_;
  std::string id_;
  AmbientBounds bounds_;
  AssemblyOptions aopts_;
  std::optional<ImmersedSurface> immersed_;
  std::optional<Spectrum> area_;
};

std::vector<FormKind> requested_forms(const std::string& form) {
  if (form == "area") return {FormKind::area};
  if (form == "energy") return {FormKind::energy};
  if (form == "tangential") return {FormKind::energy_tangential};
  if (form == "robin") return {FormKind::robin_bundle};
  return {FormKind::area, FormKind::energy, FormKind::energy_tangential, FormKind::robin_bundle};
}

json to_json(const Classification& c) {
  return {{"index", c.index},
          {"nullity", c.nullity},
          {"null_cluster_max", c.null_cluster_max},
          {"nearest_nonzero", finite_or_null(c.nearest_nonzero)},
          {"ambiguous", c.ambiguous},
          {"warning", c.warning}};
}

json to_json(const Spectrum& s, FormKind kind) {
  json ev = json::array();
  for (double l : s.eigenvalues) ev.push_back(l);
  return {{"form", to_string(kind)},
          {"eigenvalues", ev},
          {"tol_zero", s.tol_zero},
          {"mesh_scale", s.mesh_scale},
          {"reduced_dim", s.reduced_dim},
          {"computed", s.size()},
          {"truncated", s.truncated()},
          {"solver", to_string(s.solver)},
          {"shift", s.shift},
          {"max_residual", s.max_residual},
          {"classification", to_json(classify_spectrum(s))}};
}

json to_json(const TopologyInvariants& t) {
  return {{"genus", t.genus}, {"boundary_count", t.boundary_count}, {"euler_char", t.euler_char}};
}

json to_json(const FreeBoundaryReport& r) {
  return {{"mean_curvature_residual", finite_or_null(r.mean_curvature_residual)},
          {"orthogonality_residual", finite_or_null(r.orthogonality_residual)},
          {"boundary_residual", finite_or_null(r.boundary_residual)},
          {"tol_min", r.tol_min},
          {"tol_orth", r.tol_orth},
          {"tol_bdry", r.tol_bdry},
          {"pass", r.pass}};
}

json to_json(const ComparisonResult& r) {
  return {{"e_val", r.e_val},
          {"a_val", r.a_val},
          {"defect_integral", r.defect_integral},
          {"identity_residual", r.identity_residual}};
}

json to_json(const RatioStatistics& s) {
  return {{"samples", s.samples}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}};
}

json to_json(const ClosedFormResult& r) {
  return {{"bound", r.bound}, {"t_star", r.t_star}, {"at_grid_boundary", r.at_grid_boundary},
          {"iterations", r.iterations}};
}

// Extremes of the boundary principal curvatures over the boundary vertices.
std::pair<double, double> boundary_curvature_range(const Session& s) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  if (!s.ambient().has_boundary()) return {0.0, 0.0};
  for (int v = 0; v < s.surface().num_vertices(); ++v) {
    if (!s.surface().is_boundary_vertex(v)) continue;
    const Vec3& x = s.surface().vertices()[v];
    const Vec3 w = s.ambient().boundary_normal(x);
    const Vec3 seed = std::abs(w[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 a = seed.cross(w).normalized();
    const Vec3 b = w.cross(a);
    const Mat3 S = s.ambient().shape_operator(x);
    Eigen::Matrix2d m;
    m << a.dot(S * a), a.dot(S * b), b.dot(S * a), b.dot(S * b);
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(0.5 * (m + m.transpose())).eigenvalues();
    lo = std::min(lo, ev[0]);
    hi = std::max(hi, ev[1]);
  }
  return {lo, hi};
}

Vector preset_field(Session& s, const std::string& name) {
  const auto& x = s.surface().vertices();
  Vector phi(s.surface().num_vertices());
  if (name == "bump") return random_bump_field(s.immersed(), s.cfg().seed, 0);
  for (int v = 0; v < phi.size(); ++v) {
    if (name == "x") phi[v] = x[v][0];
    else if (name == "y") phi[v] = x[v][1];
    else phi[v] = x[v][0] * x[v][0] - x[v][1] * x[v][1];
  }
  return phi;
}

// ---------------------------------------------------------------------------

void run_topo(Session& s, Partial& p) {
  const auto t = compute_topology(s.surface());
  const int ups = upsilon(t.genus, t.boundary_count);
  const auto rr = riemann_roch(1, t.euler_char, 2 * t.euler_char);
  const auto acs = acs_lower_bound(t.genus, t.boundary_count);
  p.result["topology"] = to_json(t);
  p.result["upsilon"] = ups;
  p.result["riemann_roch"] = fbms::to_json(rr);
  p.result["acs_lower"] = fbms::to_json(acs);
  p.result["area"] = s.surface().total_area();
  p.result["boundary_length"] = s.surface().boundary_length();
  p.text << "g=" << t.genus << " m=" << t.boundary_count << " chi=" << t.euler_char << " upsilon=" << ups << "\n";
  p.text << "riemann-roch (rank 1, mu = 2 chi): index " << rr.index << ", h0 difference " << rr.h0_difference
         << ", obstruction count " << rr.obstruction_count << "\n";
  p.text << "lower index bound (2g+m-1)/3 = " << acs.str() << "\n";
  p.check("upsilon_matches_obstruction_count", ups == rr.obstruction_count);
}

void run_validate(Session& s, Partial& p) {
  const auto r = validate_free_boundary(s.immersed(), s.cfg().tol_min, s.cfg().tol_orth);
  p.result["validation"] = to_json(r);
  p.text << "mean curvature residual " << fmt("%.3e", r.mean_curvature_residual) << " (tol "
         << fmt("%.1e", r.tol_min) << ")\n";
  p.text << "orthogonality residual  " << fmt("%.3e", r.orthogonality_residual) << " (tol "
         << fmt("%.1e", r.tol_orth) << ")\n";
  p.text << "boundary residual       " << fmt("%.3e", r.boundary_residual) << "\n";
  p.text << (r.pass ? "free boundary: PASS\n" : "free boundary: FAIL\n");
  p.check("free_boundary", r.pass);
}

void run_spectrum(Session& s, Partial& p, bool verbose) {
  const double tol = s.shared_tol();
  json spectra = json::array();
  for (FormKind kind : requested_forms(s.cfg().form)) {
    const Spectrum sp = kind == FormKind::area && !s.cfg().tol_zero ? s.area_spectrum() : s.solve(kind, tol, s.cfg().k);
    json j = to_json(sp, kind);
    const auto c = classify_spectrum(sp);
    if (!c.warning.empty()) p.warnings.push_back(std::string(to_string(kind)) + ": " + c.warning);
    p.text << to_string(kind) << ": index " << c.index << " nullity " << c.nullity << " (tol_zero "
           << fmt("%.3e", sp.tol_zero) << ", " << sp.size() << "/" << sp.reduced_dim << " eigenvalues, "
           << to_string(sp.solver) << ")\n";
    if (kind == FormKind::robin_bundle) {
      const auto b = beta_count(sp, s.bounds().rho);
      j["beta"] = b.beta;
      j["beta_truncated"] = b.truncated;
      if (!b.warning.empty()) p.warnings.push_back(b.warning);
      p.text << "  beta(rho = " << s.bounds().rho << ") = " << b.beta << "\n";
    }
    if (verbose) {
      p.text << "  eigenvalues:";
      for (double l : sp.eigenvalues) p.text << " " << fmt("%.8g", l);
      p.text << "\n";
    }
    spectra.push_back(j);
  }
  p.result["tol_zero"] = tol;
  p.result["rho"] = s.bounds().rho;
  p.result["spectra"] = spectra;
}

void run_compare(Session& s, Partial& p) {
  const auto& im = s.immersed();
  const Vector phi = preset_field(s, s.cfg().xi);
  const SectionField xi = normal_section(im, phi);
  const SectionField zero =
      make_section(im, std::vector<Vec3>(s.surface().num_vertices(), Vec3::Zero()), SectionKind::tangential);
  const auto r0 = comparison_defect(im, xi, zero, s.assembly());
  const double scale0 = std::max({std::abs(r0.e_val), std::abs(r0.a_val), 1.0});
  p.result["xi"] = s.cfg().xi;
  p.result["x_zero"] = to_json(r0);
  p.text << "X = 0: e " << fmt("%.8g", r0.e_val) << "  a " << fmt("%.8g", r0.a_val) << "  defect "
         << fmt("%.8g", r0.defect_integral) << "  residual " << fmt("%.3e", r0.identity_residual) << "\n";
  p.check("identity_residual_x0", std::abs(r0.identity_residual) <= 1e-2 * scale0);
  p.check("energy_dominates_area_x0", r0.e_val >= r0.a_val - 1e-2 * scale0);

  if (compute_topology(s.surface()).euler_char != 1) {
    p.warnings.push_back("reparametrization solve skipped: it is only set up on disks");
    p.result["dbar"] = nullptr;
    return;
  }
  const auto sol = solve_dbar_reparametrization(im, xi);
  const auto r1 = comparison_defect(im, xi, sol.X, s.assembly());
  const double scale1 = std::max({std::abs(r1.e_val), std::abs(r1.a_val), 1.0});
  json d = to_json(r1);
  d["solve_residual"] = sol.residual;
  d["source_norm"] = sol.source_norm;
  p.result["dbar"] = d;
  p.text << "X = dbar solve: e " << fmt("%.8g", r1.e_val) << "  a " << fmt("%.8g", r1.a_val) << "  defect "
         << fmt("%.3e", r1.defect_integral) << "  solve residual " << fmt("%.3e", sol.residual) << "\n";
  p.check("identity_residual_dbar", std::abs(r1.identity_residual) <= 1e-2 * scale1);
  p.check("defect_vanishes_dbar", r1.defect_integral <= 1e-2 * scale1);
  p.check("energy_equals_area_dbar", std::abs(r1.e_val - r1.a_val) <= 1e-2 * scale1);
}

void run_heat(Session& s, Partial& p) {
  const auto& cfg = s.cfg();
  const auto grid = default_t_grid(cfg.t_count, cfg.t_lo, cfg.t_hi);
  const double tol = s.shared_tol();
  const double rho = s.bounds().rho;
  const Spectrum bundle = s.solve(FormKind::robin_bundle, tol, 0);
  const Spectrum scalar = s.solve(FormKind::robin_scalar, tol, 0);
  const Spectrum energy = s.solve(FormKind::energy, tol, cfg.k);
  const auto hb = heat_trace(bundle, grid, TraceSource::bundle_robin);
  const auto hs = heat_trace(scalar, grid, TraceSource::scalar_robin);
  const auto beta = beta_count(bundle, rho);
  const auto lower = trace_lower_bound_check(hb, beta.beta, rho);
  const auto ce = classify_spectrum(energy);

  p.result["rho"] = rho;
  p.result["alpha"] = s.scalar_alpha();
  p.result["alpha_overridden"] = cfg.alpha_override.has_value();
  p.result["tol_zero"] = tol;
  p.result["beta"] = beta.beta;
  p.result["ind_energy"] = ce.index;
  p.result["nul_energy"] = ce.nullity;
  auto trace_json = [](const HeatTrace& h) {
    return json{{"source", to_string(h.source)}, {"values", h.values},   {"remainder", h.remainder},
                {"terms", h.terms},              {"reduced_dim", h.reduced_dim}, {"monotone_checked", h.monotone_checked},
                {"monotone", h.monotone},        {"log_convex", h.log_convex},   {"note", h.note}};
  };
  p.result["t_grid"] = grid;
  p.result["bundle_trace"] = trace_json(hb);
  p.result["scalar_trace"] = trace_json(hs);
  p.result["trace_lower_bound"] = {{"lower", lower.lower}, {"worst_margin", lower.worst_margin}, {"pass", lower.pass}};
  if (beta.truncated) p.warnings.push_back(beta.warning);

  p.text << "beta = " << beta.beta << " (rho = " << rho << "), ind_E + nul_E = " << ce.index + ce.nullity << "\n";
  p.text << "beta e^{-rho t} <= k_E(t): " << (lower.pass ? "PASS" : "FAIL") << " (worst margin "
         << fmt("%.3e", lower.worst_margin) << ")\n";
  p.check("trace_lower_bound", lower.pass);
  p.check("robin_count", ce.index + ce.nullity <= beta.beta);
  p.check("log_convex_bundle_trace", hb.log_convex);
  p.check("log_convex_scalar_trace", hs.log_convex);
  if (hb.monotone_checked) p.check("monotone_bundle_trace", hb.monotone);
  if (hs.monotone_checked) p.check("monotone_scalar_trace", hs.monotone);

  std::optional<DominationReport> dom;
  if (3 * s.surface().num_vertices() <= cfg.max_heat_dofs) {
    DominationOptions o;
    o.max_dofs = cfg.max_heat_dofs;
    o.alpha_override = cfg.alpha_override;
    o.ambient_dim = s.ambient().dimension();
    o.assembly = s.assembly();
    dom = kernel_domination_check(s.immersed(), grid, o);
    json pts = json::array();
    for (const auto& q : dom->points)
      pts.push_back({{"t", q.t},
                     {"max_excess", q.max_excess},
                     {"worst_pair", {q.worst_x, q.worst_y}},
                     {"max_row_sum", q.max_row_sum},
                     {"min_row_sum", q.min_row_sum},
                     {"trace_bundle", q.trace_bundle},
                     {"trace_scalar", q.trace_scalar},
                     {"domination", q.domination},
                     {"mass_bound", q.mass_bound},
                     {"trace_ratio", q.trace_ratio}});
    p.result["kernel_domination"] = {{"alpha", dom->alpha},
                                     {"slack", dom->slack},
                                     {"scalar_dofs", dom->scalar_dofs},
                                     {"bundle_dofs", dom->bundle_dofs},
                                     {"trace_factor", dom->trace_factor},
                                     {"small_t_mass_error", dom->small_t_mass_error},
                                     {"domination_pass", dom->domination_pass},
                                     {"mass_pass", dom->mass_pass},
                                     {"trace_ratio_pass", dom->trace_ratio_pass},
                                     {"points", pts}};
    p.text << "|K_E| <= K: " << (dom->domination_pass ? "PASS" : "FAIL") << "  int K dA <= 1: "
           << (dom->mass_pass ? "PASS" : "FAIL") << "  k_E <= (n-2) k: " << (dom->trace_ratio_pass ? "PASS" : "FAIL")
           << " (alpha = " << dom->alpha << ")\n";
    p.check("kernel_domination", dom->domination_pass);
    p.check("mass_bound", dom->mass_pass);
    p.check("small_t_mass", dom->small_t_mass_error <= 1e-2);
    p.check("trace_ratio", dom->trace_ratio_pass, false);
  } else {
    p.result["kernel_domination"] = nullptr;
    p.warnings.push_back("kernel domination skipped: " + std::to_string(3 * s.surface().num_vertices()) +
                         " bundle dofs exceed max_heat_dofs");
  }

  std::ostringstream csv;
  csv << "t,k_E,k,beta_exp_rho_t,remainder_E,trace_lower_bound_pass,max_excess,max_row_sum,domination_pass,"
         "mass_pass\n";
  char line[512];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const DominationPoint* q = dom ? &dom->points[i] : nullptr;
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%s,%s,%s,%s\n", grid[i], hb.values[i],
                  hs.values[i], lower.lower[i], hb.remainder[i], hb.values[i] >= lower.lower[i] ? 1 : 0,
                  q ? fmt("%.17g", q->max_excess).c_str() : "", q ? fmt("%.17g", q->max_row_sum).c_str() : "",
                  q ? (q->domination ? "1" : "0") : "", q ? (q->mass_bound ? "1" : "0") : "");
    csv << line;
  }
  p.csv = csv.str();
}

void run_sobolev(Session& s, Partial& p) {
  const auto& im = s.immersed();
  const auto ec = empirical_constants(im, s.cfg().samples, s.cfg().seed);
  const Vector one = Vector::Ones(s.surface().num_vertices());
  const auto s1 = sobolev_check(im, one);
  const auto b1 = boundary_trace_check(im, one);
  const Vector phi0 = random_bump_field(im, s.cfg().seed, 0);
  const double r0 = sobolev_check(im, phi0).ratio;
  const double r2 = sobolev_check(im, 2.0 * phi0).ratio;
  const double area = s.surface().total_area();

  p.result["seed"] = s.cfg().seed;
  p.result["sobolev"] = to_json(ec.sobolev);
  p.result["trace"] = to_json(ec.trace);
  p.result["interpolation"] = to_json(ec.interpolation);
  p.result["empirical"] = {{"c", ec.c}, {"c1", ec.c1}, {"c2", ec.c2}, {"trace_constant", ec.trace_constant},
                           {"provenance", "empirical"}};
  p.result["constant_field"] = {{"lhs", s1.lhs},
                                {"rhs", s1.rhs_gradient_part + s1.rhs_l1_part},
                                {"ratio", s1.ratio},
                                {"boundary_l1", b1.boundary_l1},
                                {"interior_terms", b1.interior_terms},
                                {"trace_ratio", b1.ratio}};
  p.result["note"] =
      "the constants c, c1, c2 in the inequalities are non-constructive; the values reported are sup ratios over "
      "seeded random fields, not the constants themselves";
  p.text << "sobolev ratio: max " << fmt("%.6f", ec.sobolev.max) << " mean " << fmt("%.6f", ec.sobolev.mean) << " over "
         << ec.sobolev.samples << " fields (seed " << s.cfg().seed << ")\n";
  p.text << "trace ratio:   max " << fmt("%.6f", ec.trace.max) << " mean " << fmt("%.6f", ec.trace.mean) << "\n";
  p.text << "phi = 1: lhs " << fmt("%.6f", s1.lhs) << " ratio " << fmt("%.6f", s1.ratio) << " boundary/interior "
         << fmt("%.6f", b1.ratio) << "\n";
  p.text << "empirical constants only; the constants in the inequalities are not computable from the mesh\n";

  bool finite = true;
  for (const auto* st : {&ec.sobolev, &ec.trace, &ec.interpolation})
    finite = finite && std::isfinite(st->max) && st->min >= 0.0 && st->samples > 0;
  p.check("finite_ratios", finite);
  p.check("scale_invariance", std::abs(r2 - r0) <= 1e-12 * std::abs(r0));
  p.check("constant_field_lhs", std::abs(s1.lhs - std::sqrt(area)) <= 1e-12 * (1.0 + std::sqrt(area)));
  p.check("constant_field_boundary",
          std::abs(b1.boundary_l1 - s.surface().boundary_length()) <= 1e-12 * (1.0 + b1.boundary_l1));
}

struct Constants {
  double c1, c2, c;
  std::string provenance;
};

Constants pick_constants(Session& s, std::optional<EmpiricalConstants>& ec) {
  const auto& cfg = s.cfg();
  if (cfg.c1 && cfg.c2 && cfg.c) return {*cfg.c1, *cfg.c2, *cfg.c, "config"};
  if (!ec) ec = empirical_constants(s.immersed(), cfg.samples, cfg.seed);
  const bool mixed = cfg.c1 || cfg.c2 || cfg.c;
  return {cfg.c1.value_or(ec->c1), cfg.c2.value_or(ec->c2), cfg.c.value_or(ec->c),
          mixed ? "config+empirical" : "empirical"};
}

void run_bounds(Session& s, Partial& p) {
  const auto& cfg = s.cfg();
  const auto t = compute_topology(s.surface());
  const double area = s.surface().total_area();
  const double length = s.surface().boundary_length();
  const double rho = s.bounds().rho;
  std::optional<EmpiricalConstants> ec;
  const Constants k = pick_constants(s, ec);

  ClosedFormInput cf;
  cf.area = area;
  cf.rho = rho;
  cf.c1 = k.c1;
  cf.c2 = k.c2;
  cf.n_amb = s.ambient().dimension();
  const auto dim2 = index_bound_closed_form(cf);
  ClosedFormInput cn = cf;
  cn.mode = BoundMode::dimN;
  cn.n = 3;
  cn.p_integral = area * std::pow(std::max(1.0, rho), 1.5);
  const auto dimn = index_bound_closed_form(cn);
  const double betti = betti_bound_evaluator(3, cn.p_integral, k.c);

  p.result["constants"] = {{"c1", k.c1}, {"c2", k.c2}, {"c", k.c}, {"provenance", k.provenance}};
  p.result["dim2"] = to_json(dim2);
  p.result["dimN"] = to_json(dimn);
  p.result["dimN"]["p_integral"] = cn.p_integral;
  p.result["betti_bound"] = betti;
  p.result["riemann_roch"] = fbms::to_json(riemann_roch(1, t.euler_char, 2 * t.euler_char));
  p.text << "closed-form heat bound (surfaces): " << fmt("%.8g", dim2.bound) << " at t* = " << fmt("%.6g", dim2.t_star)
         << (dim2.at_grid_boundary ? " (end of search interval)" : "") << "\n";
  p.text << "closed-form heat bound (n = 3):    " << fmt("%.8g", dimn.bound) << " at t* = " << fmt("%.6g", dimn.t_star)
         << "\n";
  p.text << "betti bound c3 * int p^{n/2}:      " << fmt("%.8g", betti) << "\n";
  p.text << "constants (" << k.provenance << "): c1 " << fmt("%.6g", k.c1) << " c2 " << fmt("%.6g", k.c2) << " c "
         << fmt("%.6g", k.c) << "\n";

  const auto [kmin, kmax] = boundary_curvature_range(s);
  if (s.ambient().has_boundary() && kmin > 0.0) {
    AreaBoundInput in;
    in.g = t.genus;
    in.m = t.boundary_count;
    in.regime = AreaRegime::convex;
    in.alpha = kmin;
    in.area = area;
    in.boundary_length = length;
    in.c1 = cfg.c1.value_or(1.0);
    const auto r = geometric_area_bounds(in);
    p.result["area_bound"] = fbms::to_json(r);
    p.text << "area " << fmt("%.6g", area) << " <= cap " << fmt("%.6g", r.cap) << ": " << (r.pass ? "PASS" : "FAIL")
           << "\n";
    p.check("convex_area_cap", r.pass);
  } else if (s.ambient().has_boundary() && kmax <= 0.0 && s.ambient().kappa() <= 0.0) {
    AreaBoundInput in;
    in.g = t.genus;
    in.m = t.boundary_count;
    in.regime = AreaRegime::concave;
    in.alpha = -kmax;
    in.kappa = -s.ambient().kappa();
    in.area = area;
    in.boundary_length = length;
    const auto r = geometric_area_bounds(in);
    p.result["area_bound"] = fbms::to_json(r);
    p.text << "concave estimate " << fmt("%.6g", r.lhs) << " <= " << fmt("%.6g", r.rhs) << ": "
           << (r.regime_inapplicable ? "regime inapplicable" : (r.pass ? "PASS" : "FAIL")) << "\n";
    if (!r.regime_inapplicable) p.check("concave_area_estimate", r.pass);
  } else {
    p.result["area_bound"] = nullptr;
  }
}

void run_report(Session& s, Partial& p) {
  const auto& cfg = s.cfg();
  const auto v = validate_free_boundary(s.immersed(), cfg.tol_min, cfg.tol_orth);
  p.result["validation"] = to_json(v);
  p.check("free_boundary", v.pass);
  if (!v.pass) {
    p.text << "free boundary validation failed (mean curvature " << fmt("%.3e", v.mean_curvature_residual)
           << ", orthogonality " << fmt("%.3e", v.orthogonality_residual) << "); no spectra computed\n";
    return;
  }
  const double tol = s.shared_tol();
  const Spectrum& area = s.area_spectrum();
  const Spectrum energy = s.solve(FormKind::energy, tol, cfg.k);
  const Spectrum tangential = s.solve(FormKind::energy_tangential, tol, cfg.k);
  const Spectrum robin = s.solve(FormKind::robin_bundle, tol, cfg.k);
  const Spectrum area_shared = [&] {
    Spectrum a = area;
    a.tol_zero = tol;
    return a;
  }();
  const auto ca = classify_spectrum(area_shared);
  const auto ce = classify_spectrum(energy);
  const auto ct = classify_spectrum(tangential);
  const auto beta = beta_count(robin, s.bounds().rho);
  for (const auto* c : {&ca, &ce, &ct})
    if (!c->warning.empty()) p.warnings.push_back(c->warning);
  if (beta.truncated) p.warnings.push_back(beta.warning);

  std::optional<EmpiricalConstants> ec;
  const Constants k = pick_constants(s, ec);
  const int nv = s.surface().num_vertices();
  BoundInputs in;
  in.surface_id = s.id();
  in.num_vertices = nv;
  in.topology = compute_topology(s.surface());
  in.area = {ca.index, ca.nullity, nv};
  in.energy = {ce.index, ce.nullity, nv};
  in.tangential = {ct.index, ct.nullity, nv};
  in.beta = beta.beta;
  in.beta_vertices = nv;
  in.area_measure = s.surface().total_area();
  in.boundary_length = s.surface().boundary_length();
  in.rho = s.bounds().rho;
  in.c_empirical = k.c;
  in.composite_asserted = cfg.c.has_value();
  const auto [kmin, kmax] = boundary_curvature_range(s);
  (void)kmax;
  in.convex_euclidean = s.ambient().kappa() == 0.0 && s.ambient().has_boundary() && kmin > 0.0;
  ClosedFormInput cf;
  cf.c1 = k.c1;
  cf.c2 = k.c2;
  cf.n_amb = s.ambient().dimension();
  in.closed_form = cf;
  const BoundReport r = verify_inequalities(in);

  json spectra = json::array();
  spectra.push_back(to_json(area_shared, FormKind::area));
  spectra.push_back(to_json(energy, FormKind::energy));
  spectra.push_back(to_json(tangential, FormKind::energy_tangential));
  spectra.push_back(to_json(robin, FormKind::robin_bundle));
  p.result["spectra"] = spectra;
  p.result["bound_report"] = fbms::to_json(r);
  p.result["constants"] = {{"c1", k.c1}, {"c2", k.c2}, {"c", k.c}, {"provenance", k.provenance}};
  p.text << format_table(r);
  for (const auto& rec : r.records) p.check(rec.name, rec.pass, rec.asserted);
}

}  // namespace

RunOutput run(Subcommand sub, const RunConfig& config) {
  validate_config(config);
  Session s(config);
  Partial p;
  switch (sub) {
    case Subcommand::topo: run_topo(s, p); break;
    case Subcommand::validate: run_validate(s, p); break;
    case Subcommand::spectrum: run_spectrum(s, p, true); break;
    case Subcommand::index: run_spectrum(s, p, false); break;
    case Subcommand::compare: run_compare(s, p); break;
    case Subcommand::heat: run_heat(s, p); break;
    case Subcommand::sobolev: run_sobolev(s, p); break;
    case Subcommand::bounds: run_bounds(s, p); break;
    case Subcommand::report: run_report(s, p); break;
  }

  RunOutput out;
  bool pass = true;
  json asserts = json::array();
  for (const auto& a : p.assertions) {
    asserts.push_back({{"name", a.name}, {"pass", a.pass}, {"asserted", a.asserted}});
    if (a.asserted && !a.pass) pass = false;
  }
  out.exit_code = pass ? kExitPass : kExitAssertion;
  out.assertions = std::move(p.assertions);

  const auto& surf = s.surface();
  json j;
  j["tool"] = "fbms";
  j["version"] = std::string(version());
  j["subcommand"] = std::string(to_string(sub));
  j["config_hash"] = config_hash(config);
  j["seed"] = config.seed;
  j["config"] = to_json(config);
  j["surface"] = {{"id", s.id()},
                  {"vertices", surf.num_vertices()},
                  {"faces", surf.num_faces()},
                  {"mesh_scale", surf.mean_edge_length()},
                  {"ambient", s.ambient().describe()}};
  j["result"] = std::move(p.result);
  j["assertions"] = std::move(asserts);
  j["warnings"] = p.warnings;
  j["pass"] = pass;
  out.json = std::move(j);

  std::ostringstream text;
  text << "fbms " << to_string(sub) << "  " << s.id() << "  (" << surf.num_vertices() << " vertices, "
       << s.ambient().describe() << ")\n";
  text << p.text.str();
  for (const auto& w : p.warnings) text << "warning: " << w << "\n";
  for (const auto& a : out.assertions)
    if (!a.pass) text << (a.asserted ? "FAILED: " : "note (not asserted): ") << a.name << "\n";
  text << (pass ? "result: PASS\n" : "result: FAIL\n");
  out.text = text.str();
  out.csv = std::move(p.csv);
  return out;
}

}  // namespace fbms
