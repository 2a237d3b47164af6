#include "fbms/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "fbms/errors.hpp"
#include "fbms/parallel.hpp"

namespace fbms {

std::string_view to_string(TraceSource source) {
  return source == TraceSource::scalar_robin ? "scalar_robin" : "bundle_robin";
}

std::vector<double> default_t_grid(int count, double lo, double hi) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw GridError("t grid needs count >= 1 and 0 < lo <= hi");
  std::vector<double> t(count);
  if (count == 1) {
    t[0] = lo;
    return t;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) t[i] = std::exp(a + (b - a) * i / (count - 1));
  return t;
}

namespace {

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw GridError("empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i])) throw GridError("t grid values must be positive and finite");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw GridError("t grid must be strictly ascending");
  }
}

}  // namespace

HeatTrace heat_trace(const Spectrum& spectrum, const std::vector<double>& t_grid, TraceSource source) {
  check_grid(t_grid);
  if (spectrum.size() == 0) throw DimensionError("heat trace of an empty spectrum");
  HeatTrace h;
  h.t_grid = t_grid;
  h.source = source;
  h.terms = spectrum.size();
  h.reduced_dim = std::max(spectrum.reduced_dim, spectrum.size());
  const double lmin = spectrum.eigenvalues.minCoeff();
  const double lmax = spectrum.eigenvalues.maxCoeff();
  const int missing = h.reduced_dim - h.terms;
  for (double t : t_grid) {
    double sum = 0.0;
    for (double l : spectrum.eigenvalues) sum += std::exp(-l * t);
    h.values.push_back(sum);
    h.remainder.push_back(missing > 0 ? missing * std::exp(-lmax * t) : 0.0);
  }
  if (missing > 0)
    h.note = "partial sum over " + std::to_string(h.terms) + " of " + std::to_string(h.reduced_dim) + " eigenvalues";

  h.monotone_checked = lmin >= 0.0;
  if (h.monotone_checked)
    for (std::size_t i = 1; i < h.values.size(); ++i)
      if (h.values[i] > h.values[i - 1] * (1.0 + 1e-12)) h.monotone = false;
  // Convexity of log k in t on a nonuniform grid via divided differences.
  for (std::size_t i = 1; i + 1 < h.values.size(); ++i) {
    const double s0 = (std::log(h.values[i]) - std::log(h.values[i - 1])) / (t_grid[i] - t_grid[i - 1]);
    const double s1 = (std::log(h.values[i + 1]) - std::log(h.values[i])) / (t_grid[i + 1] - t_grid[i]);
    if (s1 < s0 - 1e-9 * std::max({1.0, std::abs(s0), std::abs(s1)})) h.log_convex = false;
  }
  return h;
}

TraceBoundCheck trace_lower_bound_check(const HeatTrace& bundle_trace, int beta, double rho) {
  TraceBoundCheck c;
  c.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bundle_trace.t_grid.size(); ++i) {
    const double lower = beta * std::exp(-rho * bundle_trace.t_grid[i]);
    c.lower.push_back(lower);
    const double margin = bundle_trace.values[i] - lower;
    c.worst_margin = std::min(c.worst_margin, margin);
    if (margin < -1e-12 * std::max(1.0, lower)) c.pass = false;
  }
  return c;
}

namespace {

// Symmetric generator M^{-1/2} A M^{-1/2} for a diagonal (lumped) mass.
Matrix symmetric_generator(const FormAssembly& form, Vector& sqrt_mass) {
  const int n = form.full_dim();
  sqrt_mass.resize(n);
  const Vector d = Matrix(form.M).diagonal();
  for (int i = 0; i < n; ++i) {
    if (!(d[i] > 0.0)) throw SolveError("lumped mass has a nonpositive entry");
    sqrt_mass[i] = std::sqrt(d[i]);
  }
  Matrix L = Matrix(form.A);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) L(i, j) /= sqrt_mass[i] * sqrt_mass[j];
  return 0.5 * (L + L.transpose());
}

}  // namespace

DominationReport kernel_domination_check(const ImmersedSurface& immersed, const std::vector<double>& t_grid,
                                         const DominationOptions& opts) {
  check_grid(t_grid);
  const auto& s = immersed.surface();
  const int nv = s.num_vertices();
  if (3 * nv > opts.max_dofs)
    throw SizeError("kernel domination needs " + std::to_string(3 * nv) + " bundle dofs, limit is " +
                    std::to_string(opts.max_dofs));

  DominationReport r;
  std::vector<Vec3> probes;
  for (int v = 0; v < nv; ++v)
    if (s.is_boundary_vertex(v)) probes.push_back(s.vertices()[v]);
  r.alpha = opts.alpha_override ? *opts.alpha_override : ambient_bounds(immersed.ambient(), probes).alpha;
  r.alpha_overridden = opts.alpha_override.has_value();
  r.slack = opts.slack;
  r.trace_factor = opts.ambient_dim - 2;

  AssemblyOptions aopts = opts.assembly;
  aopts.lumped_mass = true;
  const FormAssembly bundle = assemble_robin_bundle_form(immersed, aopts);
  const FormAssembly scalar = assemble_scalar_robin_form(immersed, r.alpha, aopts);
  r.scalar_dofs = scalar.full_dim();
  r.bundle_dofs = bundle.full_dim();

  Vector ms, mb;
  const Matrix Ls = symmetric_generator(scalar, ms);
  const Matrix Lb = symmetric_generator(bundle, mb);

  r.points.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t k) {
    const double t = t_grid[k];
    const Matrix Hs = (-t * Ls).exp();
    const Matrix Hb = (-t * Lb).exp();
    DominationPoint p;
    p.t = t;
    p.max_excess = -std::numeric_limits<double>::infinity();
    p.max_row_sum = -std::numeric_limits<double>::infinity();
    p.min_row_sum = std::numeric_limits<double>::infinity();
    const Vector row_sums = (Hs * ms).cwiseQuotient(ms);
    for (int i = 0; i < nv; ++i) {
      p.max_row_sum = std::max(p.max_row_sum, row_sums[i]);
      p.min_row_sum = std::min(p.min_row_sum, row_sums[i]);
    }
    for (int i = 0; i < nv; ++i) {
      for (int j = 0; j < nv; ++j) {
        const double kij = Hs(i, j) / (ms[i] * ms[j]);
        Mat3 block;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) block(a, b) = Hb(3 * i + a, 3 * j + b) / (mb[3 * i + a] * mb[3 * j + b]);
        const double norm = Eigen::JacobiSVD<Mat3>(block).singularValues()[0];
        const double excess = norm - kij;
        if (excess > p.max_excess) {
          p.max_excess = excess;
          p.worst_x = i;
          p.worst_y = j;
        }
        if (excess > opts.slack * std::max(1.0, std::abs(kij))) p.domination = false;
      }
    }
    p.trace_scalar = Hs.trace();
    p.trace_bundle = Hb.trace();
    p.mass_bound = p.max_row_sum <= 1.0 + opts.slack;
    p.trace_ratio = p.trace_bundle <= r.trace_factor * p.trace_scalar * (1.0 + 1e-12);
    r.points[k] = p;
  });

  for (const auto& p : r.points) {
    r.domination_pass = r.domination_pass && p.domination;
    r.mass_pass = r.mass_pass && p.mass_bound;
    r.trace_ratio_pass = r.trace_ratio_pass && p.trace_ratio;
  }
  const auto& first = r.points.front();
  r.small_t_mass_error = std::max(std::abs(first.max_row_sum - 1.0), std::abs(first.min_row_sum - 1.0));
  return r;
}

}  // namespace fbms
