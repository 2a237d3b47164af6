#include "fbms/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fbms/errors.hpp"

namespace fbms {

namespace {

void require_field(const ImmersedSurface& immersed, const Vector& phi) {
  if (phi.size() != immersed.surface().num_vertices()) throw DimensionError("field needs one value per vertex");
  if (!(phi.cwiseAbs().maxCoeff() > 0.0)) throw ZeroFieldError("field vanishes identically");
}

// Lumped vertex quadrature of g(phi).
template <typename F>
double vertex_integral(const ImmersedSurface& immersed, const Vector& phi, F g) {
  double sum = 0.0;
  for (int v = 0; v < phi.size(); ++v) sum += immersed.vertex_area(v) * g(phi[v]);
  return sum;
}

double gradient_l1(const ImmersedSurface& immersed, const Vector& phi) {
  const auto& tris = immersed.surface().triangles();
  double sum = 0.0;
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const auto& el = immersed.element(static_cast<int>(f));
    Vec3 g = Vec3::Zero();
    for (int i = 0; i < 3; ++i) g += phi[tris[f][i]] * el.grad[i];
    sum += el.area * g.norm();
  }
  return sum;
}

double gradient_l2_squared(const ImmersedSurface& immersed, const Vector& phi) {
  const auto& tris = immersed.surface().triangles();
  double sum = 0.0;
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const auto& el = immersed.element(static_cast<int>(f));
    Vec3 g = Vec3::Zero();
    for (int i = 0; i < 3; ++i) g += phi[tris[f][i]] * el.grad[i];
    sum += el.area * g.squaredNorm();
  }
  return sum;
}

RatioStatistics summarize(const std::vector<double>& r) {
  RatioStatistics s;
  s.samples = static_cast<int>(r.size());
  if (r.empty()) return s;
  s.min = *std::min_element(r.begin(), r.end());
  s.max = *std::max_element(r.begin(), r.end());
  double sum = 0.0;
  for (double x : r) sum += x;
  s.mean = sum / static_cast<double>(r.size());
  return s;
}

}  // namespace

SobolevResult sobolev_check(const ImmersedSurface& immersed, const Vector& phi, int n) {
  if (n < 2) throw ParameterError("intrinsic dimension must be at least 2");
  require_field(immersed, phi);
  const double p = static_cast<double>(n) / (n - 1);
  SobolevResult r;
  r.lhs = std::pow(vertex_integral(immersed, phi, [p](double x) { return std::pow(std::abs(x), p); }), 1.0 / p);
  r.rhs_gradient_part = gradient_l1(immersed, phi);
  r.rhs_l1_part = vertex_integral(immersed, phi, [](double x) { return std::abs(x); });
  r.ratio = r.lhs / (r.rhs_gradient_part + r.rhs_l1_part);
  return r;
}

TraceResult boundary_trace_check(const ImmersedSurface& immersed, const Vector& phi) {
  require_field(immersed, phi);
  const auto& s = immersed.surface();
  TraceResult r;
  for (const auto& loop : s.boundary_loops()) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % loop.size()];
      const double len = (s.vertices()[b] - s.vertices()[a]).norm();
      r.boundary_l1 += 0.5 * len * (std::abs(phi[a]) + std::abs(phi[b]));
    }
  }
  r.gradient_part = gradient_l1(immersed, phi);
  const auto H = discrete_mean_curvature(immersed);
  for (int v = 0; v < s.num_vertices(); ++v)
    if (!s.is_boundary_vertex(v)) r.curvature_part += immersed.vertex_area(v) * H[v].norm() * std::abs(phi[v]);
  r.l1_part = vertex_integral(immersed, phi, [](double x) { return std::abs(x); });
  r.interior_terms = r.gradient_part + r.curvature_part + r.l1_part;
  r.ratio = r.boundary_l1 / r.interior_terms;
  return r;
}

double interpolation_ratio(const ImmersedSurface& immersed, const Vector& phi) {
  require_field(immersed, phi);
  const double l2 = vertex_integral(immersed, phi, [](double x) { return x * x; });
  const double l1 = vertex_integral(immersed, phi, [](double x) { return std::abs(x); });
  return std::pow(l2, 1.5) / l1 / (gradient_l2_squared(immersed, phi) + l2);
}

Vector random_bump_field(const ImmersedSurface& immersed, std::uint64_t seed, int sample) {
  const auto& s = immersed.surface();
  Vec3 centroid = Vec3::Zero();
  double total = 0.0;
  for (int v = 0; v < s.num_vertices(); ++v) {
    centroid += immersed.vertex_area(v) * s.vertices()[v];
    total += immersed.vertex_area(v);
  }
  centroid /= total;
  double radius = 0.0;
  for (const auto& x : s.vertices()) radius = std::max(radius, (x - centroid).norm());

  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(sample + 1)));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> width(0.15, 0.5);
  std::uniform_int_distribution<int> count(1, 3);
  const int bumps = count(rng);
  std::vector<Vec3> centres;
  std::vector<double> widths, amps;
  for (int b = 0; b < bumps; ++b) {
    Vec3 u;
    do {
      u = Vec3(unit(rng), unit(rng), unit(rng));
    } while (u.squaredNorm() > 1.0);
    centres.push_back(centroid + radius * u);
    widths.push_back(width(rng) * radius);
    amps.push_back(unit(rng));
  }
  Vector phi(s.num_vertices());
  for (int v = 0; v < s.num_vertices(); ++v) {
    double val = 0.0;
    for (int b = 0; b < bumps; ++b) {
      const double d2 = (s.vertices()[v] - centres[b]).squaredNorm();
      val += amps[b] * std::exp(-d2 / (2.0 * widths[b] * widths[b]));
    }
    phi[v] = val;
  }
  return phi;
}

EmpiricalConstants empirical_constants(const ImmersedSurface& immersed, int samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("need at least one random field");
  EmpiricalConstants c;
  c.seed = seed;
  std::vector<double> sob, tr, interp;
  for (int i = 0; i < samples; ++i) {
    const Vector phi = random_bump_field(immersed, seed, i);
    if (!(phi.cwiseAbs().maxCoeff() > 1e-300)) continue;
    sob.push_back(sobolev_check(immersed, phi).ratio);
    tr.push_back(boundary_trace_check(immersed, phi).ratio);
    interp.push_back(interpolation_ratio(immersed, phi));
  }
  c.sobolev = summarize(sob);
  c.trace = summarize(tr);
  c.interpolation = summarize(interp);
  c.c = c.sobolev.max;
  c.c1 = c.interpolation.max;
  c.c2 = c.interpolation.max;
  c.trace_constant = c.trace.max;
  return c;
}

}  // namespace fbms
