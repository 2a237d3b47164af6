#include <cmath>

#include <Eigen/SparseCholesky>

#include "fbms/errors.hpp"
#include "fbms/variation_forms.hpp"

namespace fbms {

namespace {

using cd = std::complex<double>;
constexpr cd kI(0.0, 1.0);

std::pair<Vec3, Vec3> frame_of(const ImmersedSurface& immersed, int f) {
  const auto& t = immersed.surface().triangles()[f];
  const auto& x = immersed.surface().vertices();
  const Vec3 e1 = (x[t[1]] - x[t[0]]).normalized();
  return {e1, immersed.element(f).normal.cross(e1)};
}

// 1/2 P_T (G e1 - i G e2) for G = sum_i c_i grad N_i^T.
Vec3c dz_tangent(const ImmersedSurface& immersed, int f, const std::array<Vec3c, 3>& c) {
  const auto& el = immersed.element(f);
  const auto [e1, e2] = frame_of(immersed, f);
  Vec3c out = Vec3c::Zero();
  for (int i = 0; i < 3; ++i) out += c[i] * (0.5 * (el.grad[i].dot(e1) - kI * el.grad[i].dot(e2)));
  const Vec3c n = el.normal.cast<cd>();
  return out - n * (n.transpose() * out)(0);
}

// (0,1) part 1/2 (X + i n x X) with respect to the element normal.
Vec3c zero_one_part(const Vec3& n, const Vec3& x) {
  return 0.5 * (x.cast<cd>() + kI * n.cross(x).cast<cd>());
}

std::pair<Vec3, Vec3> perp_pair(const Vec3& w) {
  const Vec3 seed = std::abs(w[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 a = seed.cross(w).normalized();
  return {a, w.cross(a)};
}

double weighted_norm(const ImmersedSurface& immersed, const std::vector<Vec3c>& z) {
  double sum = 0.0;
  for (std::size_t f = 0; f < z.size(); ++f) sum += immersed.element(static_cast<int>(f)).area * z[f].squaredNorm();
  return std::sqrt(sum);
}

}  // namespace

std::vector<Vec3c> dbar_operator(const ImmersedSurface& immersed, const std::vector<Vec3>& x) {
  const auto& tris = immersed.surface().triangles();
  std::vector<Vec3c> out(tris.size());
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const Vec3& n = immersed.element(static_cast<int>(f)).normal;
    std::array<Vec3c, 3> c;
    for (int i = 0; i < 3; ++i) c[i] = zero_one_part(n, x[tris[f][i]]);
    out[f] = dz_tangent(immersed, static_cast<int>(f), c);
  }
  return out;
}

std::vector<Vec3c> normal_source(const ImmersedSurface& immersed, const std::vector<Vec3>& xi) {
  const auto& tris = immersed.surface().triangles();
  std::vector<Vec3c> out(tris.size());
  for (std::size_t f = 0; f < tris.size(); ++f) {
    std::array<Vec3c, 3> c;
    for (int i = 0; i < 3; ++i) c[i] = xi[tris[f][i]].cast<cd>();
    out[f] = dz_tangent(immersed, static_cast<int>(f), c);
  }
  return out;
}

DbarSolution solve_dbar_with_source(const ImmersedSurface& immersed, const std::vector<Vec3c>& source) {
  const auto& s = immersed.surface();
  const auto topo = compute_topology(s);
  if (topo.euler_char != 1)
    throw TopologyError("the reparametrization problem is only solved on disks (chi = " +
                        std::to_string(topo.euler_char) + ")");
  if (source.size() != s.triangles().size()) throw DimensionError("source needs one value per triangle");

  // Two real unknowns per interior vertex, in a frame orthogonal to the vertex normal.
  const int nv = s.num_vertices();
  std::vector<int> dof(nv, -1);
  std::vector<std::pair<Vec3, Vec3>> frames(nv);
  int n_dofs = 0;
  for (int v = 0; v < nv; ++v) {
    if (s.is_boundary_vertex(v)) continue;
    dof[v] = n_dofs;
    n_dofs += 2;
    frames[v] = perp_pair(immersed.normal(v));
  }

  DbarSolution sol;
  sol.source_norm = weighted_norm(immersed, source);
  std::vector<Vec3> x(nv, Vec3::Zero());
  if (n_dofs > 0) {
    Triplets t;
    Vector rhs = Vector::Zero(n_dofs);
    const auto& tris = s.triangles();
    for (std::size_t f = 0; f < tris.size(); ++f) {
      const auto& el = immersed.element(static_cast<int>(f));
      // Columns: the image of each local unit dof under the element operator.
      std::vector<std::pair<int, Vec3c>> cols;
      for (int i = 0; i < 3; ++i) {
        const int v = tris[f][i];
        if (dof[v] < 0) continue;
        for (int d = 0; d < 2; ++d) {
          const Vec3& dir = d == 0 ? frames[v].first : frames[v].second;
          std::array<Vec3c, 3> c{Vec3c::Zero(), Vec3c::Zero(), Vec3c::Zero()};
          c[i] = zero_one_part(el.normal, dir);
          cols.emplace_back(dof[v] + d, dz_tangent(immersed, static_cast<int>(f), c));
        }
      }
      for (const auto& [r, lr] : cols) {
        for (const auto& [c, lc] : cols) t.emplace_back(r, c, el.area * (lr.adjoint() * lc)(0).real());
        rhs[r] -= el.area * (lr.adjoint() * source[f])(0).real();
      }
    }
    SparseMatrix normal(n_dofs, n_dofs);
    normal.setFromTriplets(t.begin(), t.end());
    normal = symmetrize(normal);
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(normal);
    if (ldlt.info() != Eigen::Success) throw SolveError("least-squares normal equations could not be factored");
    const Vector diag = ldlt.vectorD();
    if (diag.minCoeff() <= 1e-13 * diag.cwiseAbs().maxCoeff())
      throw SolveError("least-squares system is singular");
    const Vector y = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success) throw SolveError("least-squares solve failed");
    for (int v = 0; v < nv; ++v)
      if (dof[v] >= 0) x[v] = y[dof[v]] * frames[v].first + y[dof[v] + 1] * frames[v].second;
  }

  auto z = dbar_operator(immersed, x);
  for (std::size_t f = 0; f < z.size(); ++f) z[f] += source[f];
  sol.residual = weighted_norm(immersed, z);
  sol.X = make_section(immersed, std::move(x), SectionKind::tangential);
  return sol;
}

DbarSolution solve_dbar_reparametrization(const ImmersedSurface& immersed, const SectionField& xi) {
  if (xi.kind != SectionKind::normal) throw ParameterError("the reparametrization source must be a normal section");
  return solve_dbar_with_source(immersed, normal_source(immersed, xi.values));
}

ComparisonResult comparison_defect(const ImmersedSurface& immersed, const SectionField& xi, const SectionField& X,
                                   const AssemblyOptions& opts) {
  const auto& s = immersed.surface();
  if (xi.kind != SectionKind::normal) throw AdmissibilityError("xi must be a normal section");
  if (!xi.admissible) throw AdmissibilityError("xi is not tangent to the ambient boundary");
  if (X.kind != SectionKind::tangential) throw AdmissibilityError("X must be a tangential section");
  for (int v = 0; v < s.num_vertices(); ++v)
    if (s.is_boundary_vertex(v) && X.values[v].norm() > 1e-12)
      throw AdmissibilityError("X does not vanish at boundary vertex " + std::to_string(v));

  const FormAssembly energy = assemble_energy_form(immersed, opts);
  const FormAssembly area = assemble_area_form(immersed, opts);
  ComparisonResult r;
  const Vector v = X.flatten() + xi.flatten();
  r.e_val = energy.evaluate(v);
  r.a_val = area.evaluate(normal_coefficients(immersed, xi));
  auto z = dbar_operator(immersed, X.values);
  const auto src = normal_source(immersed, xi.values);
  for (std::size_t f = 0; f < z.size(); ++f) z[f] += src[f];
  const double norm = weighted_norm(immersed, z);
  r.defect_integral = 8.0 * norm * norm;
  r.identity_residual = r.e_val - r.a_val - r.defect_integral;
  return r;
}

}  // namespace fbms
