#include "fbms/variation_forms.hpp"

#include <cmath>
#include <sstream>

#include "fbms/errors.hpp"

namespace fbms {

std::string_view to_string(FormKind kind) {
  switch (kind) {
    case FormKind::area: return "area";
    case FormKind::energy: return "energy";
    case FormKind::energy_tangential: return "tangential";
    case FormKind::robin_bundle: return "robin_bundle";
    case FormKind::robin_scalar: return "robin_scalar";
  }
  return "unknown";
}

SparseMatrix FormAssembly::reduced_stiffness() const {
  SparseMatrix ct = constraint_basis.transpose();
  SparseMatrix r = ct * A * constraint_basis;
  return symmetrize(r);
}

SparseMatrix FormAssembly::reduced_mass() const {
  SparseMatrix ct = constraint_basis.transpose();
  SparseMatrix r = ct * M * constraint_basis;
  return symmetrize(r);
}

double FormAssembly::evaluate(const Vector& x) const {
  if (x.size() != A.rows()) throw DimensionError("coefficient vector has the wrong length");
  return x.dot(A * x);
}

namespace {

// Orthonormal pair spanning the plane orthogonal to the unit vector w.
std::pair<Vec3, Vec3> perp_pair(const Vec3& w) {
  const Vec3 seed = std::abs(w[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 a = seed.cross(w).normalized();
  return {a, w.cross(a)};
}

// In-plane orthonormal frame of an element: first edge direction and n x e1.
std::pair<Vec3, Vec3> element_frame(const ImmersedSurface& immersed, int f) {
  const auto& t = immersed.surface().triangles()[f];
  const auto& x = immersed.surface().vertices();
  const Vec3 e1 = (x[t[1]] - x[t[0]]).normalized();
  return {e1, immersed.element(f).normal.cross(e1)};
}

Mat3 curvature_matrix(const ImmersedSurface& immersed, int f) {
  const auto& amb = immersed.ambient();
  if (amb.kappa() == 0.0) return Mat3::Zero();
  const auto& t = immersed.surface().triangles()[f];
  const auto& x = immersed.surface().vertices();
  const Vec3 centroid = (x[t[0]] + x[t[1]] + x[t[2]]) / 3.0;
  const auto [e1, e2] = element_frame(immersed, f);
  Mat3 r;
  for (int c = 0; c < 3; ++c) r.col(c) = evaluate_curvature_operator(amb, centroid, e1, e2, Vec3::Unit(c));
  return 0.5 * (r + r.transpose());
}

// sum_e M^e_ij (x) R_e as a 3V x 3V matrix.
SparseMatrix curvature_term(const ImmersedSurface& immersed) {
  const auto& tris = immersed.surface().triangles();
  const int n = 3 * immersed.surface().num_vertices();
  if (immersed.ambient().kappa() == 0.0) return SparseMatrix(n, n);
  return assemble_chunked(n, n, tris.size(), [&](std::size_t b, std::size_t e, Triplets& out) {
    for (std::size_t f = b; f < e; ++f) {
      const Mat3 r = curvature_matrix(immersed, static_cast<int>(f));
      const double area = immersed.element(static_cast<int>(f)).area;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double m = area / 12.0 * (i == j ? 2.0 : 1.0);
          for (int a = 0; a < 3; ++a)
            for (int c = 0; c < 3; ++c) out.emplace_back(3 * tris[f][i] + a, 3 * tris[f][j] + c, m * r(a, c));
        }
    }
  });
}

// int_{dSigma} <S V, V> dL by two-point Gauss (or endpoint quadrature when lumped).
SparseMatrix boundary_term(const ImmersedSurface& immersed, bool lumped) {
  const auto& s = immersed.surface();
  const auto& x = s.vertices();
  const auto& amb = immersed.ambient();
  const int n = 3 * s.num_vertices();
  Triplets t;
  auto add_block = [&](int i, int j, const Mat3& m) {
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        if (m(a, c) != 0.0) t.emplace_back(3 * i + a, 3 * j + c, m(a, c));
  };
  for (const auto& e : s.edges()) {
    if (!e.is_boundary()) continue;
    const double len = (x[e.v0] - x[e.v1]).norm();
    if (lumped) {
      add_block(e.v0, e.v0, 0.5 * len * amb.shape_operator(x[e.v0]));
      add_block(e.v1, e.v1, 0.5 * len * amb.shape_operator(x[e.v1]));
      continue;
    }
    for (double g : kGauss2) {
      const Mat3 sg = amb.shape_operator((1.0 - g) * x[e.v0] + g * x[e.v1]);
      const double w = 0.5 * len;
      const double n0 = 1.0 - g, n1 = g;
      add_block(e.v0, e.v0, w * n0 * n0 * sg);
      add_block(e.v1, e.v1, w * n1 * n1 * sg);
      add_block(e.v0, e.v1, w * n0 * n1 * sg);
      add_block(e.v1, e.v0, w * n0 * n1 * sg);
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

void require_valid(const ImmersedSurface& immersed, const AssemblyOptions& opts) {
  if (opts.skip_validation) return;
  const auto r = validate_free_boundary(immersed, opts.tol_min, opts.tol_orth);
  if (!r.pass) {
    std::ostringstream msg;
    msg << "surface is not a free-boundary minimal surface within tolerance (mean curvature residual "
        << r.mean_curvature_residual << ", orthogonality residual " << r.orthogonality_residual
        << ", boundary residual " << r.boundary_residual << ")";
    throw ValidationError(msg.str());
  }
}

SparseMatrix vector_mass(const ImmersedSurface& immersed, bool lumped) {
  return kron3(scalar_mass(immersed, lumped), Mat3::Identity());
}

SparseMatrix identity(int n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

// Energy-admissible basis: all of R^3 inside, the tangent plane of the
// ambient boundary at boundary vertices.
SparseMatrix energy_basis(const ImmersedSurface& immersed) {
  const auto& s = immersed.surface();
  Triplets t;
  int col = 0;
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (!s.is_boundary_vertex(v)) {
      for (int c = 0; c < 3; ++c) t.emplace_back(3 * v + c, col++, 1.0);
      continue;
    }
    const auto [a, b] = perp_pair(immersed.ambient().boundary_normal(s.vertices()[v]));
    for (const Vec3& d : {a, b}) {
      for (int c = 0; c < 3; ++c) t.emplace_back(3 * v + c, col, d[c]);
      ++col;
    }
  }
  SparseMatrix out(3 * s.num_vertices(), col);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix tangential_basis(const ImmersedSurface& immersed) {
  const auto& s = immersed.surface();
  Triplets t;
  int col = 0;
  for (int v = 0; v < s.num_vertices(); ++v) {
    const Vec3& nu = immersed.normal(v);
    if (!s.is_boundary_vertex(v)) {
      const auto [a, b] = perp_pair(nu);
      for (const Vec3& d : {a, b}) {
        for (int c = 0; c < 3; ++c) t.emplace_back(3 * v + c, col, d[c]);
        ++col;
      }
      continue;
    }
    const Vec3 d = nu.cross(immersed.ambient().boundary_normal(s.vertices()[v])).normalized();
    for (int c = 0; c < 3; ++c) t.emplace_back(3 * v + c, col, d[c]);
    ++col;
  }
  SparseMatrix out(3 * s.num_vertices(), col);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix energy_matrix(const ImmersedSurface& immersed, bool lumped) {
  SparseMatrix a = kron3(scalar_stiffness(immersed), Mat3::Identity());
  a -= curvature_term(immersed);
  a -= boundary_term(immersed, lumped);
  return symmetrize(a);
}

}  // namespace

FormAssembly assemble_energy_form(const ImmersedSurface& immersed, const AssemblyOptions& opts) {
  require_valid(immersed, opts);
  FormAssembly f;
  f.kind = FormKind::energy;
  f.dofs_per_vertex = 3;
  f.A = energy_matrix(immersed, opts.lumped_mass);
  f.M = vector_mass(immersed, opts.lumped_mass);
  f.constraint_basis = energy_basis(immersed);
  return f;
}

FormAssembly assemble_tangential_form(const ImmersedSurface& immersed, const AssemblyOptions& opts) {
  require_valid(immersed, opts);
  FormAssembly f;
  f.kind = FormKind::energy_tangential;
  f.dofs_per_vertex = 3;
  f.A = energy_matrix(immersed, opts.lumped_mass);
  f.M = vector_mass(immersed, opts.lumped_mass);
  f.constraint_basis = tangential_basis(immersed);
  return f;
}

FormAssembly assemble_robin_bundle_form(const ImmersedSurface& immersed, const AssemblyOptions& opts) {
  require_valid(immersed, opts);
  FormAssembly f;
  f.kind = FormKind::robin_bundle;
  f.dofs_per_vertex = 3;
  SparseMatrix a = kron3(scalar_stiffness(immersed), Mat3::Identity());
  a -= boundary_term(immersed, opts.lumped_mass);
  f.A = symmetrize(a);
  f.M = vector_mass(immersed, opts.lumped_mass);
  f.constraint_basis = identity(f.full_dim());
  return f;
}

FormAssembly assemble_scalar_robin_form(const ImmersedSurface& immersed, double coefficient,
                                        const AssemblyOptions& opts) {
  require_valid(immersed, opts);
  FormAssembly f;
  f.kind = FormKind::robin_scalar;
  f.dofs_per_vertex = 1;
  SparseMatrix a = scalar_stiffness(immersed);
  a -= coefficient * boundary_mass(immersed, opts.lumped_mass);
  f.A = symmetrize(a);
  f.M = scalar_mass(immersed, opts.lumped_mass);
  f.constraint_basis = identity(f.full_dim());
  return f;
}

SparseMatrix area_integrand_matrix(const ImmersedSurface& immersed) {
  const auto& tris = immersed.surface().triangles();
  const int n = 3 * immersed.surface().num_vertices();
  // |grad^perp xi|^2 - |(grad xi)^T|^2 = sum_k d_k xi^T (I - 2 P_T) d_k xi.
  SparseMatrix a = assemble_chunked(n, n, tris.size(), [&](std::size_t b, std::size_t e, Triplets& out) {
    for (std::size_t f = b; f < e; ++f) {
      const auto& el = immersed.element(static_cast<int>(f));
      const Mat3 q = Mat3::Identity() - 2.0 * el.tangent_projector();
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double k = el.area * el.grad[i].dot(el.grad[j]);
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out.emplace_back(3 * tris[f][i] + r, 3 * tris[f][j] + c, k * q(r, c));
        }
    }
  });
  a -= curvature_term(immersed);
  a -= boundary_term(immersed, false);
  return symmetrize(a);
}

SparseMatrix normal_lift(const ImmersedSurface& immersed) {
  const int nv = immersed.surface().num_vertices();
  Triplets t;
  for (int v = 0; v < nv; ++v)
    for (int c = 0; c < 3; ++c) t.emplace_back(3 * v + c, v, immersed.normal(v)[c]);
  SparseMatrix out(3 * nv, nv);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

FormAssembly assemble_area_form(const ImmersedSurface& immersed, const AssemblyOptions& opts) {
  require_valid(immersed, opts);
  FormAssembly f;
  f.kind = FormKind::area;
  f.dofs_per_vertex = 1;
  const SparseMatrix lift = normal_lift(immersed);
  SparseMatrix lt = lift.transpose();
  SparseMatrix a = lt * area_integrand_matrix(immersed) * lift;
  f.A = symmetrize(a);
  f.M = scalar_mass(immersed, opts.lumped_mass);
  f.constraint_basis = identity(f.full_dim());
  return f;
}

Vector SectionField::flatten() const {
  Vector out(3 * static_cast<Eigen::Index>(values.size()));
  for (std::size_t v = 0; v < values.size(); ++v) out.segment<3>(3 * static_cast<Eigen::Index>(v)) = values[v];
  return out;
}

SectionField make_section(const ImmersedSurface& immersed, std::vector<Vec3> values, SectionKind kind) {
  const auto& s = immersed.surface();
  if (static_cast<int>(values.size()) != s.num_vertices())
    throw DimensionError("section needs one vector per vertex");
  constexpr double tol = 1e-10;
  for (int v = 0; v < s.num_vertices(); ++v) {
    const Vec3& x = values[v];
    const Vec3& nu = immersed.normal(v);
    const double scale = std::max(1.0, x.norm());
    if (kind == SectionKind::normal && (x - x.dot(nu) * nu).norm() > tol * scale)
      throw ParameterError("normal section has a tangential component at vertex " + std::to_string(v));
    if (kind == SectionKind::tangential && std::abs(x.dot(nu)) > tol * scale)
      throw ParameterError("tangential section has a normal component at vertex " + std::to_string(v));
  }
  SectionField out;
  out.kind = kind;
  out.admissible = immersed.ambient().has_boundary();
  if (out.admissible) {
    for (int v = 0; v < s.num_vertices(); ++v) {
      if (!s.is_boundary_vertex(v)) continue;
      const Vec3 w = immersed.ambient().boundary_normal(s.vertices()[v]);
      if (std::abs(values[v].dot(w)) > tol * std::max(1.0, values[v].norm())) {
        out.admissible = false;
        break;
      }
    }
  }
  out.values = std::move(values);
  return out;
}

SectionField normal_section(const ImmersedSurface& immersed, const Vector& phi) {
  const int nv = immersed.surface().num_vertices();
  if (phi.size() != nv) throw DimensionError("normal coefficients need one value per vertex");
  std::vector<Vec3> values(nv);
  for (int v = 0; v < nv; ++v) values[v] = phi[v] * immersed.normal(v);
  return make_section(immersed, std::move(values), SectionKind::normal);
}

Vector normal_coefficients(const ImmersedSurface& immersed, const SectionField& xi) {
  Vector phi(static_cast<Eigen::Index>(xi.values.size()));
  for (std::size_t v = 0; v < xi.values.size(); ++v)
    phi[static_cast<Eigen::Index>(v)] = xi.values[v].dot(immersed.normal(static_cast<int>(v)));
  return phi;
}

namespace {

double direct_boundary_value(const ImmersedSurface& immersed, const std::vector<Vec3>& v) {
  const auto& s = immersed.surface();
  const auto& x = s.vertices();
  double sum = 0.0;
  for (const auto& e : s.edges()) {
    if (!e.is_boundary()) continue;
    const double len = (x[e.v0] - x[e.v1]).norm();
    for (double g : kGauss2) {
      const Vec3 vg = (1.0 - g) * v[e.v0] + g * v[e.v1];
      sum += 0.5 * len * vg.dot(immersed.ambient().shape_operator((1.0 - g) * x[e.v0] + g * x[e.v1]) * vg);
    }
  }
  return sum;
}

double direct_curvature_value(const ImmersedSurface& immersed, const std::vector<Vec3>& v) {
  if (immersed.ambient().kappa() == 0.0) return 0.0;
  const auto& tris = immersed.surface().triangles();
  double sum = 0.0;
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const Mat3 r = curvature_matrix(immersed, static_cast<int>(f));
    const double area = immersed.element(static_cast<int>(f)).area;
    // Edge-midpoint rule, exact for quadratics.
    for (int k = 0; k < 3; ++k) {
      const Vec3 mid = 0.5 * (v[tris[f][k]] + v[tris[f][(k + 1) % 3]]);
      sum += area / 3.0 * mid.dot(r * mid);
    }
  }
  return sum;
}

}  // namespace

double direct_energy_value(const ImmersedSurface& immersed, const std::vector<Vec3>& v) {
  const auto& tris = immersed.surface().triangles();
  double sum = 0.0;
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const auto& el = immersed.element(static_cast<int>(f));
    Mat3 g = Mat3::Zero();  // g(:, k) = derivative of V along ambient axis k
    for (int i = 0; i < 3; ++i) g += v[tris[f][i]] * el.grad[i].transpose();
    sum += el.area * g.squaredNorm();
  }
  return sum - direct_curvature_value(immersed, v) - direct_boundary_value(immersed, v);
}

double direct_area_value(const ImmersedSurface& immersed, const Vector& phi) {
  const auto& tris = immersed.surface().triangles();
  std::vector<Vec3> xi(phi.size());
  for (int v = 0; v < phi.size(); ++v) xi[v] = phi[v] * immersed.normal(v);
  double sum = 0.0;
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const auto& el = immersed.element(static_cast<int>(f));
    Mat3 g = Mat3::Zero();
    for (int i = 0; i < 3; ++i) g += xi[tris[f][i]] * el.grad[i].transpose();
    const auto [e1, e2] = element_frame(immersed, static_cast<int>(f));
    for (const Vec3& t : {e1, e2}) {
      const Vec3 d = g * t;
      const double normal_part = d.dot(el.normal);
      const Vec3 tangent_part = d - normal_part * el.normal;
      sum += el.area * (normal_part * normal_part - tangent_part.squaredNorm());
    }
  }
  return sum - direct_curvature_value(immersed, xi) - direct_boundary_value(immersed, xi);
}

}  // namespace fbms
