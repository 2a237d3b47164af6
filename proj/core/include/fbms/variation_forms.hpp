#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "fbms/fem.hpp"
#include "fbms/immersed_surface.hpp"

namespace fbms {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class FormKind { area, energy, energy_tangential, robin_bundle, robin_scalar };

std::string_view to_string(FormKind kind);

/// Discrete quadratic form on vertex degrees of freedom together with its
/// mass matrix and the orthonormal basis of the admissible subspace.
/// Vector-valued forms use 3 dofs per vertex, ordered (3 v + component).
struct FormAssembly {
  FormKind kind = FormKind::energy;
  int dofs_per_vertex = 3;
  SparseMatrix A;
  SparseMatrix M;
  SparseMatrix constraint_basis;  ///< full dofs x reduced dofs

  int full_dim() const { return static_cast<int>(A.rows()); }
  int reduced_dim() const { return static_cast<int>(constraint_basis.cols()); }
  SparseMatrix reduced_stiffness() const;
  SparseMatrix reduced_mass() const;
  /// x^T A x for a full-length coefficient vector.
  double evaluate(const Vector& x) const;
};

struct AssemblyOptions {
  double tol_min = kDefaultTolMin;
  double tol_orth = kDefaultTolOrth;
  /// Skip the free-boundary validation (used for diagnostics on non-minimal inputs).
  bool skip_validation = false;
  /// Use row-lumped mass matrices.
  bool lumped_mass = false;
};

/// Integrand |grad V|^2 - <R V, V> with boundary term -int II(V, V) dL;
/// admissible basis: vectors tangent to the ambient boundary at boundary vertices.
FormAssembly assemble_energy_form(const ImmersedSurface& immersed, const AssemblyOptions& opts = {});
/// Area second variation on normal sections xi = phi nu; one dof per vertex.
FormAssembly assemble_area_form(const ImmersedSurface& immersed, const AssemblyOptions& opts = {});
/// Energy form restricted to admissible tangential sections.
FormAssembly assemble_tangential_form(const ImmersedSurface& immersed, const AssemblyOptions& opts = {});
/// Robin rough Laplacian int |grad V|^2 - int_{dSigma} II(V, V) on all sections.
FormAssembly assemble_robin_bundle_form(const ImmersedSurface& immersed, const AssemblyOptions& opts = {});
/// Scalar Robin form int |grad phi|^2 - coefficient int_{dSigma} phi^2.
FormAssembly assemble_scalar_robin_form(const ImmersedSurface& immersed, double coefficient,
                                        const AssemblyOptions& opts = {});

/// Full 3V x 3V area integrand matrix before restriction to normal sections.
SparseMatrix area_integrand_matrix(const ImmersedSurface& immersed);
/// 3V x V matrix mapping normal coefficients phi to the sections phi_i nu_i.
SparseMatrix normal_lift(const ImmersedSurface& immersed);

enum class SectionKind { full, normal, tangential };

/// Per-vertex ambient vectors with their classification.
struct SectionField {
  std::vector<Vec3> values;
  SectionKind kind = SectionKind::full;
  bool admissible = false;

  Vector flatten() const;
};

/// Builds a section and checks the kind invariant (ParameterError when violated);
/// admissibility is computed against the ambient boundary.
SectionField make_section(const ImmersedSurface& immersed, std::vector<Vec3> values, SectionKind kind);
/// xi = phi_i nu_i.
SectionField normal_section(const ImmersedSurface& immersed, const Vector& phi);
/// phi_i = <xi_i, nu_i>.
Vector normal_coefficients(const ImmersedSurface& immersed, const SectionField& xi);

/// Element-by-element evaluation of the energy / area integrals without the
/// assembled matrices, for cross-checking the assembly.
double direct_energy_value(const ImmersedSurface& immersed, const std::vector<Vec3>& v);
double direct_area_value(const ImmersedSurface& immersed, const Vector& phi);

using Vec3c = Eigen::Vector3cd;

struct DbarSolution {
  SectionField X;
  /// sqrt(sum_e A_e |D X^{0,1} + source|^2) after the solve.
  double residual = 0.0;
  /// The same norm at X = 0.
  double source_norm = 0.0;
};

/// Per-element P_T of the (1,0) derivative of the (0,1) part of a tangential
/// field: 1/2 P_T (G e1 - i G e2) with G = sum_i X^{0,1}_i grad N_i^T.
std::vector<Vec3c> dbar_operator(const ImmersedSurface& immersed, const std::vector<Vec3>& x);
/// Per-element (nabla^{1,0} xi)^T.
std::vector<Vec3c> normal_source(const ImmersedSurface& immersed, const std::vector<Vec3>& xi);

/// Least-squares solution of D X^{0,1} = -source with X = 0 on the boundary.
/// Requires disk topology.
DbarSolution solve_dbar_with_source(const ImmersedSurface& immersed, const std::vector<Vec3c>& source);
DbarSolution solve_dbar_reparametrization(const ImmersedSurface& immersed, const SectionField& xi);

struct ComparisonResult {
  double e_val = 0.0;
  double a_val = 0.0;
  double defect_integral = 0.0;
  double identity_residual = 0.0;
};

/// Evaluates both sides of the comparison identity for an admissible normal
/// xi and a tangential X vanishing on the boundary.
ComparisonResult comparison_defect(const ImmersedSurface& immersed, const SectionField& xi, const SectionField& X,
                                   const AssemblyOptions& opts = {});

}  // namespace fbms
