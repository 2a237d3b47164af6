#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbms/variation_forms.hpp"

namespace fbms {

enum class SolverKind { dense, lanczos };

std::string_view to_string(SolverKind kind);

/// Lowest generalized eigenpairs of a reduced pencil.
struct Spectrum {
  Vector eigenvalues;                  ///< ascending
  std::optional<Matrix> eigenvectors;  ///< reduced coordinates, M-orthonormal columns
  double tol_zero = 1e-9;
  double mesh_scale = 0.0;
  int reduced_dim = 0;
  SolverKind solver = SolverKind::dense;
  /// max over pairs of ||A v - lambda M v|| / ||M v||
  double max_residual = 0.0;
  /// Shift actually used by the Lanczos factorization (0 for dense).
  double shift = 0.0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  bool truncated() const { return size() < reduced_dim; }
};

struct SolveOptions {
  int k = 20;
  /// Classification tolerance; when unset, 1e-3 |lambda_min| (floor 1e-9).
  std::optional<double> tol_zero;
  /// rho used for the initial shift -(1 + rho).
  double rho = 0.0;
  bool want_vectors = false;
  /// Reduced dimensions up to this use the dense solver.
  int dense_threshold = 2000;
  bool force_lanczos = false;
  std::uint64_t seed = 0x5eed5eedULL;
  int block_size = 4;
  int max_restarts = 400;
  double residual_tol = 1e-10;
};

inline constexpr double kResidualBound = 1e-8;

/// k lowest eigenpairs of the constraint-reduced pencil of `form`.
Spectrum solve_spectrum(const FormAssembly& form, const SolveOptions& opts = {});

/// k lowest eigenpairs of A v = lambda M v for symmetric A and SPD M.
Spectrum solve_pencil(const SparseMatrix& A, const SparseMatrix& M, const SolveOptions& opts = {});

/// Dense generalized solver (all eigenpairs, then truncated to k).
Spectrum dense_spectrum(const SparseMatrix& A, const SparseMatrix& M, int k, bool want_vectors);

/// Shift-invert block Lanczos with explicit Rayleigh-Ritz and thick restarts.
Spectrum lanczos_spectrum(const SparseMatrix& A, const SparseMatrix& M, const SolveOptions& opts);

/// 1e-3 * |most negative eigenvalue|, floor 1e-9.
double default_tol_zero(const Vector& eigenvalues);

struct Classification {
  int index = 0;
  int nullity = 0;
  /// Largest |lambda| inside the zero cluster (0 if the cluster is empty).
  double null_cluster_max = 0.0;
  /// Smallest |lambda| outside the zero cluster (infinity if none).
  double nearest_nonzero = 0.0;
  /// Some eigenvalue lies within 10% of tol_zero.
  bool ambiguous = false;
  std::string warning;
};

Classification classify_spectrum(const Spectrum& spectrum);

struct BetaCount {
  int beta = 0;
  /// Every computed eigenvalue was counted, so beta may exceed the reported value.
  bool truncated = false;
  std::string warning;
};

/// Number of eigenvalues <= rho + tol_zero.
BetaCount beta_count(const Spectrum& spectrum, double rho);

}  // namespace fbms
