#include "fbms/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "fbms/errors.hpp"

namespace fbms {

std::string_view to_string(SolverKind kind) {
  return kind == SolverKind::dense ? "dense" : "lanczos";
}

double default_tol_zero(const Vector& eigenvalues) {
  double lo = 0.0;
  for (double l : eigenvalues) lo = std::min(lo, l);
  return std::max(1e-9, 1e-3 * std::abs(lo));
}

namespace {

double pair_residual(const SparseMatrix& A, const SparseMatrix& M, double lambda, const Vector& v) {
  const Vector mv = M * v;
  return (A * v - lambda * mv).norm() / mv.norm();
}

}  // namespace

Spectrum dense_spectrum(const SparseMatrix& A, const SparseMatrix& M, int k, bool want_vectors) {
  const Matrix a = Matrix(A);
  const Matrix m = Matrix(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(a, m, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw ConvergenceError("dense generalized eigensolver failed");
  Spectrum s;
  s.solver = SolverKind::dense;
  s.reduced_dim = static_cast<int>(A.rows());
  s.eigenvalues = solver.eigenvalues().head(k);
  const Matrix vecs = solver.eigenvectors().leftCols(k);
  for (int j = 0; j < k; ++j)
    s.max_residual = std::max(s.max_residual, pair_residual(A, M, s.eigenvalues[j], vecs.col(j)));
  if (want_vectors) s.eigenvectors = vecs;
  return s;
}

Spectrum solve_pencil(const SparseMatrix& A, const SparseMatrix& M, const SolveOptions& opts) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || M.rows() != n || M.cols() != n) throw DimensionError("pencil matrices must be square and equal size");
  if (opts.k < 1 || opts.k > n)
    throw DimensionError("requested " + std::to_string(opts.k) + " eigenpairs of a " + std::to_string(n) +
                         "-dimensional problem");
  Spectrum s = (!opts.force_lanczos && n <= opts.dense_threshold) ? dense_spectrum(A, M, opts.k, opts.want_vectors)
                                                                  : lanczos_spectrum(A, M, opts);
  if (s.max_residual > kResidualBound)
    throw ConvergenceError("eigenpair residual " + std::to_string(s.max_residual) + " exceeds bound");
  s.tol_zero = opts.tol_zero ? *opts.tol_zero : default_tol_zero(s.eigenvalues);
  if (!(s.tol_zero > 0.0)) throw ParameterError("tol_zero must be positive");
  return s;
}

Spectrum solve_spectrum(const FormAssembly& form, const SolveOptions& opts) {
  return solve_pencil(form.reduced_stiffness(), form.reduced_mass(), opts);
}

Classification classify_spectrum(const Spectrum& spectrum) {
  Classification c;
  const double tol = spectrum.tol_zero;
  c.nearest_nonzero = std::numeric_limits<double>::infinity();
  std::vector<double> close;
  for (double l : spectrum.eigenvalues) {
    if (l < -tol) {
      ++c.index;
    } else if (std::abs(l) <= tol) {
      ++c.nullity;
      c.null_cluster_max = std::max(c.null_cluster_max, std::abs(l));
    }
    if (std::abs(l) > tol) c.nearest_nonzero = std::min(c.nearest_nonzero, std::abs(l));
    if (std::abs(l) >= 0.9 * tol && std::abs(l) <= 1.1 * tol) close.push_back(l);
  }
  if (!close.empty()) {
    c.ambiguous = true;
    c.warning = "AmbiguityWarning: " + std::to_string(close.size()) +
                " eigenvalue(s) within 10% of tol_zero; classification unstable";
  }
  if (spectrum.truncated() && c.index + c.nullity == spectrum.size())
    c.warning += (c.warning.empty() ? "" : "; ") + std::string("all computed eigenvalues are nonpositive, increase k");
  return c;
}

BetaCount beta_count(const Spectrum& spectrum, double rho) {
  BetaCount b;
  for (double l : spectrum.eigenvalues)
    if (l <= rho + spectrum.tol_zero) ++b.beta;
  if (b.beta == spectrum.size() && spectrum.truncated()) {
    b.truncated = true;
    b.warning = "every computed eigenvalue is <= rho; beta is clamped at k = " + std::to_string(spectrum.size());
  }
  return b;
}

}  // namespace fbms
