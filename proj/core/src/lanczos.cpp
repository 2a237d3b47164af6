#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "fbms/errors.hpp"
#include "fbms/spectral.hpp"

namespace fbms {

namespace {

// Subspace with M-orthonormal columns Q, together with Z = OP Q and MQ = M Q.
struct Basis {
  Matrix Q, Z, MQ;
  int cols = 0;
};

class ShiftInvert {
 public:
  ShiftInvert(const SparseMatrix& A, const SparseMatrix& M, double sigma) : M_(M) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      SparseMatrix shifted = A - sigma * M;
      llt_.compute(shifted);
      if (llt_.info() == Eigen::Success) {
        sigma_ = sigma;
        return;
      }
      sigma = 2.0 * sigma - 1.0;
    }
    throw ConvergenceError("no shift below the spectrum was found");
  }

  double sigma() const { return sigma_; }
  Vector apply(const Vector& x) const { return llt_.solve(M_ * x); }

 private:
  const SparseMatrix& M_;
  Eigen::SimplicialLLT<SparseMatrix> llt_;
  double sigma_ = 0.0;
};

// M-orthogonalize w against the basis (repeated Gram-Schmidt until the norm
// stops dropping) and normalize it. Returns false when w collapses.
bool orthonormalize(const Basis& b, const SparseMatrix& M, Vector& w) {
  const double before = std::sqrt(std::max(0.0, w.dot(M * w)));
  if (!(before > 0.0)) return false;
  double norm = before;
  for (int pass = 0; pass < 4 && b.cols > 0; ++pass) {
    const Vector c = b.MQ.leftCols(b.cols).transpose() * w;
    w -= b.Q.leftCols(b.cols) * c;
    const double next = std::sqrt(std::max(0.0, w.dot(M * w)));
    const bool settled = next > 0.7 * norm;
    norm = next;
    if (settled && pass > 0) break;
  }
  if (norm <= 1e-14 * before) return false;
  w /= norm;
  return true;
}

}  // namespace

Spectrum lanczos_spectrum(const SparseMatrix& A, const SparseMatrix& M, const SolveOptions& opts) {
  const int n = static_cast<int>(A.rows());
  const int k = opts.k;
  const int bs = std::max(1, opts.block_size);
  const int keep = std::min(n, k + bs);
  const int max_cols = std::min(n, std::max(2 * k + 2 * bs, k + 40));

  const ShiftInvert op(A, M, -(1.0 + opts.rho));
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  auto random_vector = [&] {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
  };

  Basis b;
  b.Q.resize(n, max_cols);
  b.Z.resize(n, max_cols);
  b.MQ.resize(n, max_cols);
  auto append = [&](Vector w) {
    for (int tries = 0; !orthonormalize(b, M, w); ++tries) {
      if (tries > 8) throw ConvergenceError("could not extend the Krylov basis");
      w = random_vector();
    }
    b.Q.col(b.cols) = w;
    b.MQ.col(b.cols) = M * w;
    b.Z.col(b.cols) = op.apply(w);
    ++b.cols;
  };

  for (int j = 0; j < std::min(bs, max_cols); ++j) append(random_vector());
  int next = 0;  // first column whose image has not yet been used for expansion

  Spectrum s;
  s.solver = SolverKind::lanczos;
  s.reduced_dim = n;
  s.shift = op.sigma();

  int best = -1;
  int stalled = 0;
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    while (b.cols < max_cols) {
      const int src = next < b.cols ? next++ : b.cols - 1;
      append(b.Z.col(src));
    }

    // Rayleigh-Ritz on the shift-inverted operator, which is M-self-adjoint.
    const int m = b.cols;
    Matrix H = b.MQ.leftCols(m).transpose() * b.Z.leftCols(m);
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> rr(H);
    if (rr.info() != Eigen::Success) throw ConvergenceError("Rayleigh-Ritz eigensolver failed");
    // Largest theta first: theta = 1 / (lambda - sigma).
    const Matrix S = rr.eigenvectors().rowwise().reverse();
    const Vector theta = rr.eigenvalues().reverse();

    Matrix Y = b.Q.leftCols(m) * S.leftCols(keep);
    Matrix YZ = b.Z.leftCols(m) * S.leftCols(keep);
    Vector lambda(keep);
    Vector res(keep);
    int converged = 0;
    for (int j = 0; j < keep; ++j) {
      lambda[j] = op.sigma() + 1.0 / theta[j];
      const Vector y = Y.col(j);
      const Vector my = M * y;
      res[j] = (A * y - lambda[j] * my).norm() / my.norm();
      if (j < k && res[j] <= opts.residual_tol && converged == j) ++converged;
    }

    // Ritz residuals bottom out near rounding level on fine meshes; once progress
    // stops, accept pairs that already meet the reporting bound.
    if (converged > best) {
      best = converged;
      stalled = 0;
    } else {
      ++stalled;
    }
    const bool floor_reached = stalled >= 8 && res.head(k).maxCoeff() <= kResidualBound;

    if (converged >= k || m >= n || floor_reached) {
      std::vector<int> order(k);
      for (int j = 0; j < k; ++j) order[j] = j;
      std::stable_sort(order.begin(), order.end(), [&](int a, int c) { return lambda[a] < lambda[c]; });
      s.eigenvalues.resize(k);
      Matrix vecs(n, k);
      for (int j = 0; j < k; ++j) {
        s.eigenvalues[j] = lambda[order[j]];
        vecs.col(j) = Y.col(order[j]);
        s.max_residual = std::max(s.max_residual, res[order[j]]);
      }
      if (opts.want_vectors) s.eigenvectors = std::move(vecs);
      return s;
    }

    // Thick restart: keep the leading Ritz vectors (already M-orthonormal).
    b.Q.leftCols(keep) = Y;
    b.Z.leftCols(keep) = YZ;
    for (int j = 0; j < keep; ++j) b.MQ.col(j) = M * Y.col(j);
    b.cols = keep;
    // Expand from the images of the first unconverged Ritz vectors.
    next = converged;
  }
  throw ConvergenceError("Lanczos did not converge after " + std::to_string(opts.max_restarts) + " restarts");
}

}  // namespace fbms
