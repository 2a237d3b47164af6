#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "fbms/immersed_surface.hpp"

namespace fbms {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

/// Scalar P1 stiffness  K_ij = sum_e A_e grad N_i . grad N_j.
SparseMatrix scalar_stiffness(const ImmersedSurface& immersed);
/// Scalar P1 mass, consistent (A_e/12 (1 + delta_ij)) or row-lumped (A_e/3).
SparseMatrix scalar_mass(const ImmersedSurface& immersed, bool lumped = false);
/// Scalar boundary mass  int_{dSigma} N_i N_j dL, consistent or lumped.
SparseMatrix boundary_mass(const ImmersedSurface& immersed, bool lumped = false);

/// Two-point Gauss rule on [0, 1].
inline constexpr double kGauss2[2] = {0.21132486540518711775, 0.78867513459481288225};

/// Sums per-chunk triplet lists in chunk order. `fill(chunk, out)` appends the
/// contributions of elements chunk_range(n, chunks, chunk). The result is
/// independent of the thread count.
SparseMatrix assemble_chunked(int rows, int cols, std::size_t n_items,
                              const std::function<void(std::size_t, std::size_t, Triplets&)>& fill);

/// Kronecker product of a scalar matrix with a dense 3x3 block.
SparseMatrix kron3(const SparseMatrix& s, const Mat3& block);

/// Exact symmetrization 0.5 (A + A^T).
SparseMatrix symmetrize(const SparseMatrix& a);

}  // namespace fbms
