#include "fbms/fem.hpp"

#include <functional>

#include "fbms/parallel.hpp"

namespace fbms {

namespace {
constexpr std::size_t kChunks = 64;
}

SparseMatrix assemble_chunked(int rows, int cols, std::size_t n_items,
                              const std::function<void(std::size_t, std::size_t, Triplets&)>& fill) {
  std::vector<Triplets> parts(kChunks);
  parallel_for(kChunks, [&](std::size_t c) {
    const auto r = chunk_range(n_items, kChunks, c);
    fill(r.begin, r.end, parts[c]);
  });
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  Triplets all;
  all.reserve(total);
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  SparseMatrix out(rows, cols);
  out.setFromTriplets(all.begin(), all.end());
  return out;
}

SparseMatrix scalar_stiffness(const ImmersedSurface& immersed) {
  const auto& tris = immersed.surface().triangles();
  const int nv = immersed.surface().num_vertices();
  return assemble_chunked(nv, nv, tris.size(), [&](std::size_t b, std::size_t e, Triplets& out) {
    for (std::size_t f = b; f < e; ++f) {
      const auto& el = immersed.element(static_cast<int>(f));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          out.emplace_back(tris[f][i], tris[f][j], el.area * el.grad[i].dot(el.grad[j]));
    }
  });
}

SparseMatrix scalar_mass(const ImmersedSurface& immersed, bool lumped) {
  const auto& tris = immersed.surface().triangles();
  const int nv = immersed.surface().num_vertices();
  return assemble_chunked(nv, nv, tris.size(), [&](std::size_t b, std::size_t e, Triplets& out) {
    for (std::size_t f = b; f < e; ++f) {
      const double a = immersed.element(static_cast<int>(f)).area;
      for (int i = 0; i < 3; ++i) {
        if (lumped) {
          out.emplace_back(tris[f][i], tris[f][i], a / 3.0);
          continue;
        }
        for (int j = 0; j < 3; ++j) out.emplace_back(tris[f][i], tris[f][j], a / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  });
}

SparseMatrix boundary_mass(const ImmersedSurface& immersed, bool lumped) {
  const auto& s = immersed.surface();
  const auto& x = s.vertices();
  Triplets t;
  for (const auto& e : s.edges()) {
    if (!e.is_boundary()) continue;
    const double len = (x[e.v0] - x[e.v1]).norm();
    if (lumped) {
      t.emplace_back(e.v0, e.v0, len / 2.0);
      t.emplace_back(e.v1, e.v1, len / 2.0);
    } else {
      t.emplace_back(e.v0, e.v0, len / 3.0);
      t.emplace_back(e.v1, e.v1, len / 3.0);
      t.emplace_back(e.v0, e.v1, len / 6.0);
      t.emplace_back(e.v1, e.v0, len / 6.0);
    }
  }
  SparseMatrix out(s.num_vertices(), s.num_vertices());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix kron3(const SparseMatrix& s, const Mat3& block) {
  Triplets t;
  t.reserve(static_cast<std::size_t>(s.nonZeros()) * 9);
  for (int k = 0; k < s.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(s, k); it; ++it)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          if (block(a, b) != 0.0) t.emplace_back(3 * it.row() + a, 3 * it.col() + b, it.value() * block(a, b));
  SparseMatrix out(3 * s.rows(), 3 * s.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix symmetrize(const SparseMatrix& a) {
  SparseMatrix at = a.transpose();
  SparseMatrix out = 0.5 * (a + at);
  out.prune(0.0);
  return out;
}

}  // namespace fbms
