#pragma once

#include "blocksdp/types.hpp"

namespace blocksdp {

// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
// descending order; vectors.col(i) pairs with values[i].
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

EigenDecomposition sym_eig(const Matrix& s);

// Nearest (Frobenius) positive semidefinite matrix: negative eigenvalues
// clipped to zero.
Matrix psd_project(const Matrix& s);

// Largest absolute eigenvalue.
double spectral_norm(const Matrix& s);

struct KmeansOptions {
  int restarts = 10;
  int max_iters = 300;
  double rel_tol = 1e-8;
};

struct KmeansResult {
  Labels labels;
  Matrix centroids;
  double wcss = 0.0;
};

// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs. Empty
// clusters are re-seeded at the point farthest from its assigned centroid.
KmeansResult kmeans(const Matrix& points, int K, std::uint64_t seed,
                    const KmeansOptions& opts = {});

}  // namespace blocksdp
