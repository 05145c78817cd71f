#pragma once

#include <vector>

#include "blocksdp/linalg.hpp"
#include "blocksdp/types.hpp"

namespace blocksdp {

// Denominators for the block probability estimate. BlockCounts divides by the
// actual number of node pairs per block pair (self-pairs excluded on the
// diagonal), yielding empirical densities. Literal reproduces the printed
// 1/n^2 off-diagonal and 1/(n(n-1)) diagonal normalizations verbatim.
enum class QNormalization { BlockCounts, Literal };

struct HistogramEstimate {
  Labels labels;                 // canonical (diagonal of Q_hat descending)
  Matrix Q_hat;                  // K x K
  Matrix M_hat;                  // n x n block-constant expansion Z Q Z^T
  std::vector<int> permutation;  // canonical class c came from permutation[c]
};

// Top-K eigenvectors of a cluster-matrix estimate, k-means on the rows.
Labels labels_from_x(const Matrix& x, int K, std::uint64_t seed,
                     const KmeansOptions& opts = {});

Matrix estimate_q(const Matrix& a, const Labels& labels,
                  QNormalization norm = QNormalization::BlockCounts);

struct Canonicalized {
  Matrix q;
  Labels labels;
  std::vector<int> permutation;
};

// Reorders classes so diag(q) is non-increasing; ties broken by class size
// descending, then lowest original index. Idempotent.
Canonicalized canonicalize(const Matrix& q, const Labels& labels);

// Z q Z^T for the one-hot membership Z of labels (diagonal included).
Matrix block_expand(const Matrix& q, const Labels& labels);

// Full pipeline: labels_from_x, estimate_q, canonicalize, expand.
HistogramEstimate histogram(const Matrix& a, const Matrix& x, int K,
                            std::uint64_t seed,
                            QNormalization norm = QNormalization::BlockCounts,
                            const KmeansOptions& opts = {});

// Same pipeline with the clustering step replaced by fixed labels.
HistogramEstimate histogram_with_labels(const Matrix& a, const Labels& labels,
                                        QNormalization norm = QNormalization::BlockCounts);

}  // namespace blocksdp
