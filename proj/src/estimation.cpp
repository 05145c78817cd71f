#include "blocksdp/estimation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace blocksdp {

Labels labels_from_x(const Matrix& x, int K, std::uint64_t seed,
                     const KmeansOptions& opts) {
  if (x.rows() != x.cols())
    throw std::invalid_argument("labels_from_x: square input required");
  const int n = static_cast<int>(x.rows());
  if (K < 1 || K > n) throw std::invalid_argument("labels_from_x: K in 1..n");
  const EigenDecomposition eig = sym_eig(x);
  const Matrix points = eig.vectors.leftCols(K);
  return kmeans(points, K, seed, opts).labels;
}

namespace {

std::vector<int> class_counts(const Labels& labels) {
  std::vector<int> counts(labels.K, 0);
  for (int i = 0; i < labels.values.size(); ++i) ++counts[labels.values[i] - 1];
  return counts;
}

}  // namespace

Matrix estimate_q(const Matrix& a, const Labels& labels, QNormalization norm) {
  labels.validate();
  const int n = static_cast<int>(a.rows());
  if (a.rows() != a.cols() || labels.values.size() != n)
    throw std::invalid_argument("estimate_q: adjacency and labels disagree");
  const int K = labels.K;
  const std::vector<int> counts = class_counts(labels);

  Matrix sums = Matrix::Zero(K, K);
  Vector self = Vector::Zero(K);
  for (int i = 0; i < n; ++i) {
    const int r = labels.values[i] - 1;
    self[r] += a(i, i);
    for (int j = 0; j < n; ++j) sums(r, labels.values[j] - 1) += a(i, j);
  }

  Matrix q(K, K);
  for (int r = 0; r < K; ++r)
    for (int k = 0; k < K; ++k) {
      if (norm == QNormalization::Literal) {
        const double denom = r == k ? static_cast<double>(n) * (n - 1)
                                    : static_cast<double>(n) * n;
        q(r, k) = sums(r, k) / denom;
        continue;
      }
      if (counts[r] == 0 || counts[k] == 0)
        throw std::invalid_argument("estimate_q: empty class in pair-count mode");
      if (r == k) {
        const double pairs = static_cast<double>(counts[r]) * (counts[r] - 1);
        q(r, r) = pairs > 0 ? (sums(r, r) - self[r]) / pairs : 0.0;
      } else {
        q(r, k) = sums(r, k) / (static_cast<double>(counts[r]) * counts[k]);
      }
    }
  return (q + q.transpose()) / 2.0;
}

Canonicalized canonicalize(const Matrix& q, const Labels& labels) {
  labels.validate();
  const int K = labels.K;
  if (q.rows() != K || q.cols() != K)
    throw std::invalid_argument("canonicalize: q must be K x K");
  const std::vector<int> counts = class_counts(labels);

  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (q(i, i) != q(j, j)) return q(i, i) > q(j, j);
    if (counts[i] != counts[j]) return counts[i] > counts[j];
    return i < j;
  });

  std::vector<int> new_of_old(K);
  for (int c = 0; c < K; ++c) new_of_old[order[c]] = c;

  Canonicalized out;
  out.permutation = order;
  out.q.resize(K, K);
  for (int r = 0; r < K; ++r)
    for (int k = 0; k < K; ++k) out.q(r, k) = q(order[r], order[k]);
  out.labels.K = K;
  out.labels.values.resize(labels.values.size());
  for (int i = 0; i < labels.values.size(); ++i)
    out.labels.values[i] = new_of_old[labels.values[i] - 1] + 1;
  return out;
}

Matrix block_expand(const Matrix& q, const Labels& labels) {
  labels.validate();
  if (q.rows() != labels.K || q.cols() != labels.K)
    throw std::invalid_argument("block_expand: q must be K x K");
  const int n = static_cast<int>(labels.values.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = q(labels.values[i] - 1, labels.values[j] - 1);
  return m;
}

HistogramEstimate histogram(const Matrix& a, const Matrix& x, int K,
                            std::uint64_t seed, QNormalization norm,
                            const KmeansOptions& opts) {
  if (a.rows() != x.rows() || a.cols() != x.cols())
    throw std::invalid_argument("histogram: adjacency and estimate disagree");
  return histogram_with_labels(a, labels_from_x(x, K, seed, opts), norm);
}

HistogramEstimate histogram_with_labels(const Matrix& a, const Labels& labels,
                                        QNormalization norm) {
  const Matrix q = estimate_q(a, labels, norm);
  Canonicalized canon = canonicalize(q, labels);
  HistogramEstimate out;
  out.labels = std::move(canon.labels);
  out.Q_hat = std::move(canon.q);
  out.permutation = std::move(canon.permutation);
  out.M_hat = block_expand(out.Q_hat, out.labels);
  return out;
}

}  // namespace blocksdp
