#include "blocksdp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace blocksdp {

namespace {

Matrix contingency(const Labels& a, const Labels& b) {
  Matrix c = Matrix::Zero(a.K, b.K);
  for (int i = 0; i < a.values.size(); ++i)
    c(a.values[i] - 1, b.values[i] - 1) += 1.0;
  return c;
}

void check_lengths(const Labels& a, const Labels& b, const char* who) {
  a.validate();
  b.validate();
  if (a.values.size() != b.values.size() || a.values.size() < 1)
    throw std::invalid_argument(std::string(who) + ": labelings must have equal nonzero length");
}

double entropy(const Vector& counts, double n) {
  double h = 0.0;
  for (int i = 0; i < counts.size(); ++i)
    if (counts[i] > 0.0) h -= counts[i] / n * std::log(counts[i] / n);
  return h;
}

}  // namespace

double nmi(const Labels& a, const Labels& b) {
  check_lengths(a, b, "nmi");
  const double n = static_cast<double>(a.values.size());
  const Matrix c = contingency(a, b);
  const Vector rows = c.rowwise().sum();
  const Vector cols = c.colwise().sum();
  const double ha = entropy(rows, n);
  const double hb = entropy(cols, n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;
  double info = 0.0;
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j)
      if (c(i, j) > 0.0)
        info += c(i, j) / n * std::log(n * c(i, j) / (rows[i] * cols[j]));
  return std::clamp(info / std::sqrt(ha * hb), 0.0, 1.0);
}

MetricValue adjusted_nmi(const Labels& a, const Labels& b, int K, int reps,
                         std::uint64_t seed) {
  check_lengths(a, b, "adjusted_nmi");
  if (K < 1) throw std::invalid_argument("adjusted_nmi: K >= 1");
  if (reps < 1) throw std::invalid_argument("adjusted_nmi: reps >= 1");
  const int n = static_cast<int>(a.values.size());
  Rng rng(seed);
  Labels guess;
  guess.K = K;
  guess.values.resize(n);
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    for (int i = 0; i < n; ++i) guess.values[i] = rng.uniform_int(K) + 1;
    const double v = nmi(a, guess);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / reps;
  MetricValue out;
  out.name = "adjusted_nmi";
  out.value = nmi(a, b) - mean;
  out.replications = reps;
  if (reps > 1) {
    const double var = std::max(0.0, (sumsq - reps * mean * mean) / (reps - 1));
    out.std_error = std::sqrt(var / reps);
  }
  return out;
}

double relative_error(const Matrix& x_hat, const Matrix& x0) {
  if (x_hat.rows() != x0.rows() || x_hat.cols() != x0.cols())
    throw std::invalid_argument("relative_error: dimension mismatch");
  const double denom = x0.norm();
  if (denom == 0.0)
    throw std::invalid_argument("relative_error: reference matrix is zero");
  return (x_hat - x0).norm() / denom;
}

int misclassified(const Labels& a, const Labels& b) {
  check_lengths(a, b, "misclassified");
  const int n = static_cast<int>(a.values.size());
  const int K = std::max(a.K, b.K);
  Matrix c = Matrix::Zero(K, K);
  for (int i = 0; i < n; ++i) c(a.values[i] - 1, b.values[i] - 1) += 1.0;

  double best = 0.0;
  if (K <= 8) {
    std::vector<int> perm(K);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double agree = 0.0;
      for (int i = 0; i < K; ++i) agree += c(i, perm[i]);
      best = std::max(best, agree);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    if (K > 24) throw std::invalid_argument("misclassified: K too large");
    // dp[S]: best agreement assigning rows 0..popcount(S)-1 to column set S.
    std::vector<double> dp(std::size_t{1} << K, -1.0);
    dp[0] = 0.0;
    for (std::size_t s = 0; s < dp.size(); ++s) {
      if (dp[s] < 0.0) continue;
      const int row = __builtin_popcountll(s);
      if (row == K) continue;
      for (int j = 0; j < K; ++j) {
        if (s & (std::size_t{1} << j)) continue;
        const std::size_t t = s | (std::size_t{1} << j);
        dp[t] = std::max(dp[t], dp[s] + c(row, j));
      }
    }
    best = dp.back();
  }
  return n - static_cast<int>(std::lround(best));
}

}  // namespace blocksdp
