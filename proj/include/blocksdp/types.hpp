#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace blocksdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

// Deterministic RNG used everywhere randomness is needed. Wraps mt19937_64
// but draws uniforms through a fixed 53-bit construction so results do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    int v = static_cast<int>(uniform() * n);
    return v >= n ? n - 1 : v;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Derive an independent stream from (seed, tag) without sharing state.
  static Rng derive(std::uint64_t seed, std::uint64_t tag) {
    return Rng(mix(seed) ^ mix(tag * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL));
  }

 private:
  // splitmix64 finalizer; decorrelates nearby seeds.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

// Community labels, values in 1..K.
struct Labels {
  IntVector values;
  int K = 0;

  int n() const { return static_cast<int>(values.size()); }

  void validate() const {
    if (K < 1) throw std::invalid_argument("Labels: K must be >= 1");
    for (int i = 0; i < values.size(); ++i)
      if (values[i] < 1 || values[i] > K)
        throw std::invalid_argument("Labels: value outside 1..K at node " +
                                    std::to_string(i));
  }

  // n x K one-hot membership matrix.
  Matrix membership() const {
    validate();
    Matrix z = Matrix::Zero(values.size(), K);
    for (int i = 0; i < values.size(); ++i) z(i, values[i] - 1) = 1.0;
    return z;
  }

  static Labels from_membership(const Matrix& z) {
    Labels out;
    out.K = static_cast<int>(z.cols());
    out.values.resize(z.rows());
    for (int i = 0; i < z.rows(); ++i) {
      int hits = 0, which = -1;
      for (int k = 0; k < z.cols(); ++k) {
        if (z(i, k) == 1.0) {
          ++hits;
          which = k;
        } else if (z(i, k) != 0.0) {
          throw std::invalid_argument("from_membership: entries must be 0/1");
        }
      }
      if (hits != 1)
        throw std::invalid_argument("from_membership: each row needs exactly one 1");
      out.values[i] = which + 1;
    }
    return out;
  }
};

// Community sizes, nodes laid out consecutively: block k spans
// [offset(k), offset(k) + sizes[k]).
struct BlockSpec {
  std::vector<int> sizes;

  int K() const { return static_cast<int>(sizes.size()); }

  int n() const {
    int total = 0;
    for (int s : sizes) total += s;
    return total;
  }

  int m() const {
    if (sizes.empty()) throw std::invalid_argument("BlockSpec: empty");
    int mn = sizes[0];
    for (int s : sizes) mn = std::min(mn, s);
    return mn;
  }

  bool is_balanced() const {
    for (int s : sizes)
      if (s != sizes[0]) return false;
    return true;
  }

  void validate() const {
    if (sizes.empty()) throw std::invalid_argument("BlockSpec: empty");
    for (int s : sizes)
      if (s < 1) throw std::invalid_argument("BlockSpec: sizes must be >= 1");
  }

  int offset(int k) const {
    int o = 0;
    for (int j = 0; j < k; ++j) o += sizes[j];
    return o;
  }

  int block_of(int node) const {
    int o = 0;
    for (int k = 0; k < K(); ++k) {
      o += sizes[k];
      if (node < o) return k;
    }
    throw std::out_of_range("BlockSpec::block_of");
  }

  // n_k / m ratios.
  Vector xi() const {
    const int mm = m();
    Vector x(K());
    for (int k = 0; k < K(); ++k) x[k] = static_cast<double>(sizes[k]) / mm;
    return x;
  }

  Labels labels() const {
    Labels l;
    l.K = K();
    l.values.resize(n());
    int pos = 0;
    for (int k = 0; k < K(); ++k)
      for (int j = 0; j < sizes[k]; ++j) l.values[pos++] = k + 1;
    return l;
  }

  // Ground-truth cluster matrix X0 (block diagonal of all-ones).
  Matrix cluster_matrix() const {
    Matrix x = Matrix::Zero(n(), n());
    int pos = 0;
    for (int k = 0; k < K(); ++k) {
      x.block(pos, pos, sizes[k], sizes[k]).setOnes();
      pos += sizes[k];
    }
    return x;
  }

  static BlockSpec balanced(int K, int m) {
    if (K < 1 || m < 1) throw std::invalid_argument("BlockSpec::balanced: K,m >= 1");
    BlockSpec b;
    b.sizes.assign(K, m);
    return b;
  }
};

// Symmetric K x K matrix of connection probabilities. Diagonal entries are
// within-block probabilities p_k, off-diagonal entries q_kl.
struct ProbabilityMatrix {
  Matrix values;

  int K() const { return static_cast<int>(values.rows()); }

  void validate() const {
    if (values.rows() != values.cols() || values.rows() < 1)
      throw std::invalid_argument("ProbabilityMatrix: must be square and nonempty");
    for (int i = 0; i < values.rows(); ++i)
      for (int j = 0; j < values.cols(); ++j) {
        double v = values(i, j);
        if (!(v >= 0.0 && v <= 1.0))
          throw std::invalid_argument("ProbabilityMatrix: entries must lie in [0,1]");
        if (values(i, j) != values(j, i))
          throw std::invalid_argument("ProbabilityMatrix: must be symmetric");
      }
  }

  double p(int k) const { return values(k, k); }
  double q(int k, int l) const { return values(k, l); }

  // Largest off-diagonal entry in row k.
  double q_star(int k) const {
    double best = 0.0;
    bool any = false;
    for (int l = 0; l < K(); ++l)
      if (l != k) {
        best = any ? std::max(best, values(k, l)) : values(k, l);
        any = true;
      }
    if (!any) throw std::invalid_argument("q_star: needs K >= 2");
    return best;
  }

  double q_max() const {
    double best = 0.0;
    for (int k = 0; k < K(); ++k)
      for (int l = k + 1; l < K(); ++l) best = std::max(best, values(k, l));
    return best;
  }

  double p_min() const {
    double best = values(0, 0);
    for (int k = 0; k < K(); ++k) best = std::min(best, values(k, k));
    return best;
  }

  static ProbabilityMatrix planted_partition(int K, double p, double q) {
    if (K < 1) throw std::invalid_argument("planted_partition: K >= 1");
    ProbabilityMatrix psi;
    psi.values = Matrix::Constant(K, K, q);
    psi.values.diagonal().setConstant(p);
    psi.validate();
    return psi;
  }
};

}  // namespace blocksdp
