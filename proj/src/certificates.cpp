#include "blocksdp/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blocksdp/linalg.hpp"
#include "blocksdp/model.hpp"

namespace blocksdp {

namespace {

void check_witness_inputs(const Matrix& a, const BlockSpec& blocks,
                          const ProbabilityMatrix& psi, const char* who) {
  blocks.validate();
  psi.validate();
  if (blocks.K() < 2) throw std::invalid_argument(std::string(who) + ": needs K >= 2");
  if (psi.K() != blocks.K())
    throw std::invalid_argument(std::string(who) + ": psi and blocks disagree on K");
  if (!blocks.is_balanced())
    throw std::invalid_argument(std::string(who) + ": blocks must be balanced");
  if (a.rows() != a.cols() || a.rows() != blocks.n())
    throw std::invalid_argument(std::string(who) + ": adjacency size mismatch");
  if (!a.allFinite())
    throw std::invalid_argument(std::string(who) + ": adjacency must be finite");
}

// Adjacency and mean matrices under the chosen diagonal convention.
struct ConventionPair {
  Matrix a;
  Matrix mean;
};

ConventionPair apply_convention(const Matrix& a, const BlockSpec& blocks,
                                const ProbabilityMatrix& psi,
                                const WitnessOptions& opts) {
  ConventionPair out;
  out.a = a;
  out.mean = mean_matrix(psi, blocks);
  if (opts.convention == DiagConvention::ZeroDiagonal) {
    out.a.diagonal().setZero();
    out.mean.diagonal().setZero();
  } else {
    Rng rng(opts.fill_seed);
    for (int i = 0; i < blocks.n(); ++i)
      out.a(i, i) = rng.bernoulli(psi.p(blocks.block_of(i))) ? 1.0 : 0.0;
  }
  return out;
}

// d(i, l): weight from node i into block l.
Matrix block_degrees(const Matrix& a, const BlockSpec& blocks) {
  const int n = blocks.n(), K = blocks.K();
  Matrix d = Matrix::Zero(n, K);
  for (int l = 0; l < K; ++l) {
    const int o = blocks.offset(l), s = blocks.sizes[l];
    d.col(l) = a.middleCols(o, s).rowwise().sum();
  }
  return d;
}

double offdiag_block_norm(const Matrix& delta, const BlockSpec& blocks) {
  Matrix off = delta;
  for (int k = 0; k < blocks.K(); ++k) {
    const int o = blocks.offset(k), s = blocks.sizes[k];
    off.block(o, o, s, s).setZero();
  }
  return spectral_norm(off);
}

}  // namespace

WitnessCertificate witness_sdp1(const Matrix& a, const BlockSpec& blocks,
                                const ProbabilityMatrix& psi,
                                const WitnessOptions& opts) {
  check_witness_inputs(a, blocks, psi, "witness_sdp1");
  const int K = blocks.K();
  const int m = blocks.sizes[0];
  const int n = blocks.n();
  const ConventionPair cp = apply_convention(a, blocks, psi, opts);
  const Matrix d = block_degrees(cp.a, blocks);

  // Block-average cross degrees dbar(k,l).
  Matrix dbar(K, K);
  for (int k = 0; k < K; ++k) {
    const int o = blocks.offset(k);
    for (int l = 0; l < K; ++l) dbar(k, l) = d.col(l).segment(o, m).mean();
  }

  // Tightest feasible slack levels: psi_pair(k,l) is the smallest value of
  // (phi_k + phi_l)/2 keeping the pair's multiplier block nonnegative.
  Matrix psi_pair = Matrix::Zero(K, K);
  for (int k = 0; k < K; ++k)
    for (int l = k + 1; l < K; ++l) {
      const int ok = blocks.offset(k), ol = blocks.offset(l);
      const double max_dl = d.col(l).segment(ok, m).maxCoeff();
      const double max_dk = d.col(k).segment(ol, m).maxCoeff();
      psi_pair(k, l) = psi_pair(l, k) = (max_dl + max_dk - dbar(k, l)) / m;
    }

  Vector phi(K);
  switch (opts.phi_mode) {
    case PhiMode::Auto:
      for (int k = 0; k < K; ++k) {
        double best = 0.0;
        for (int l = 0; l < K; ++l)
          if (l != k) best = std::max(best, psi_pair(k, l));
        phi[k] = best;
      }
      break;
    case PhiMode::Given:
      if (opts.phi_given.size() != K)
        throw std::invalid_argument("witness_sdp1: phi_given must have length K");
      phi = opts.phi_given;
      break;
    case PhiMode::Theory:
      for (int k = 0; k < K; ++k) {
        const double qbar = psi.q_star(k) * m;
        phi[k] = (qbar + 6.0 * std::sqrt(2.0 * opts.c2 * qbar * std::log(n))) / m;
      }
      break;
  }
  if ((phi.array() < 0.0).any())
    throw std::invalid_argument("witness_sdp1: phi must be nonnegative");

  // Nonnegativity multiplier blocks: entry (i,j) in block pair (k,l) is
  // (phi_k + phi_l)/2 - (d_i(l) + d_j(k) - dbar(k,l)) / m.
  double gamma_min = std::numeric_limits<double>::infinity();
  bool a3 = true;
  for (int k = 0; k < K; ++k)
    for (int l = k + 1; l < K; ++l) {
      const int ok = blocks.offset(k), ol = blocks.offset(l);
      const double level = 0.5 * (phi[k] + phi[l]);
      double pair_min = std::numeric_limits<double>::infinity();
      double pair_max = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double g =
              level - (d(ok + i, l) + d(ol + j, k) - dbar(k, l)) / m;
          pair_min = std::min(pair_min, g);
          pair_max = std::max(pair_max, g);
        }
      gamma_min = std::min(gamma_min, pair_min);
      if (!(pair_max > 1e-12)) a3 = false;
    }

  // Curvature: within-block connectivity beats the slack level plus noise.
  const Matrix delta = cp.a - cp.mean;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    const int o = blocks.offset(k);
    const double rho_k = d.col(k).segment(o, m).minCoeff() / m;
    const double block_noise = spectral_norm(delta.block(o, o, m, m));
    worst = std::min(worst, (rho_k - phi[k]) * m - block_noise);
  }
  const double off_noise = offdiag_block_norm(delta, blocks);

  WitnessCertificate cert;
  cert.phi = phi;
  cert.mu.resize(n);
  cert.nu.resize(n);
  for (int i = 0; i < n; ++i) {
    const int k = blocks.block_of(i);
    cert.mu[i] = 0.5 * phi[k];
    cert.nu[i] = d(i, k) - phi[k] * m;
  }
  cert.gamma_min = gamma_min;
  cert.curvature_margin = worst - off_noise;
  cert.a3_strict = a3;
  // Row-sum feasibility already pins any block-constant optimum to the truth,
  // so strict positivity of the entrywise multiplier is informational only.
  cert.holds = gamma_min >= 0.0 && cert.curvature_margin > 0.0;
  cert.convention = opts.convention;
  return cert;
}

WitnessCertificate witness_sdp2(const Matrix& a, const BlockSpec& blocks,
                                const ProbabilityMatrix& psi,
                                const WitnessOptions& opts) {
  check_witness_inputs(a, blocks, psi, "witness_sdp2");
  const int K = blocks.K();
  const int m = blocks.sizes[0];
  const int n = blocks.n();
  const ConventionPair cp = apply_convention(a, blocks, psi, opts);
  const Matrix d = block_degrees(cp.a, blocks);

  Matrix dbar(K, K);
  for (int k = 0; k < K; ++k) {
    const int o = blocks.offset(k);
    for (int l = 0; l < K; ++l) dbar(k, l) = d.col(l).segment(o, m).mean();
  }

  double mu;
  if (opts.mu_given) {
    mu = *opts.mu_given;
  } else {
    mu = 0.0;
    for (int k = 0; k < K; ++k)
      for (int l = k + 1; l < K; ++l) {
        const int ok = blocks.offset(k), ol = blocks.offset(l);
        const double max_dl = d.col(l).segment(ok, m).maxCoeff();
        const double max_dk = d.col(k).segment(ol, m).maxCoeff();
        mu = std::max(mu, (max_dl + max_dk - dbar(k, l)) / m);
      }
  }

  double gamma_min = std::numeric_limits<double>::infinity();
  bool a3 = true;
  for (int k = 0; k < K; ++k)
    for (int l = k + 1; l < K; ++l) {
      const int ok = blocks.offset(k), ol = blocks.offset(l);
      double pair_min = std::numeric_limits<double>::infinity();
      double pair_max = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double g = mu - (d(ok + i, l) + d(ol + j, k) - dbar(k, l)) / m;
          pair_min = std::min(pair_min, g);
          pair_max = std::max(pair_max, g);
        }
      gamma_min = std::min(gamma_min, pair_min);
      if (!(pair_max > 1e-12)) a3 = false;
    }

  const Matrix delta = cp.a - cp.mean;
  double rho = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    const int o = blocks.offset(k);
    rho = std::min(rho, d.col(k).segment(o, m).minCoeff() / m);
  }

  WitnessCertificate cert;
  cert.mu = Vector::Constant(1, mu);
  cert.nu.resize(n);
  for (int i = 0; i < n; ++i)
    cert.nu[i] = d(i, blocks.block_of(i)) - mu * m;
  cert.gamma_min = gamma_min;
  cert.curvature_margin = (rho - mu) * m - spectral_norm(delta);
  cert.a3_strict = a3;
  cert.holds = gamma_min >= 0.0 && cert.curvature_margin > 0.0;
  cert.convention = opts.convention;
  return cert;
}

ConditionReport check_sdp1_condition(const ProbabilityMatrix& psi, int m,
                                     ConditionConstants constants) {
  psi.validate();
  if (psi.K() < 2) throw std::invalid_argument("check_sdp1_condition: K >= 2");
  if (m < 2) throw std::invalid_argument("check_sdp1_condition: m >= 2");
  // Boundary models (p_k == q*_k) pass through and simply fail the condition;
  // only strict violations are rejected.
  for (int k = 0; k < psi.K(); ++k)
    if (psi.p(k) < psi.q_star(k))
      throw std::invalid_argument(
          "check_sdp1_condition: psi is not weakly assortative (classified: none)");
  const int K = psi.K();
  const double n = static_cast<double>(m) * K;
  const double logn = std::log(n);

  ConditionReport rep;
  rep.constants = constants;
  rep.C1 = std::max(constants.Cprime, (4.0 / 9.0) * (constants.c1 + 1.0));
  rep.C2 = std::max(std::sqrt(4.0 * (constants.c1 + 1.0)) + constants.C,
                    6.0 * std::sqrt(2.0 * (constants.c2 + 1.0)));

  double min_term = std::numeric_limits<double>::infinity();
  double min_p = std::numeric_limits<double>::infinity();
  double max_q = 0.0;
  for (int k = 0; k < K; ++k) {
    const double pk = psi.p(k) * m / logn;
    const double qk = psi.q_star(k) * m / logn;
    min_term = std::min(min_term,
                        (pk - qk) - rep.C2 * (std::sqrt(pk) + std::sqrt(qk)));
    min_p = std::min(min_p, pk);
    max_q = std::max(max_q, qk);
  }
  rep.margin = min_term - constants.C * std::sqrt(max_q * K / logn);
  rep.side_margin = min_p - rep.C1;
  rep.satisfied = rep.margin > 0.0 && rep.side_margin >= 0.0;
  return rep;
}

ConditionReport check_sdp2_condition(double p, double q, int m, int K,
                                     ConditionConstants constants,
                                     double degree_constant) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("check_sdp2_condition: p,q in [0,1]");
  if (!(p > q)) throw std::invalid_argument("check_sdp2_condition: needs p > q");
  if (m < 2 || K < 2) throw std::invalid_argument("check_sdp2_condition: m,K >= 2");
  const double n = static_cast<double>(m) * K;
  const double logn = std::log(n);

  ConditionReport rep;
  rep.constants = constants;
  rep.C1 = std::max(constants.Cprime, (4.0 / 9.0) * (constants.c1 + 1.0));
  rep.C2 = constants.C + std::max(std::sqrt(4.0 * (constants.c1 + 1.0)),
                                  3.0 * std::sqrt(4.0 * (constants.c2 + 1.0)));
  const double pt = p * m / logn;
  const double qt = q * m / logn;
  rep.margin = (pt - qt) - rep.C2 * (std::sqrt(pt) + std::sqrt(qt * K));
  rep.side_margin = pt - rep.C1;
  rep.satisfied = rep.margin > 0.0 && rep.side_margin >= 0.0;

  rep.degree_constant = degree_constant;
  const double d = p * m + (K - 1) * q * m;
  const double beta = q / p;
  rep.degree_margin =
      d - degree_constant * std::pow((1.0 + K * beta) / (1.0 - beta), 2) * logn;
  return rep;
}

NoiselessSdp2 sdp2_noiseless(const ProbabilityMatrix& psi, const BlockSpec& blocks) {
  psi.validate();
  blocks.validate();
  if (psi.K() != blocks.K())
    throw std::invalid_argument("sdp2_noiseless: psi and blocks disagree on K");
  NoiselessSdp2 out;
  const int K = psi.K();
  if (K < 2) {
    out.reason = "needs K >= 2";
    return out;
  }
  if (classify_assortativity(psi) == Assortativity::None) {
    out.reason = "model is not weakly assortative";
    return out;
  }
  // Strongest cross-block pair must be unique.
  int k0 = -1, l0 = -1;
  double best = -1.0;
  bool unique = true;
  for (int k = 0; k < K; ++k)
    for (int l = k + 1; l < K; ++l) {
      const double v = psi.q(k, l);
      if (v > best + 1e-12) {
        best = v;
        k0 = k;
        l0 = l;
        unique = true;
      } else if (std::abs(v - best) <= 1e-12) {
        unique = false;
      }
    }
  if (!unique) {
    out.reason = "strongest cross-block pair is not unique";
    return out;
  }

  const int m = blocks.m();
  const Vector xi = blocks.xi();
  double sum_out = 0.0, sum_in = 0.0;
  std::vector<int> merged;
  for (int k = 0; k < K; ++k) {
    if (psi.p(k) >= best) {
      merged.push_back(k);
      sum_in += xi[k] * (xi[k] - 1.0);
    } else {
      sum_out += xi[k];
    }
  }
  const double alpha =
      ((1.0 - 1.0 / m) * sum_out - sum_in) / (2.0 * xi[k0] * xi[l0]);
  out.alpha_star = alpha;
  out.k0 = k0;
  out.l0 = l0;
  out.merged = merged;
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    out.reason = "alpha* outside [0,1]";
    return out;
  }

  const int n = blocks.n();
  out.X = Matrix::Zero(n, n);
  std::vector<bool> in_i(K, false);
  for (int k : merged) in_i[k] = true;
  for (int k = 0; k < K; ++k) {
    const int o = blocks.offset(k), s = blocks.sizes[k];
    if (in_i[k])
      out.X.block(o, o, s, s).setOnes();
    else
      out.X.block(o, o, s, s).setIdentity();
  }
  out.X.block(blocks.offset(k0), blocks.offset(l0), blocks.sizes[k0],
              blocks.sizes[l0])
      .setConstant(alpha);
  out.X.block(blocks.offset(l0), blocks.offset(k0), blocks.sizes[l0],
              blocks.sizes[k0])
      .setConstant(alpha);
  out.applicable = true;
  return out;
}

Matrix sdp1_noiseless(const BlockSpec& blocks, int m) {
  blocks.validate();
  if (m < 1 || m > blocks.m())
    throw std::invalid_argument("sdp1_noiseless: need 1 <= m <= min block size");
  const int n = blocks.n();
  Matrix x = Matrix::Zero(n, n);
  for (int k = 0; k < blocks.K(); ++k) {
    const int o = blocks.offset(k), s = blocks.sizes[k];
    const double alpha = s > 1 ? (m - 1.0) / (s - 1.0) : 1.0;
    x.block(o, o, s, s).setConstant(alpha);
    x.block(o, o, s, s).diagonal().setOnes();
  }
  return x;
}

NoiselessSdp13 sdp13_noiseless(const ProbabilityMatrix& psi, const BlockSpec& blocks,
                               int m) {
  psi.validate();
  blocks.validate();
  if (psi.K() != blocks.K())
    throw std::invalid_argument("sdp13_noiseless: psi and blocks disagree on K");
  NoiselessSdp13 out;
  const int K = psi.K();
  if (K < 2) {
    out.reason = "needs K >= 2";
    return out;
  }
  if (m < 1 || m > blocks.m()) {
    out.reason = "need 1 <= m <= min block size";
    return out;
  }
  if (classify_assortativity(psi) == Assortativity::None) {
    out.reason = "model is not weakly assortative";
    return out;
  }

  // Sort blocks by descending within-block probability.
  out.sort_order.resize(K);
  for (int k = 0; k < K; ++k) out.sort_order[k] = k;
  std::stable_sort(out.sort_order.begin(), out.sort_order.end(),
                   [&](int i, int j) { return psi.p(i) > psi.p(j); });

  // Running intersection of [q*_r, p_r] down the sorted list.
  double lo = 0.0, hi = 1.0;
  int k0 = 0;
  double lo_at_k0 = 0.0, hi_at_k0 = 1.0;
  for (int r = 0; r < K; ++r) {
    const int b = out.sort_order[r];
    const double new_lo = std::max(lo, psi.q_star(b));
    const double new_hi = std::min(hi, psi.p(b));
    if (new_lo > new_hi) break;
    lo = new_lo;
    hi = new_hi;
    k0 = r + 1;
    lo_at_k0 = lo;
    hi_at_k0 = hi;
  }
  if (k0 == 0) {
    out.reason = "no admissible penalty level";
    return out;
  }
  const double p_next = k0 < K ? psi.p(out.sort_order[k0]) : 0.0;
  out.mu_lo = std::max(lo_at_k0, p_next);
  out.mu_hi = hi_at_k0;
  out.k0 = k0;
  if (out.mu_lo > out.mu_hi + 1e-12) {
    out.reason = "empty admissible penalty interval";
    return out;
  }

  out.alpha.resize(K);
  for (int r = 0; r < K; ++r) {
    const int b = out.sort_order[r];
    const int s = blocks.sizes[b];
    if (r < k0 && s > m)
      out.alpha[b] = 1.0;
    else
      out.alpha[b] = s > 1 ? (m - 1.0) / (s - 1.0) : 1.0;
  }

  const int n = blocks.n();
  out.X = Matrix::Zero(n, n);
  for (int k = 0; k < K; ++k) {
    const int o = blocks.offset(k), s = blocks.sizes[k];
    out.X.block(o, o, s, s).setConstant(out.alpha[k]);
    out.X.block(o, o, s, s).diagonal().setOnes();
  }
  out.applicable = true;
  return out;
}

namespace {

struct BruteState {
  const Matrix* a = nullptr;
  int n = 0, K = 0;
  double lambda = 0.0;
  bool balanced = false;
  int m = 0;
  std::vector<int> assign;
  std::vector<int> counts;
  int groups_used = 0;
  double best = -std::numeric_limits<double>::infinity();
  long tie_count = 0;
  std::vector<std::vector<int>> optima;
};

// Highly symmetric inputs (an empty graph, say) tie on millions of
// partitions; keep the count exact but bound the stored list.
constexpr std::size_t kMaxStoredOptima = 4096;

void brute_recurse(BruteState& st, int node, double objective) {
  if (node == st.n) {
    if (objective > st.best + 1e-9) {
      st.best = objective;
      st.tie_count = 1;
      st.optima.clear();
      st.optima.push_back(st.assign);
    } else if (objective >= st.best - 1e-9) {
      ++st.tie_count;
      if (st.optima.size() < kMaxStoredOptima) st.optima.push_back(st.assign);
      if (objective > st.best) st.best = objective;
    }
    return;
  }
  const int limit = std::min(st.K, st.groups_used + 1);
  for (int g = 0; g < limit; ++g) {
    if (st.balanced && st.counts[g] >= st.m) continue;
    double delta = 0.0;
    for (int j = 0; j < node; ++j)
      if (st.assign[j] == g) delta += 2.0 * (*st.a)(node, j);
    if (st.lambda != 0.0) delta -= st.lambda * (2.0 * st.counts[g] + 1.0);
    st.assign[node] = g;
    ++st.counts[g];
    const bool opened = g == st.groups_used;
    if (opened) ++st.groups_used;
    brute_recurse(st, node + 1, objective + delta);
    if (opened) --st.groups_used;
    --st.counts[g];
  }
  st.assign[node] = -1;
}

}  // namespace

BruteForceResult brute_force_mle(const Matrix& a, int K, PartitionSpace space,
                                 double lambda) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("brute_force_mle: square input required");
  const int n = static_cast<int>(a.rows());
  if (n > 12)
    throw std::invalid_argument("brute_force_mle: exhaustive search capped at n = 12");
  if (K < 1 || K > n) throw std::invalid_argument("brute_force_mle: K in 1..n");
  if (space == PartitionSpace::Balanced && n % K != 0)
    throw std::invalid_argument("brute_force_mle: balanced space needs K | n");

  BruteState st;
  st.a = &a;
  st.n = n;
  st.K = K;
  st.lambda = space == PartitionSpace::Free ? lambda : 0.0;
  st.balanced = space == PartitionSpace::Balanced;
  st.m = st.balanced ? n / K : n;
  st.assign.assign(n, -1);
  st.counts.assign(K, 0);
  // Diagonal terms of <A,X> are partition-independent; the -lambda n_g^2
  // per-group terms (diagonal included) accumulate in the recursion.
  brute_recurse(st, 0, a.trace());

  BruteForceResult out;
  out.objective = st.best;
  out.tie_count = st.tie_count;
  for (const auto& assign : st.optima) {
    Labels lab;
    lab.K = K;
    lab.values.resize(n);
    for (int i = 0; i < n; ++i) lab.values[i] = assign[i] + 1;
    out.optima.push_back(lab);
  }
  const auto& first = st.optima.front();
  Matrix x = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (first[i] == first[j]) x(i, j) = 1.0;
  out.X = x;
  return out;
}

Matrix nesting_transform(const Matrix& a, const Matrix& x0,
                         const std::vector<std::pair<int, int>>& drop_off_support,
                         const std::vector<std::pair<int, int>>& add_in_support) {
  if (a.rows() != a.cols() || x0.rows() != x0.cols() || a.rows() != x0.rows())
    throw std::invalid_argument("nesting_transform: size mismatch");
  Matrix out = a;
  for (auto [i, j] : drop_off_support) {
    if (i == j || x0(i, j) != 0.0)
      throw std::invalid_argument(
          "nesting_transform: drop pairs must be off-support and off-diagonal");
    out(i, j) = out(j, i) = 0.0;
  }
  for (auto [i, j] : add_in_support) {
    if (i == j || x0(i, j) != 1.0)
      throw std::invalid_argument(
          "nesting_transform: add pairs must be in-support and off-diagonal");
    out(i, j) = out(j, i) = 1.0;
  }
  return out;
}

}  // namespace blocksdp
