#include "blocksdp/model.hpp"

#include <cmath>
#include <numeric>

namespace blocksdp {

Matrix mean_matrix(const ProbabilityMatrix& psi, const BlockSpec& blocks) {
  psi.validate();
  blocks.validate();
  if (psi.K() != blocks.K())
    throw std::invalid_argument("mean_matrix: psi and blocks disagree on K");
  const int n = blocks.n();
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const int bi = blocks.block_of(i);
    for (int j = 0; j < n; ++j) m(i, j) = psi.values(bi, blocks.block_of(j));
  }
  return m;
}

Matrix sample_sbm(const ProbabilityMatrix& psi, const BlockSpec& blocks,
                  std::uint64_t seed) {
  psi.validate();
  blocks.validate();
  if (psi.K() != blocks.K())
    throw std::invalid_argument("sample_sbm: psi and blocks disagree on K");
  const int n = blocks.n();
  Matrix a = Matrix::Zero(n, n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const int bi = blocks.block_of(i);
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(psi.values(bi, blocks.block_of(j)))) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

std::pair<Matrix, Matrix> sample_sbm_coupled(const ProbabilityMatrix& psi,
                                             const ProbabilityMatrix& psi_tilde,
                                             const BlockSpec& blocks,
                                             std::uint64_t seed) {
  psi.validate();
  psi_tilde.validate();
  blocks.validate();
  if (psi.K() != blocks.K() || psi_tilde.K() != blocks.K())
    throw std::invalid_argument("sample_sbm_coupled: K mismatch");
  SaOrder ord = sa_compare(psi_tilde, psi);
  if (ord != SaOrder::GreaterEq && ord != SaOrder::Equal)
    throw std::invalid_argument(
        "sample_sbm_coupled: psi_tilde must dominate psi in the SA order");

  const int n = blocks.n();
  Matrix a = Matrix::Zero(n, n);
  Matrix at = Matrix::Zero(n, n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const int bi = blocks.block_of(i);
    for (int j = i + 1; j < n; ++j) {
      const int bj = blocks.block_of(j);
      const double pij = psi.values(bi, bj);
      const double ptij = psi_tilde.values(bi, bj);
      const bool edge = rng.bernoulli(pij);
      bool edge_t;
      if (bi == bj) {
        // Within blocks: A~ = 1 - (1 - A)(1 - R), R ~ Bern((p~ - p)/(1 - p)).
        double ratio = pij >= 1.0 ? 0.0 : (ptij - pij) / (1.0 - pij);
        const bool r = rng.bernoulli(ratio);
        edge_t = edge || r;
      } else {
        // Across blocks: A~ = A * R, R ~ Bern(q~ / q).
        double ratio = pij <= 0.0 ? 0.0 : ptij / pij;
        const bool r = rng.bernoulli(ratio);
        edge_t = edge && r;
      }
      if (edge) a(i, j) = a(j, i) = 1.0;
      if (edge_t) at(i, j) = at(j, i) = 1.0;
    }
  }
  return {a, at};
}

Assortativity classify_assortativity(const ProbabilityMatrix& psi) {
  psi.validate();
  if (psi.K() < 2)
    throw std::invalid_argument("classify_assortativity: needs K >= 2");
  bool strong = true, weak = true;
  const double qmax = psi.q_max();
  for (int k = 0; k < psi.K(); ++k) {
    if (!(psi.p(k) > qmax)) strong = false;
    if (!(psi.p(k) > psi.q_star(k))) weak = false;
  }
  if (strong) return Assortativity::Strong;
  if (weak) return Assortativity::Weak;
  return Assortativity::None;
}

SaOrder sa_compare(const ProbabilityMatrix& a, const ProbabilityMatrix& b) {
  a.validate();
  b.validate();
  if (a.K() != b.K()) throw std::invalid_argument("sa_compare: K mismatch");
  bool ge = true, le = true;
  for (int k = 0; k < a.K(); ++k)
    for (int l = 0; l < a.K(); ++l) {
      const double av = a.values(k, l), bv = b.values(k, l);
      if (k == l) {
        if (av < bv) ge = false;
        if (av > bv) le = false;
      } else {
        if (av > bv) ge = false;
        if (av < bv) le = false;
      }
    }
  if (ge && le) return SaOrder::Equal;
  if (ge) return SaOrder::GreaterEq;
  if (le) return SaOrder::LessEq;
  return SaOrder::Incomparable;
}

PpParams pp_params(double d, double beta, int n, int K) {
  if (n < 2 || K < 1 || n % K != 0)
    throw std::invalid_argument("pp_params: need K | n and n >= 2");
  if (d <= 0.0 || beta < 0.0)
    throw std::invalid_argument("pp_params: need d > 0 and beta >= 0");
  const double m = static_cast<double>(n) / K;
  const double denom = (m - 1.0) + beta * m * (K - 1);
  PpParams out;
  out.p = d / denom;
  out.q = beta * out.p;
  if (out.p > 1.0 || out.q > 1.0)
    throw std::invalid_argument(
        "pp_params: requested degree is infeasible, p = " + std::to_string(out.p) +
        " exceeds 1");
  return out;
}

namespace {

double eval_graphon(const GraphonSpec& g, double x, double y) {
  const double v = g.f(x, y);
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("graphon '" + g.name +
                                "' returned a value outside [0,1]");
  return v;
}

}  // namespace

GraphonSample sample_graphon_graph(const GraphonSpec& g, int n, std::uint64_t seed) {
  if (!g.f) throw std::invalid_argument("sample_graphon_graph: empty graphon");
  if (n < 1) throw std::invalid_argument("sample_graphon_graph: n >= 1");
  Rng rng(seed);
  GraphonSample out;
  out.xi.resize(n);
  for (int i = 0; i < n; ++i) out.xi[i] = rng.uniform();
  out.adjacency = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(eval_graphon(g, out.xi[i], out.xi[j])))
        out.adjacency(i, j) = out.adjacency(j, i) = 1.0;
  return out;
}

ProbabilityMatrix graphon_block_psi(const GraphonSpec& g, int K, int grid) {
  if (!g.f) throw std::invalid_argument("graphon_block_psi: empty graphon");
  if (K < 1 || grid < 1)
    throw std::invalid_argument("graphon_block_psi: K >= 1 and grid >= 1");
  const double h = 1.0 / (static_cast<double>(K) * grid);
  ProbabilityMatrix psi;
  psi.values = Matrix::Zero(K, K);
  for (int k = 0; k < K; ++k) {
    const double x0 = static_cast<double>(k) / K;
    // Diagonal: average of f(x, x) along the interval.
    double acc = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double x = x0 + (i + 0.5) * h;
      acc += eval_graphon(g, x, x);
    }
    psi.values(k, k) = acc / grid;
    for (int l = k + 1; l < K; ++l) {
      const double y0 = static_cast<double>(l) / K;
      double acc2 = 0.0;
      for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
          acc2 += eval_graphon(g, x0 + (i + 0.5) * h, y0 + (j + 0.5) * h);
      psi.values(k, l) = psi.values(l, k) = acc2 / (static_cast<double>(grid) * grid);
    }
  }
  psi.validate();
  return psi;
}

std::vector<int> random_permutation(int n, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("random_permutation: n >= 0");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
  return perm;
}

std::pair<Matrix, Labels> permute_graph(const Matrix& a, const Labels& labels,
                                        const std::vector<int>& perm) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("permute_graph: square matrix");
  if (static_cast<int>(perm.size()) != n || labels.n() != n)
    throw std::invalid_argument("permute_graph: size mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw std::invalid_argument("permute_graph: not a permutation");
    seen[p] = true;
  }
  Matrix out(n, n);
  Labels lab;
  lab.K = labels.K;
  lab.values.resize(n);
  for (int i = 0; i < n; ++i) {
    lab.values[perm[i]] = labels.values[i];
    for (int j = 0; j < n; ++j) out(perm[i], perm[j]) = a(i, j);
  }
  return {out, lab};
}

GraphonSpec graphon_by_name(const std::string& name) {
  if (name == "product") return {[](double x, double y) { return x * y; }, "product"};
  if (name == "average")
    return {[](double x, double y) { return 0.5 * (x + y); }, "average"};
  if (name.rfind("constant:", 0) == 0) {
    const double v = std::stod(name.substr(9));
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("graphon_by_name: constant outside [0,1]");
    return {[v](double, double) { return v; }, name};
  }
  if (name == "blocky") {
    // Smooth two-community structure.
    return {[](double x, double y) {
              const bool same = (x < 0.5) == (y < 0.5);
              return same ? 0.6 : 0.1;
            },
            "blocky"};
  }
  throw std::invalid_argument("graphon_by_name: unknown graphon '" + name + "'");
}

}  // namespace blocksdp
