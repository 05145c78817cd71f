#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "blocksdp/types.hpp"

namespace blocksdp {

enum class Assortativity { Strong, Weak, None };

// Partial order on probability matrices: a >= b when every within-block
// probability of a dominates b's and every cross-block probability of a is
// dominated by b's.
enum class SaOrder { GreaterEq, LessEq, Equal, Incomparable };

// Conditional mean Z Psi Z^T: block-constant with Psi values, diagonal
// included (samplers ignore it; noise conventions adjust it).
Matrix mean_matrix(const ProbabilityMatrix& psi, const BlockSpec& blocks);

// Sample an undirected simple graph: upper-triangle Bernoulli draws, zero
// diagonal, symmetric.
Matrix sample_sbm(const ProbabilityMatrix& psi, const BlockSpec& blocks,
                  std::uint64_t seed);

// Couple two samples A ~ BM(psi) and A~ ~ BM(psi_tilde) on one probability
// space so that psi_tilde >= psi (SA order) implies A~ >= A on within-block
// pairs and A~ <= A on cross-block pairs, entrywise.
std::pair<Matrix, Matrix> sample_sbm_coupled(const ProbabilityMatrix& psi,
                                             const ProbabilityMatrix& psi_tilde,
                                             const BlockSpec& blocks,
                                             std::uint64_t seed);

Assortativity classify_assortativity(const ProbabilityMatrix& psi);

SaOrder sa_compare(const ProbabilityMatrix& a, const ProbabilityMatrix& b);

struct PpParams {
  double p = 0.0;
  double q = 0.0;
};

// Planted-partition probabilities (p, q = beta * p) with expected degree d:
// d = p (n/K - 1) + q (n/K)(K - 1).
PpParams pp_params(double d, double beta, int n, int K);

struct GraphonSpec {
  std::function<double(double, double)> f;  // symmetric, values in [0,1]
  std::string name;
};

struct GraphonSample {
  Matrix adjacency;
  Vector xi;  // latent positions
};

// Latent positions xi_i ~ U[0,1] iid, edges Bern(f(xi_i, xi_j)) on i < j.
GraphonSample sample_graphon_graph(const GraphonSpec& g, int n, std::uint64_t seed);

// Block-averaged probabilities over the uniform K-partition of [0,1]:
// off-diagonal entries average f over I_k x I_l by the midpoint rule on a
// grid-per-interval mesh; diagonal entries average f(x, x) over I_k.
ProbabilityMatrix graphon_block_psi(const GraphonSpec& g, int K, int grid = 64);

// Uniformly random permutation of 0..n-1.
std::vector<int> random_permutation(int n, std::uint64_t seed);

// Relabel nodes of a graph (and its labels) by a permutation: node i of the
// input becomes node perm[i] of the output.
std::pair<Matrix, Labels> permute_graph(const Matrix& a, const Labels& labels,
                                        const std::vector<int>& perm);

GraphonSpec graphon_by_name(const std::string& name);

}  // namespace blocksdp
