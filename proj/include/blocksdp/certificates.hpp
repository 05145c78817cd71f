#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blocksdp/types.hpp"

namespace blocksdp {

// Diagonal handling when forming the noise matrix Delta = A - E[A] and the
// degree quantities that enter the dual construction. ZeroDiagonal keeps the
// observed zero diagonal and zeroes E[A]'s diagonal to match;
// BernoulliDiagonal fills the diagonal of A with seeded Bern(p_k) draws and
// compares against the unzeroed mean.
enum class DiagConvention { ZeroDiagonal, BernoulliDiagonal };

enum class PhiMode { Auto, Given, Theory };

struct WitnessOptions {
  DiagConvention convention = DiagConvention::ZeroDiagonal;
  std::uint64_t fill_seed = 0;
  PhiMode phi_mode = PhiMode::Auto;
  Vector phi_given;             // used when phi_mode == Given
  std::optional<double> mu_given;  // row-sum witness scalar, Auto otherwise
  double c2 = 1.0;              // constant for the Theory phi rule
};

// Primal-dual certificate that the ground-truth cluster matrix is the unique
// optimum of the equality-constrained relaxation on this instance. Balanced
// blocks only.
struct WitnessCertificate {
  Vector mu;   // row-sum multipliers (per node)
  Vector nu;   // diagonal multipliers (per node)
  Vector phi;  // per-block slack levels (empty for the sum-constrained form)
  double gamma_min = 0.0;        // worst entry of the nonnegativity multiplier
  double curvature_margin = 0.0;  // spectral slack certifying uniqueness
  bool a3_strict = false;  // every off-diagonal block pair has a positive entry
  bool holds = false;
  DiagConvention convention = DiagConvention::ZeroDiagonal;
};

WitnessCertificate witness_sdp1(const Matrix& a, const BlockSpec& blocks,
                                const ProbabilityMatrix& psi,
                                const WitnessOptions& opts = {});

WitnessCertificate witness_sdp2(const Matrix& a, const BlockSpec& blocks,
                                const ProbabilityMatrix& psi,
                                const WitnessOptions& opts = {});

struct ConditionConstants {
  double C = 1.0;
  double Cprime = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
};

struct ConditionReport {
  bool satisfied = false;
  double margin = 0.0;
  double side_margin = 0.0;  // min_k p~_k - C1
  double C1 = 0.0;
  double C2 = 0.0;
  ConditionConstants constants;
  // Degree/imbalance form d >= kappa ((1+K beta)^2 / (1-beta)^2) log n,
  // reported by the planted-partition check.
  double degree_margin = 0.0;
  double degree_constant = 1.0;
};

// Population-level sufficient condition for the row-sum relaxation on a
// weakly assortative model with balanced blocks of size m.
ConditionReport check_sdp1_condition(const ProbabilityMatrix& psi, int m,
                                     ConditionConstants constants = {});

// Population-level sufficient condition for the sum-constrained relaxation
// on a planted partition model.
ConditionReport check_sdp2_condition(double p, double q, int m, int K,
                                     ConditionConstants constants = {},
                                     double degree_constant = 1.0);

// Closed-form optimum of the sum-constrained relaxation on the noiseless
// input E[A] when blocks are unbalanced: the strongest cross-block pair gets
// merged mass alpha*, blocks below the critical level collapse to identity.
struct NoiselessSdp2 {
  bool applicable = false;
  std::string reason;
  Matrix X;
  double alpha_star = 0.0;
  int k0 = -1, l0 = -1;          // strongest cross pair (0-based)
  std::vector<int> merged;       // blocks k with p_k >= q_{k0 l0}
};
NoiselessSdp2 sdp2_noiseless(const ProbabilityMatrix& psi, const BlockSpec& blocks);

// Closed-form optimum of the row-sum relaxation at level m on E[A]:
// block k has constant off-diagonal alpha_k = (m-1)/(n_k-1).
Matrix sdp1_noiseless(const BlockSpec& blocks, int m);

// Closed-form optimum of the penalized row-sum-bounded relaxation on E[A].
struct NoiselessSdp13 {
  bool applicable = false;
  std::string reason;
  Matrix X;
  Vector alpha;               // per block, original order
  double mu_lo = 0.0, mu_hi = 0.0;  // admissible penalty interval
  int k0 = 0;                 // cutoff index in sorted order (1-based count)
  std::vector<int> sort_order;  // block indices sorted by descending p_k
};
NoiselessSdp13 sdp13_noiseless(const ProbabilityMatrix& psi, const BlockSpec& blocks,
                               int m);

enum class PartitionSpace { Balanced, Free };

struct BruteForceResult {
  Matrix X;
  double objective = 0.0;
  long tie_count = 1;          // exact count of maximizers
  std::vector<Labels> optima;  // maximizers, list capped at 4096 entries
};

// Exhaustive maximum-likelihood search over cluster matrices, for n <= 12.
// Balanced: partitions into K equal groups, objective <A,X>. Free: partitions
// into at most K groups, objective <A,X> - lambda * sum(X).
BruteForceResult brute_force_mle(const Matrix& a, int K, PartitionSpace space,
                                 double lambda = 0.0);

// Monotone transform of an instance: zero out chosen off-support entries and
// switch on chosen in-support entries. Exact recovery survives this.
Matrix nesting_transform(const Matrix& a, const Matrix& x0,
                         const std::vector<std::pair<int, int>>& drop_off_support,
                         const std::vector<std::pair<int, int>>& add_in_support);

}  // namespace blocksdp
