#pragma once

#include <string>

#include "blocksdp/types.hpp"

namespace blocksdp {

struct MetricValue {
  std::string name;
  double value = 0.0;
  int replications = 0;    // 0 for deterministic metrics
  double std_error = 0.0;  // Monte Carlo standard error, 0 when deterministic
};

// Normalized mutual information I(a;b)/sqrt(H(a)H(b)), natural logs.
// Both entropies zero gives 1, exactly one zero gives 0.
double nmi(const Labels& a, const Labels& b);

// nmi(a, b) minus the Monte Carlo mean of nmi(a, uniform random labels over
// 1..K); the chance level a blind guesser attains on this many nodes.
MetricValue adjusted_nmi(const Labels& a, const Labels& b, int K, int reps,
                         std::uint64_t seed);

// ||x_hat - x0||_F / ||x0||_F; rejects an all-zero reference.
double relative_error(const Matrix& x_hat, const Matrix& x0);

// Minimum Hamming distance over all relabelings of one argument: exhaustive
// permutations for K <= 8, subset dynamic programming above that.
int misclassified(const Labels& a, const Labels& b);

}  // namespace blocksdp
