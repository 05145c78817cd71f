#pragma once

#include <optional>

#include "blocksdp/types.hpp"

namespace blocksdp {

enum class SdpKind { Sdp1, Sdp1Ineq, Sdp2Prime, Sdp3, Sdp13, Evt };

enum class RowSumMode { Equal, AtMost, AtLeast };

// A relaxation instance. All programs maximize a linear objective over an
// intersection of simple convex sets:
//   Sdp1:       <A,X>             diag(X)=1, X 1 = (n/K) 1, X >= 0, X psd
//   Sdp1Ineq:   <A,X>             diag(X)=1, X 1 <= or >= m 1, X >= 0, X psd
//   Sdp2Prime:  <A,X>             diag(X)=1, sum(X) = n^2/K, X >= 0, X psd
//   Sdp3:       <A,X> - lambda*sum(X)   diag(X)=1, 0 <= X <= 1, X psd
//   Sdp13:      <A,X> - mu*sum(X)       diag(X)=1, X 1 >= m 1, X >= 0, X psd
//   Evt:        scaled projector onto the top-K eigenvectors (closed form)
struct SdpProblem {
  SdpKind kind = SdpKind::Sdp1;
  int K = 0;
  int m = 0;
  RowSumMode mode = RowSumMode::AtMost;
  double lambda = 0.0;
  double mu = 0.0;
  bool evt_absolute = false;
  // Direct targets for unbalanced instances; override the K-derived values.
  std::optional<double> row_sum_target;
  std::optional<double> total_sum_target;

  static SdpProblem sdp1(int K);
  static SdpProblem sdp1_rowsum(double target);
  static SdpProblem sdp1_ineq(int m, RowSumMode mode);
  static SdpProblem sdp2prime(int K);
  static SdpProblem sdp2prime_total(double total);
  static SdpProblem sdp3(double lambda);
  static SdpProblem sdp13(int m, double mu);
  static SdpProblem evt(int K, bool absolute = false);
};

struct AdmmOptions {
  double rho = 1.0;
  int max_iters = 5000;
  double eps_primal = 1e-5;  // on Frobenius residuals divided by n
  double eps_dual = 1e-5;
  double over_relaxation = 1.0;  // must lie in [1, 1.8]
  bool keep_trace = true;
  bool validate_iterates = false;  // per-iteration feasibility assertions
};

struct TracePoint {
  int iter = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
};

struct SolveResult {
  Matrix X;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
  bool converged = false;
  std::vector<TracePoint> trace;
  // Multiplier estimates recovered from the scaled ADMM duals; empty for EVT.
  Matrix dual_entrywise;  // nonnegativity/box multiplier, >= 0 entrywise
  Matrix dual_psd;        // PSD-cone multiplier, >= 0 in the Loewner order
  // Worst per-iteration violations observed when validate_iterates is set.
  double max_affine_violation = 0.0;
  double max_cone_violation = 0.0;
};

// Projection onto {X symmetric : diag(X) = 1, X 1 = target 1}.
Matrix affine_project_sdp1(const Matrix& y, double row_sum_target);
Matrix affine_project_sdp1_k(const Matrix& y, int K);

SolveResult solve_sdp(const Matrix& a, const SdpProblem& prob,
                      const AdmmOptions& opts = {});

SolveResult solve_sdp1(const Matrix& a, int K, const AdmmOptions& opts = {});
SolveResult solve_sdp1_ineq(const Matrix& a, int m, RowSumMode mode,
                            const AdmmOptions& opts = {});
SolveResult solve_sdp2prime(const Matrix& a, int K, const AdmmOptions& opts = {});
SolveResult solve_sdp3(const Matrix& a, double lambda, const AdmmOptions& opts = {});
SolveResult solve_sdp13(const Matrix& a, int m, double mu,
                        const AdmmOptions& opts = {});
Matrix evt(const Matrix& a, int K, bool absolute = false);

// Tuning value for the penalized relaxation derived from the likelihood:
// lambda = (g(q) - g(p)) / (f(p) - f(q)) with f(x) = log(x/(1-x)),
// g(x) = log(1-x). Always in (0,1) for 0 < q < p < 1.
double lambda_oracle(double p, double q);

// Data-driven lambda: median node degree divided by n.
double median_connectivity_lambda(const Matrix& a);

struct KktReport {
  double max_diag_violation = 0.0;
  double row_sum_violation = 0.0;    // per the problem's row-sum constraint
  double total_sum_violation = 0.0;  // Sdp2Prime only
  double min_entry = 0.0;
  double max_entry_excess = 0.0;  // amount above 1 (box kinds)
  double min_eigenvalue = 0.0;
  bool has_duals = false;
  double comp_slack_entrywise = 0.0;  // max_ij |Gamma_ij X_ij|
  double comp_slack_psd = 0.0;        // <Lambda, X>
  bool converged = false;
  bool tail_monotone = true;  // residual trend over the last 20 trace points
};

KktReport kkt_report(const Matrix& a, const SolveResult& result,
                     const SdpProblem& prob);
// Feasibility-only report for a bare candidate matrix.
KktReport kkt_report(const Matrix& a, const Matrix& x, const SdpProblem& prob);

}  // namespace blocksdp
