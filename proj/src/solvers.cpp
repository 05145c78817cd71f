#include "blocksdp/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "blocksdp/linalg.hpp"

namespace blocksdp {

SdpProblem SdpProblem::sdp1(int K) {
  SdpProblem p;
  p.kind = SdpKind::Sdp1;
  p.K = K;
  return p;
}

SdpProblem SdpProblem::sdp1_rowsum(double target) {
  SdpProblem p;
  p.kind = SdpKind::Sdp1;
  p.row_sum_target = target;
  return p;
}

SdpProblem SdpProblem::sdp1_ineq(int m, RowSumMode mode) {
  SdpProblem p;
  p.kind = SdpKind::Sdp1Ineq;
  p.m = m;
  p.mode = mode;
  return p;
}

SdpProblem SdpProblem::sdp2prime(int K) {
  SdpProblem p;
  p.kind = SdpKind::Sdp2Prime;
  p.K = K;
  return p;
}

SdpProblem SdpProblem::sdp2prime_total(double total) {
  SdpProblem p;
  p.kind = SdpKind::Sdp2Prime;
  p.total_sum_target = total;
  return p;
}

SdpProblem SdpProblem::sdp3(double lambda) {
  SdpProblem p;
  p.kind = SdpKind::Sdp3;
  p.lambda = lambda;
  return p;
}

SdpProblem SdpProblem::sdp13(int m, double mu) {
  SdpProblem p;
  p.kind = SdpKind::Sdp13;
  p.m = m;
  p.mu = mu;
  p.mode = RowSumMode::AtLeast;
  return p;
}

SdpProblem SdpProblem::evt(int K, bool absolute) {
  SdpProblem p;
  p.kind = SdpKind::Evt;
  p.K = K;
  p.evt_absolute = absolute;
  return p;
}

namespace {

void check_input(const Matrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument(std::string(who) + ": input must be square");
  if (!a.allFinite())
    throw std::invalid_argument(std::string(who) + ": input must be finite");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument(std::string(who) + ": input must be symmetric");
}

// Inverse of the X-update operator for the row-consensus formulation,
// L(X) = 2 X + (X E + E X) / 2, diagonalized along the splitting
// span{1} (+) 1-perp with eigenvalues n+2, n/2+2 and 2.
Matrix apply_l_inverse(const Matrix& s) {
  const int n = static_cast<int>(s.rows());
  const Vector rs = s.rowwise().sum();
  const double total = rs.sum();
  const double c1 = (2.0 / (n + 4.0) - 0.5) / n;
  const double c2 = (0.5 - 4.0 / (n + 4.0) + 1.0 / (n + 2.0)) * total / (double(n) * n);
  Matrix out = 0.5 * s;
  out.noalias() += c1 * (rs * Vector::Ones(n).transpose());
  out.noalias() += c1 * (Vector::Ones(n) * rs.transpose());
  out.array() += c2;
  return out;
}

// Solves N(nu) = d where N(nu) = diag(Linv(diag*(nu))); N = a I + b E.
Vector solve_n_system(const Vector& d) {
  const int n = static_cast<int>(d.size());
  const double a = 0.5 - 1.0 / n + 4.0 / (n * (n + 4.0));
  const double b = (0.5 - 4.0 / (n + 4.0) + 1.0 / (n + 2.0)) / (double(n) * n);
  const double shift = b * d.sum() / (a + n * b);
  return (d.array() - shift) / a;
}

// argmin over {X sym, diag(X)=1} of
//   -<C,X>/rho + (1/2)||X-(Z-U)||^2 + (1/2)||X-(Y-V)||^2 + (1/2)||X1-(v-u)||^2.
Matrix row_consensus_x_update(const Matrix& zu, const Matrix& yv, const Matrix& c_rho,
                              const Vector& vu) {
  const int n = static_cast<int>(zu.rows());
  Matrix b = zu + yv + c_rho;
  b.noalias() += 0.5 * (vu * Vector::Ones(n).transpose());
  b.noalias() += 0.5 * (Vector::Ones(n) * vu.transpose());
  Matrix w = apply_l_inverse(b);
  Vector nu = solve_n_system(w.diagonal() - Vector::Ones(n));
  Matrix correction = apply_l_inverse(Matrix(nu.asDiagonal()));
  return w - correction;
}

Matrix project_diag_only(const Matrix& y) {
  Matrix x = y;
  x.diagonal().setOnes();
  return x;
}

Matrix project_diag_and_total(const Matrix& y, double offdiag_target) {
  const int n = static_cast<int>(y.rows());
  const double offdiag_sum = y.sum() - y.diagonal().sum();
  const double c = (offdiag_sum - offdiag_target) / (double(n) * n - n);
  Matrix x = y.array() - c;
  x.diagonal().setOnes();
  return x;
}

struct Targets {
  double row = 0.0;       // Sdp1 / Sdp1Ineq / Sdp13 row-sum value
  double offdiag = 0.0;   // Sdp2Prime off-diagonal total
  RowSumMode mode = RowSumMode::Equal;
  bool box_upper = false;  // clamp Z at 1
  bool has_row_consensus = false;
};

Targets resolve_targets(const Matrix& a, const SdpProblem& prob) {
  const int n = static_cast<int>(a.rows());
  Targets t;
  switch (prob.kind) {
    case SdpKind::Sdp1:
      if (prob.row_sum_target) {
        t.row = *prob.row_sum_target;
      } else {
        if (prob.K < 1 || prob.K > n || n % prob.K != 0)
          throw std::invalid_argument("solve_sdp1: K must divide n");
        t.row = static_cast<double>(n) / prob.K;
      }
      if (n < 3) throw std::invalid_argument("solve_sdp1: needs n >= 3");
      t.mode = RowSumMode::Equal;
      break;
    case SdpKind::Sdp1Ineq:
    case SdpKind::Sdp13:
      if (prob.m < 1 || prob.m > n)
        throw std::invalid_argument("row-sum bound m must lie in 1..n");
      t.row = prob.m;
      t.mode = prob.kind == SdpKind::Sdp13 ? RowSumMode::AtLeast : prob.mode;
      if (t.mode == RowSumMode::Equal) {
        if (n < 3) throw std::invalid_argument("equality mode needs n >= 3");
      } else {
        t.has_row_consensus = true;
      }
      break;
    case SdpKind::Sdp2Prime: {
      double total;
      if (prob.total_sum_target) {
        total = *prob.total_sum_target;
      } else {
        if (prob.K < 1 || prob.K > n || n % prob.K != 0)
          throw std::invalid_argument("solve_sdp2prime: K must divide n");
        total = static_cast<double>(n) * n / prob.K;
      }
      if (total < n || total > double(n) * n)
        throw std::invalid_argument("solve_sdp2prime: total sum target infeasible");
      t.offdiag = total - n;
      if (n < 2) throw std::invalid_argument("solve_sdp2prime: needs n >= 2");
      break;
    }
    case SdpKind::Sdp3:
      t.box_upper = true;
      break;
    case SdpKind::Evt:
      break;
  }
  return t;
}

double objective_value(const Matrix& c_orig, const Matrix& x) {
  return c_orig.cwiseProduct(x).sum();
}

SolveResult solve_evt(const Matrix& a, const SdpProblem& prob) {
  const int n = static_cast<int>(a.rows());
  if (prob.K < 1 || prob.K > n)
    throw std::invalid_argument("evt: K must lie in 1..n");
  EigenDecomposition eig = sym_eig(a);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  if (prob.evt_absolute) {
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
      return std::abs(eig.values[i]) > std::abs(eig.values[j]);
    });
  }
  Matrix x = Matrix::Zero(n, n);
  for (int i = 0; i < prob.K; ++i) {
    const auto v = eig.vectors.col(order[i]);
    x.noalias() += v * v.transpose();
  }
  x *= static_cast<double>(n) / prob.K;
  SolveResult res;
  res.X = x;
  res.iterations = 0;
  res.converged = true;
  res.objective = objective_value(a, x);
  return res;
}

}  // namespace

Matrix affine_project_sdp1(const Matrix& y, double row_sum_target) {
  check_input(y, "affine_project_sdp1");
  const int n = static_cast<int>(y.rows());
  if (n < 3) throw std::invalid_argument("affine_project_sdp1: needs n >= 3");
  // Constraint operator rows: H_i (ones on off-diagonal row/column i) with
  // value 2*(target - 1), and F_i = e_i e_i^T with value 1. The Gram matrix
  // of the H_i is 2((n-2) I + E), inverted by a rank-one update.
  const Vector offdiag_rs = y.rowwise().sum() - y.diagonal();
  Vector g = 2.0 * (offdiag_rs.array() - (row_sum_target - 1.0));
  const double mean_shift = g.sum() / (2.0 * n - 2.0);
  Vector mu = (g.array() - mean_shift) / (2.0 * (n - 2.0));
  Matrix x = y;
  x.noalias() -= mu * Vector::Ones(n).transpose();
  x.noalias() -= Vector::Ones(n) * mu.transpose();
  x.diagonal() = Vector::Ones(n);
  return x;
}

Matrix affine_project_sdp1_k(const Matrix& y, int K) {
  const int n = static_cast<int>(y.rows());
  if (K < 1 || K > n || n % K != 0)
    throw std::invalid_argument("affine_project_sdp1_k: K must divide n");
  return affine_project_sdp1(y, static_cast<double>(n) / K);
}

SolveResult solve_sdp(const Matrix& a, const SdpProblem& prob,
                      const AdmmOptions& opts) {
  check_input(a, "solve_sdp");
  if (prob.kind == SdpKind::Evt) return solve_evt(a, prob);

  if (opts.rho <= 0.0) throw std::invalid_argument("solve_sdp: rho must be positive");
  if (opts.max_iters < 1) throw std::invalid_argument("solve_sdp: max_iters >= 1");
  if (opts.over_relaxation < 1.0 || opts.over_relaxation > 1.8)
    throw std::invalid_argument("solve_sdp: over_relaxation must lie in [1, 1.8]");

  const int n = static_cast<int>(a.rows());
  const Targets tg = resolve_targets(a, prob);

  // Objective matrix on the original scale, then normalized by its spectral
  // norm so rho = 1 is a sensible default across instances.
  Matrix c_orig = a;
  if (prob.kind == SdpKind::Sdp3) c_orig.array() -= prob.lambda;
  if (prob.kind == SdpKind::Sdp13) c_orig.array() -= prob.mu;
  double scale = spectral_norm(c_orig);
  if (scale < 1e-12) scale = 1.0;
  const Matrix c_over_rho = c_orig / (scale * opts.rho);

  const double alpha = opts.over_relaxation;

  // Feasible warm start: constant off-diagonal, unit diagonal.
  double init_off = 0.0;
  switch (prob.kind) {
    case SdpKind::Sdp1:
    case SdpKind::Sdp1Ineq:
    case SdpKind::Sdp13:
      init_off = n > 1 ? (tg.row - 1.0) / (n - 1.0) : 0.0;
      break;
    case SdpKind::Sdp2Prime:
      init_off = n > 1 ? tg.offdiag / (double(n) * n - n) : 0.0;
      break;
    default:
      break;
  }
  init_off = std::min(1.0, std::max(0.0, init_off));
  Matrix x = Matrix::Constant(n, n, init_off);
  x.diagonal() = Vector::Ones(n);

  Matrix z = x, y = x;
  Matrix u = Matrix::Zero(n, n), v = Matrix::Zero(n, n);
  Vector rv, ru;
  if (tg.has_row_consensus) {
    rv = Vector::Constant(n, tg.row);
    ru = Vector::Zero(n);
  }

  SolveResult res;
  res.converged = false;
  double max_affine = 0.0, max_cone = 0.0;

  int iter = 0;
  for (iter = 1; iter <= opts.max_iters; ++iter) {
    // X update: projection (or constrained quadratic) onto the affine set.
    if (tg.has_row_consensus) {
      x = row_consensus_x_update(z - u, y - v, c_over_rho, rv - ru);
    } else {
      Matrix midpoint = 0.5 * (z - u + y - v + c_over_rho);
      switch (prob.kind) {
        case SdpKind::Sdp1:
          x = affine_project_sdp1(midpoint, tg.row);
          break;
        case SdpKind::Sdp1Ineq:  // equality mode
        case SdpKind::Sdp13:
          x = affine_project_sdp1(midpoint, tg.row);
          break;
        case SdpKind::Sdp2Prime:
          x = project_diag_and_total(midpoint, tg.offdiag);
          break;
        case SdpKind::Sdp3:
          x = project_diag_only(midpoint);
          break;
        default:
          break;
      }
    }

    if (opts.validate_iterates) {
      double diag_v = (x.diagonal().array() - 1.0).abs().maxCoeff();
      double affine_v = diag_v;
      if (tg.mode == RowSumMode::Equal && !tg.has_row_consensus &&
          prob.kind != SdpKind::Sdp2Prime && prob.kind != SdpKind::Sdp3)
        affine_v = std::max(affine_v,
                            (x.rowwise().sum().array() - tg.row).abs().maxCoeff());
      if (prob.kind == SdpKind::Sdp2Prime)
        affine_v = std::max(
            affine_v, std::abs(x.sum() - x.diagonal().sum() - tg.offdiag) / n);
      max_affine = std::max(max_affine, affine_v);
    }

    // Over-relaxed copies, one per consensus constraint.
    Matrix xz = alpha == 1.0 ? x : Matrix(alpha * x + (1.0 - alpha) * z);
    Matrix xy = alpha == 1.0 ? x : Matrix(alpha * x + (1.0 - alpha) * y);
    Vector xv;
    if (tg.has_row_consensus) {
      xv = x.rowwise().sum();
      if (alpha != 1.0) xv = alpha * xv + (1.0 - alpha) * rv;
    }

    // Z update: entrywise clamp.
    Matrix z_old = std::move(z);
    z = (xz + u).cwiseMax(0.0);
    if (tg.box_upper) z = z.cwiseMin(1.0);

    // Y update: PSD projection.
    Matrix y_old = std::move(y);
    y = psd_project(xy + v);

    // Row-sum consensus variable.
    Vector rv_old;
    if (tg.has_row_consensus) {
      rv_old = rv;
      rv = xv + ru;
      if (tg.mode == RowSumMode::AtLeast)
        rv = rv.cwiseMax(tg.row);
      else
        rv = rv.cwiseMin(tg.row);
    }

    if (opts.validate_iterates) {
      double cone_v = std::max(0.0, -z.minCoeff());
      if (tg.box_upper) cone_v = std::max(cone_v, z.maxCoeff() - 1.0);
      Eigen::SelfAdjointEigenSolver<Matrix> es(y, Eigen::EigenvaluesOnly);
      cone_v = std::max(cone_v, std::max(0.0, -es.eigenvalues().minCoeff()));
      max_cone = std::max(max_cone, cone_v);
    }

    // Dual updates.
    u += xz - z;
    v += xy - y;
    if (tg.has_row_consensus) ru += xv - rv;

    // Residuals: primal against the unrelaxed X, dual from iterate motion.
    double rp2 = (x - z).squaredNorm() + (x - y).squaredNorm();
    double rd2 = (z - z_old).squaredNorm() + (y - y_old).squaredNorm();
    if (tg.has_row_consensus) {
      rp2 += (x.rowwise().sum() - rv).squaredNorm();
      rd2 += (rv - rv_old).squaredNorm();
    }
    const double primal_res = std::sqrt(rp2) / n;
    const double dual_res = opts.rho * std::sqrt(rd2) / n;
    const double obj = objective_value(c_orig, x);

    if (opts.keep_trace) res.trace.push_back({iter, primal_res, dual_res, obj});
    res.primal_residual = primal_res;
    res.dual_residual = dual_res;

    if (primal_res <= opts.eps_primal && dual_res <= opts.eps_dual) {
      res.converged = true;
      break;
    }
  }

  res.iterations = std::min(iter, opts.max_iters);
  res.X = x;
  res.objective = objective_value(c_orig, x);
  // Multipliers of the original-scale problem: the scaled duals are U = Gamma
  // / (rho * scale) up to sign, with Gamma >= 0 the multiplier of X >= 0 and
  // Lambda the PSD-cone multiplier.
  res.dual_entrywise = (-opts.rho * scale) * u;
  res.dual_psd = (-opts.rho * scale) * v;
  res.max_affine_violation = max_affine;
  res.max_cone_violation = max_cone;
  return res;
}

SolveResult solve_sdp1(const Matrix& a, int K, const AdmmOptions& opts) {
  return solve_sdp(a, SdpProblem::sdp1(K), opts);
}

SolveResult solve_sdp1_ineq(const Matrix& a, int m, RowSumMode mode,
                            const AdmmOptions& opts) {
  return solve_sdp(a, SdpProblem::sdp1_ineq(m, mode), opts);
}

SolveResult solve_sdp2prime(const Matrix& a, int K, const AdmmOptions& opts) {
  return solve_sdp(a, SdpProblem::sdp2prime(K), opts);
}

SolveResult solve_sdp3(const Matrix& a, double lambda, const AdmmOptions& opts) {
  return solve_sdp(a, SdpProblem::sdp3(lambda), opts);
}

SolveResult solve_sdp13(const Matrix& a, int m, double mu, const AdmmOptions& opts) {
  return solve_sdp(a, SdpProblem::sdp13(m, mu), opts);
}

Matrix evt(const Matrix& a, int K, bool absolute) {
  check_input(a, "evt");
  return solve_evt(a, SdpProblem::evt(K, absolute)).X;
}

double lambda_oracle(double p, double q) {
  if (!(q > 0.0 && p > q && p < 1.0))
    throw std::invalid_argument("lambda_oracle: need 0 < q < p < 1");
  auto f = [](double x) { return std::log(x / (1.0 - x)); };
  auto g = [](double x) { return std::log(1.0 - x); };
  return (g(q) - g(p)) / (f(p) - f(q));
}

double median_connectivity_lambda(const Matrix& a) {
  check_input(a, "median_connectivity_lambda");
  const int n = static_cast<int>(a.rows());
  std::vector<double> degrees(n);
  for (int i = 0; i < n; ++i) degrees[i] = a.row(i).sum();
  std::sort(degrees.begin(), degrees.end());
  const double med = n % 2 == 1 ? degrees[n / 2]
                                : 0.5 * (degrees[n / 2 - 1] + degrees[n / 2]);
  return med / n;
}

namespace {

KktReport feasibility_report(const Matrix& x, const SdpProblem& prob) {
  const Targets tg = resolve_targets(x, prob);
  const int n = static_cast<int>(x.rows());
  KktReport rep;
  rep.max_diag_violation = (x.diagonal().array() - 1.0).abs().maxCoeff();
  const Vector rs = x.rowwise().sum();
  switch (prob.kind) {
    case SdpKind::Sdp1:
      rep.row_sum_violation = (rs.array() - tg.row).abs().maxCoeff();
      break;
    case SdpKind::Sdp1Ineq:
    case SdpKind::Sdp13:
      if (tg.mode == RowSumMode::AtLeast)
        rep.row_sum_violation = std::max(0.0, tg.row - rs.minCoeff());
      else if (tg.mode == RowSumMode::AtMost)
        rep.row_sum_violation = std::max(0.0, rs.maxCoeff() - tg.row);
      else
        rep.row_sum_violation = (rs.array() - tg.row).abs().maxCoeff();
      break;
    case SdpKind::Sdp2Prime:
      rep.total_sum_violation =
          std::abs(x.sum() - x.diagonal().sum() - tg.offdiag) / n;
      break;
    default:
      break;
  }
  rep.min_entry = x.minCoeff();
  if (tg.box_upper) rep.max_entry_excess = std::max(0.0, x.maxCoeff() - 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.transpose()),
                                           Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  return rep;
}

}  // namespace

KktReport kkt_report(const Matrix& a, const SolveResult& result,
                     const SdpProblem& prob) {
  check_input(a, "kkt_report");
  KktReport rep = feasibility_report(result.X, prob);
  rep.converged = result.converged;
  if (result.dual_entrywise.size() > 0) {
    rep.has_duals = true;
    rep.comp_slack_entrywise =
        result.dual_entrywise.cwiseProduct(result.X).cwiseAbs().maxCoeff();
    rep.comp_slack_psd = result.dual_psd.cwiseProduct(result.X).sum();
  }
  const int tail = 20;
  const int len = static_cast<int>(result.trace.size());
  for (int i = std::max(1, len - tail); i < len; ++i) {
    if (result.trace[i].primal_residual >
            result.trace[i - 1].primal_residual * 1.1 ||
        result.trace[i].dual_residual > result.trace[i - 1].dual_residual * 1.1)
      rep.tail_monotone = false;
  }
  return rep;
}

KktReport kkt_report(const Matrix& a, const Matrix& x, const SdpProblem& prob) {
  check_input(a, "kkt_report");
  check_input(x, "kkt_report");
  KktReport rep = feasibility_report(x, prob);
  rep.converged = true;
  return rep;
}

}  // namespace blocksdp
