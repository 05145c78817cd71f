#include "blocksdp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blocksdp/certificates.hpp"
#include "blocksdp/estimation.hpp"
#include "blocksdp/io.hpp"
#include "blocksdp/metrics.hpp"
#include "blocksdp/model.hpp"
#include "blocksdp/solvers.hpp"

namespace blocksdp::cli {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const std::string& w : split_ws(s)) {
    try {
      out.push_back(std::stod(w));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": bad number '" + w + "'");
    }
  }
  return out;
}

std::string ini_get(const IniFile& ini, const std::string& sec,
                    const std::string& key, const std::string& fallback = "") {
  const auto s = ini.find(sec);
  if (s == ini.end()) return fallback;
  const auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double ini_get_double(const IniFile& ini, const std::string& sec,
                      const std::string& key, double fallback) {
  const std::string v = ini_get(ini, sec, key);
  return v.empty() ? fallback : std::stod(v);
}

int ini_get_int(const IniFile& ini, const std::string& sec,
                const std::string& key, int fallback) {
  const std::string v = ini_get(ini, sec, key);
  return v.empty() ? fallback : std::stoi(v);
}

// ---------------------------------------------------------------------------
// Model configuration

struct ModelConfig {
  std::string type;  // "pp", "psi", "graphon"
  int n = 0;
  int K = 0;
  std::optional<double> d, beta, p, q;
  std::vector<double> psi_entries;  // row-major K*K, type "psi"
  std::vector<int> sizes;           // optional explicit block sizes
  std::string graphon;              // type "graphon"
};

ModelConfig model_from_ini(const IniFile& ini) {
  ModelConfig mc;
  mc.type = ini_get(ini, "model", "type");
  mc.n = ini_get_int(ini, "model", "n", 0);
  mc.K = ini_get_int(ini, "model", "K", 0);
  for (const char* key : {"d", "beta", "p", "q"}) {
    const std::string v = ini_get(ini, "model", key);
    if (v.empty()) continue;
    const double x = std::stod(v);
    if (key == std::string("d")) mc.d = x;
    if (key == std::string("beta")) mc.beta = x;
    if (key == std::string("p")) mc.p = x;
    if (key == std::string("q")) mc.q = x;
  }
  const std::string psi = ini_get(ini, "model", "psi");
  if (!psi.empty()) mc.psi_entries = parse_doubles(psi, "model psi");
  const std::string sizes = ini_get(ini, "model", "sizes");
  if (!sizes.empty())
    for (double v : parse_doubles(sizes, "model sizes"))
      mc.sizes.push_back(static_cast<int>(std::lround(v)));
  mc.graphon = ini_get(ini, "model", "graphon");
  return mc;
}

// Grid axes address model fields by name: n, K, d, beta, p, q, p<k> for the
// k-th diagonal entry of an explicit psi, psi_<i>_<j> for entry (i,j), both
// 1-based and kept symmetric.
void apply_override(ModelConfig& mc, const std::string& name, double value) {
  auto psi_at = [&](int i, int j) -> void {
    const int K = static_cast<int>(std::lround(std::sqrt(
        static_cast<double>(mc.psi_entries.size()))));
    if (K * K != static_cast<int>(mc.psi_entries.size()))
      throw std::invalid_argument("grid: model has no square psi to override");
    if (i < 1 || i > K || j < 1 || j > K)
      throw std::invalid_argument("grid: psi index out of range in " + name);
    mc.psi_entries[(i - 1) * K + (j - 1)] = value;
    mc.psi_entries[(j - 1) * K + (i - 1)] = value;
  };
  if (name == "n") {
    mc.n = static_cast<int>(std::lround(value));
  } else if (name == "K") {
    mc.K = static_cast<int>(std::lround(value));
  } else if (name == "d") {
    mc.d = value;
  } else if (name == "beta") {
    mc.beta = value;
  } else if (name == "p") {
    mc.p = value;
  } else if (name == "q") {
    mc.q = value;
  } else if (name.size() >= 2 && name[0] == 'p' &&
             name.find('_') == std::string::npos) {
    const int k = std::stoi(name.substr(1));
    psi_at(k, k);
  } else if (name.rfind("psi_", 0) == 0) {
    const auto us = name.find('_', 4);
    if (us == std::string::npos)
      throw std::invalid_argument("grid: expected psi_<i>_<j> in " + name);
    psi_at(std::stoi(name.substr(4, us - 4)), std::stoi(name.substr(us + 1)));
  } else {
    throw std::invalid_argument("grid: unknown model parameter '" + name + "'");
  }
}

struct PreparedModel {
  bool graphon = false;
  GraphonSpec gspec;
  int n = 0;
  int K = 0;
  ProbabilityMatrix psi;  // SBM types only
  BlockSpec blocks;       // SBM types only
};

PreparedModel prepare_model(const ModelConfig& mc) {
  PreparedModel pm;
  if (mc.type == "pp") {
    if (mc.n < 2 || mc.K < 1)
      throw std::invalid_argument("model: pp needs n and K");
    double p, q;
    if (mc.p && mc.q) {
      p = *mc.p;
      q = *mc.q;
    } else if (mc.d && mc.beta) {
      const PpParams pp = pp_params(*mc.d, *mc.beta, mc.n, mc.K);
      p = pp.p;
      q = pp.q;
    } else {
      throw std::invalid_argument("model: pp needs (p, q) or (d, beta)");
    }
    if (mc.n % mc.K != 0)
      throw std::invalid_argument("model: pp needs K to divide n");
    pm.n = mc.n;
    pm.K = mc.K;
    pm.psi = ProbabilityMatrix::planted_partition(mc.K, p, q);
    pm.blocks = BlockSpec::balanced(mc.K, mc.n / mc.K);
    return pm;
  }
  if (mc.type == "psi") {
    const int K = static_cast<int>(std::lround(std::sqrt(
        static_cast<double>(mc.psi_entries.size()))));
    if (K < 1 || K * K != static_cast<int>(mc.psi_entries.size()))
      throw std::invalid_argument("model: psi needs K*K entries");
    ProbabilityMatrix psi;
    psi.values.resize(K, K);
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) psi.values(i, j) = mc.psi_entries[i * K + j];
    psi.validate();
    BlockSpec blocks;
    if (!mc.sizes.empty()) {
      if (static_cast<int>(mc.sizes.size()) != K)
        throw std::invalid_argument("model: sizes must list K block sizes");
      blocks.sizes = mc.sizes;
    } else {
      if (mc.n < K || mc.n % K != 0)
        throw std::invalid_argument("model: psi without sizes needs K | n");
      blocks = BlockSpec::balanced(K, mc.n / K);
    }
    blocks.validate();
    pm.n = blocks.n();
    pm.K = K;
    pm.psi = std::move(psi);
    pm.blocks = std::move(blocks);
    return pm;
  }
  if (mc.type == "graphon") {
    if (mc.n < 2) throw std::invalid_argument("model: graphon needs n");
    pm.graphon = true;
    pm.gspec = graphon_by_name(mc.graphon);
    pm.n = mc.n;
    pm.K = mc.K > 0 ? mc.K : 2;
    return pm;
  }
  throw std::invalid_argument("model: unknown type '" + mc.type + "'");
}

struct Instance {
  Matrix a;
  bool has_truth = false;
  Labels truth;
  Matrix x0;
  Vector xi;  // graphon latents
};

Instance sample_instance(const PreparedModel& pm, std::uint64_t seed) {
  Instance inst;
  if (pm.graphon) {
    GraphonSample gs = sample_graphon_graph(pm.gspec, pm.n, seed);
    inst.a = std::move(gs.adjacency);
    inst.xi = std::move(gs.xi);
    return inst;
  }
  inst.a = sample_sbm(pm.psi, pm.blocks, seed);
  inst.truth = pm.blocks.labels();
  inst.x0 = pm.blocks.cluster_matrix();
  inst.has_truth = true;
  return inst;
}

// ---------------------------------------------------------------------------
// Solver configuration

enum class ParamRule { Value, Oracle, Median };

struct SolverConfig {
  std::string name;
  SdpKind kind = SdpKind::Sdp1;
  RowSumMode mode = RowSumMode::AtMost;  // inequality variants
  std::optional<int> m;                  // row-sum level, default n/K
  ParamRule lambda_rule = ParamRule::Median;
  double lambda_value = 0.0;
  ParamRule mu_rule = ParamRule::Median;
  double mu_value = 0.0;
  bool evt_absolute = false;
};

SolverConfig solver_by_name(const std::string& name) {
  SolverConfig sc;
  sc.name = name;
  if (name == "sdp1") {
    sc.kind = SdpKind::Sdp1;
  } else if (name == "sdp1_ineq") {
    sc.kind = SdpKind::Sdp1Ineq;
    sc.mode = RowSumMode::AtMost;
  } else if (name == "sdp2prime" || name == "sdp2") {
    sc.kind = SdpKind::Sdp2Prime;
    sc.name = "sdp2prime";
  } else if (name == "sdp3") {
    sc.kind = SdpKind::Sdp3;
  } else if (name == "sdp13") {
    sc.kind = SdpKind::Sdp13;
  } else if (name == "evt") {
    sc.kind = SdpKind::Evt;
  } else {
    throw std::invalid_argument("unknown solver '" + name + "'");
  }
  return sc;
}

ParamRule parse_rule(const std::string& v, double& value) {
  if (v == "oracle") return ParamRule::Oracle;
  if (v == "median") return ParamRule::Median;
  value = std::stod(v);
  return ParamRule::Value;
}

RowSumMode parse_mode(const std::string& v) {
  if (v == "atmost") return RowSumMode::AtMost;
  if (v == "atleast") return RowSumMode::AtLeast;
  if (v == "equal") return RowSumMode::Equal;
  throw std::invalid_argument("mode must be atmost, atleast or equal");
}

void apply_solver_ini(SolverConfig& sc, const IniFile& ini) {
  const std::string sec = "solver." + sc.name;
  const std::string m = ini_get(ini, sec, "m");
  if (!m.empty()) sc.m = std::stoi(m);
  const std::string mode = ini_get(ini, sec, "mode");
  if (!mode.empty()) sc.mode = parse_mode(mode);
  const std::string lambda = ini_get(ini, sec, "lambda");
  if (!lambda.empty()) sc.lambda_rule = parse_rule(lambda, sc.lambda_value);
  const std::string mu = ini_get(ini, sec, "mu");
  if (!mu.empty()) sc.mu_rule = parse_rule(mu, sc.mu_value);
  sc.evt_absolute = ini_get_int(ini, sec, "absolute", sc.evt_absolute ? 1 : 0) != 0;
}

double resolve_rule(ParamRule rule, double value, const PreparedModel& pm,
                    const Matrix& a) {
  switch (rule) {
    case ParamRule::Value:
      return value;
    case ParamRule::Median:
      return median_connectivity_lambda(a);
    case ParamRule::Oracle: {
      if (pm.graphon)
        throw std::invalid_argument("oracle penalty rule needs a block model");
      const double p = pm.psi.p_min();
      const double q = pm.psi.q_max();
      return lambda_oracle(p, q);
    }
  }
  return value;
}

SdpProblem build_problem(const SolverConfig& sc, const PreparedModel& pm,
                         const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  const int default_m = pm.K > 0 ? n / pm.K : n;
  switch (sc.kind) {
    case SdpKind::Sdp1:
      return sc.m ? SdpProblem::sdp1_rowsum(*sc.m) : SdpProblem::sdp1(pm.K);
    case SdpKind::Sdp1Ineq:
      return SdpProblem::sdp1_ineq(sc.m.value_or(default_m), sc.mode);
    case SdpKind::Sdp2Prime:
      return SdpProblem::sdp2prime(pm.K);
    case SdpKind::Sdp3:
      return SdpProblem::sdp3(resolve_rule(sc.lambda_rule, sc.lambda_value, pm, a));
    case SdpKind::Sdp13:
      return SdpProblem::sdp13(sc.m.value_or(default_m),
                               resolve_rule(sc.mu_rule, sc.mu_value, pm, a));
    case SdpKind::Evt:
      return SdpProblem::evt(pm.K, sc.evt_absolute);
  }
  throw std::logic_error("unreachable solver kind");
}

// ---------------------------------------------------------------------------
// Shared output helpers

Matrix load_graph(const std::string& path, bool as_matrix) {
  if (as_matrix || (path.size() > 4 && path.substr(path.size() - 4) == ".csv"))
    return read_matrix_csv(path);
  return read_edge_list(path);
}

void write_trace_csv(const std::string& path, const SolveResult& res) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "iter,primal_residual,dual_residual,objective\n";
  for (const TracePoint& t : res.trace)
    out << t.iter << "," << format_double(t.primal_residual) << ","
        << format_double(t.dual_residual) << ","
        << format_double(t.objective) << "\n";
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string solve_summary(const std::string& name, const SolveResult& res) {
  std::ostringstream out;
  out << "solver=" << name << " converged=" << (res.converged ? 1 : 0)
      << " iterations=" << res.iterations
      << " primal_residual=" << format_double(res.primal_residual)
      << " dual_residual=" << format_double(res.dual_residual)
      << " objective=" << format_double(res.objective);
  return out.str();
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOpts {
  std::string config;
  ModelConfig model;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  bool permute = false;
};

void cmd_generate(const GenerateOpts& g) {
  ModelConfig mc = g.model;
  if (!g.config.empty()) {
    const IniFile ini = read_ini(g.config);
    ModelConfig base = model_from_ini(ini);
    if (!mc.type.empty()) base.type = mc.type;
    if (mc.n > 0) base.n = mc.n;
    if (mc.K > 0) base.K = mc.K;
    if (mc.d) base.d = mc.d;
    if (mc.beta) base.beta = mc.beta;
    if (mc.p) base.p = mc.p;
    if (mc.q) base.q = mc.q;
    if (!mc.psi_entries.empty()) base.psi_entries = mc.psi_entries;
    if (!mc.sizes.empty()) base.sizes = mc.sizes;
    if (!mc.graphon.empty()) base.graphon = mc.graphon;
    mc = base;
  }
  if (!g.seed_set) throw std::invalid_argument("generate: --seed is required");
  const PreparedModel pm = prepare_model(mc);
  Instance inst = sample_instance(pm, g.seed);
  if (g.permute) {
    const int n = static_cast<int>(inst.a.rows());
    const std::vector<int> perm =
        random_permutation(n, g.seed + 0x517cc1b727220a95ull);
    if (inst.has_truth) {
      auto [pa, plabels] = permute_graph(inst.a, inst.truth, perm);
      inst.a = std::move(pa);
      inst.truth = std::move(plabels);
    } else {
      Labels all_one;
      all_one.K = 1;
      all_one.values = IntVector::Ones(n);
      inst.a = permute_graph(inst.a, all_one, perm).first;
      Vector xi(n);
      for (int i = 0; i < n; ++i) xi[perm[i]] = inst.xi[i];
      inst.xi = xi;
    }
  }
  write_edge_list(g.out + ".edges", inst.a);
  std::cout << g.out + ".edges" << "\n";
  if (inst.has_truth) {
    write_labels(g.out + ".labels", inst.truth);
    write_matrix_csv(g.out + ".psi.csv", pm.psi.values);
    std::cout << g.out + ".labels" << "\n" << g.out + ".psi.csv" << "\n";
  }
  if (inst.xi.size() > 0) {
    write_matrix_csv(g.out + ".xi.csv", inst.xi);
    std::cout << g.out + ".xi.csv" << "\n";
  }
}

// ---------------------------------------------------------------------------
// solve

struct SolveOpts {
  std::string graph;
  bool as_matrix = false;
  std::string solver = "sdp1";
  int K = 0;
  std::optional<int> m;
  std::string mode;
  std::string lambda;
  std::string mu;
  bool evt_absolute = false;
  double p = 0.0, q = 0.0;  // oracle penalty inputs
  AdmmOptions admm;
  std::string out;
  bool no_trace = false;
};

void cmd_solve(const SolveOpts& o) {
  const Matrix a = load_graph(o.graph, o.as_matrix);
  SolverConfig sc = solver_by_name(o.solver);
  if (o.m) sc.m = o.m;
  if (!o.mode.empty()) sc.mode = parse_mode(o.mode);
  if (!o.lambda.empty()) sc.lambda_rule = parse_rule(o.lambda, sc.lambda_value);
  if (!o.mu.empty()) sc.mu_rule = parse_rule(o.mu, sc.mu_value);
  sc.evt_absolute = o.evt_absolute;

  PreparedModel pm;
  pm.n = static_cast<int>(a.rows());
  pm.K = o.K;
  if (sc.lambda_rule == ParamRule::Oracle || sc.mu_rule == ParamRule::Oracle) {
    if (!(o.q < o.p))
      throw std::invalid_argument("oracle penalty rule needs --p > --q");
    pm.psi = ProbabilityMatrix::planted_partition(std::max(o.K, 2), o.p, o.q);
  }
  if ((sc.kind == SdpKind::Sdp1 || sc.kind == SdpKind::Sdp2Prime ||
       sc.kind == SdpKind::Evt) &&
      o.K < 1 && !sc.m)
    throw std::invalid_argument("solve: --K is required for this solver");

  AdmmOptions admm = o.admm;
  admm.keep_trace = !o.no_trace;
  const SdpProblem prob = build_problem(sc, pm, a);
  const SolveResult res = solve_sdp(a, prob, admm);
  write_matrix_csv(o.out + ".x.csv", res.X);
  if (!o.no_trace) write_trace_csv(o.out + ".trace.csv", res);
  std::cout << solve_summary(sc.name, res) << "\n";
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateOpts {
  std::string graph;
  bool as_matrix = false;
  std::string x;
  std::string given_labels;
  int K = 0;
  std::uint64_t seed = 0;
  std::string norm = "block_counts";
  std::string out;
};

QNormalization parse_norm(const std::string& v) {
  if (v == "block_counts") return QNormalization::BlockCounts;
  if (v == "literal") return QNormalization::Literal;
  throw std::invalid_argument("norm must be block_counts or literal");
}

void cmd_estimate(const EstimateOpts& o) {
  const Matrix a = load_graph(o.graph, o.as_matrix);
  HistogramEstimate est;
  if (!o.given_labels.empty()) {
    est = histogram_with_labels(a, read_labels(o.given_labels), parse_norm(o.norm));
  } else {
    if (o.x.empty())
      throw std::invalid_argument("estimate: need --x or --given-labels");
    if (o.K < 1) throw std::invalid_argument("estimate: --K is required");
    est = histogram(a, read_matrix_csv(o.x), o.K, o.seed, parse_norm(o.norm));
  }
  write_labels(o.out + ".labels", est.labels);
  write_matrix_csv(o.out + ".q.csv", est.Q_hat);
  write_matrix_csv(o.out + ".m.csv", est.M_hat);
  std::cout << o.out + ".labels\n" << o.out + ".q.csv\n" << o.out + ".m.csv\n";
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
  std::string labels;
  std::string truth;
  std::string x, x0;
  int K = 0;
  int reps = 200;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_evaluate(const EvaluateOpts& o) {
  const Labels est = read_labels(o.labels);
  const Labels truth = read_labels(o.truth);
  const int K = o.K > 0 ? o.K : truth.K;
  std::ostringstream csv;
  csv << "metric,value,replications,std_error\n";
  csv << "nmi," << format_double(nmi(truth, est)) << ",0,0\n";
  const MetricValue anmi = adjusted_nmi(truth, est, K, o.reps, o.seed);
  csv << "adjusted_nmi," << format_double(anmi.value) << ","
      << anmi.replications << "," << format_double(anmi.std_error) << "\n";
  csv << "misclassified," << misclassified(est, truth) << ",0,0\n";
  if (!o.x.empty() && !o.x0.empty()) {
    const double rel = relative_error(read_matrix_csv(o.x), read_matrix_csv(o.x0));
    csv << "relative_error," << format_double(rel) << ",0,0\n";
  }
  std::cout << csv.str();
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot open " + o.out + " for writing");
    f << csv.str();
  }
}

// ---------------------------------------------------------------------------
// witness

struct WitnessOpts {
  std::string graph;
  bool as_matrix = false;
  std::string labels;
  std::string psi_file;
  double p = -1.0, q = -1.0;
  std::string which = "both";
  std::string convention = "zero";
  std::uint64_t fill_seed = 0;
  std::string phi_mode = "auto";
  double c2 = 1.0;
  std::optional<double> mu;
  std::string out;
};

void cmd_witness(const WitnessOpts& o) {
  const Matrix a0 = load_graph(o.graph, o.as_matrix);
  const Labels truth = read_labels(o.labels);
  const int n = static_cast<int>(a0.rows());
  if (truth.values.size() != n)
    throw std::invalid_argument("witness: labels and graph disagree on n");

  // Reorder nodes so classes are contiguous; witnesses work blockwise.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return truth.values[i] < truth.values[j];
  });
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = a0(order[i], order[j]);
  BlockSpec blocks;
  blocks.sizes.assign(truth.K, 0);
  for (int i = 0; i < n; ++i) ++blocks.sizes[truth.values[i] - 1];

  ProbabilityMatrix psi;
  if (!o.psi_file.empty()) {
    psi.values = read_matrix_csv(o.psi_file);
    psi.validate();
  } else if (o.p >= 0.0 && o.q >= 0.0) {
    psi = ProbabilityMatrix::planted_partition(truth.K, o.p, o.q);
  } else {
    psi.values = estimate_q(a, blocks.labels(), QNormalization::BlockCounts)
                     .cwiseMax(0.0)
                     .cwiseMin(1.0);
  }

  WitnessOptions wo;
  wo.fill_seed = o.fill_seed;
  wo.c2 = o.c2;
  wo.mu_given = o.mu;
  if (o.convention == "zero")
    wo.convention = DiagConvention::ZeroDiagonal;
  else if (o.convention == "bernoulli")
    wo.convention = DiagConvention::BernoulliDiagonal;
  else
    throw std::invalid_argument("convention must be zero or bernoulli");
  if (o.phi_mode == "auto")
    wo.phi_mode = PhiMode::Auto;
  else if (o.phi_mode == "theory")
    wo.phi_mode = PhiMode::Theory;
  else
    throw std::invalid_argument("phi-mode must be auto or theory");

  std::ostringstream csv;
  csv << "witness,holds,gamma_min,curvature_margin,a3_strict\n";
  auto emit = [&](const char* name, const WitnessCertificate& c) {
    csv << name << "," << (c.holds ? 1 : 0) << "," << format_double(c.gamma_min)
        << "," << format_double(c.curvature_margin) << ","
        << (c.a3_strict ? 1 : 0) << "\n";
  };
  if (o.which == "sdp1" || o.which == "both")
    emit("sdp1", witness_sdp1(a, blocks, psi, wo));
  if (o.which == "sdp2" || o.which == "both")
    emit("sdp2", witness_sdp2(a, blocks, psi, wo));
  if (o.which != "sdp1" && o.which != "sdp2" && o.which != "both")
    throw std::invalid_argument("which must be sdp1, sdp2 or both");
  std::cout << csv.str();
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot open " + o.out + " for writing");
    f << csv.str();
  }
}

// ---------------------------------------------------------------------------
// experiment

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

struct ExperimentConfig {
  ModelConfig model;
  std::vector<SolverConfig> solvers;
  int replications = 1;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool timestamp = true;
  int anmi_reps = 100;
  bool witness1 = false, witness2 = false;
  GridAxis axis1, axis2;
  AdmmOptions admm;
};

ExperimentConfig experiment_from_ini(const IniFile& ini) {
  ExperimentConfig ec;
  ec.model = model_from_ini(ini);
  const std::string seed = ini_get(ini, "experiment", "seed");
  if (seed.empty())
    throw std::invalid_argument("experiment: seed is required");
  ec.seed = std::stoull(seed);
  ec.replications = ini_get_int(ini, "experiment", "replications", 1);
  if (ec.replications < 1)
    throw std::invalid_argument("experiment: replications >= 1");
  ec.out_dir = ini_get(ini, "experiment", "out", ".");
  ec.timestamp = ini_get_int(ini, "experiment", "timestamp", 1) != 0;
  ec.anmi_reps = ini_get_int(ini, "experiment", "anmi_reps", 100);
  for (const std::string& w : split_ws(ini_get(ini, "experiment", "witness"))) {
    if (w == "sdp1")
      ec.witness1 = true;
    else if (w == "sdp2")
      ec.witness2 = true;
    else
      throw std::invalid_argument("experiment: unknown witness '" + w + "'");
  }
  const std::vector<std::string> names =
      split_ws(ini_get(ini, "solvers", "list"));
  if (names.empty())
    throw std::invalid_argument("experiment: [solvers] list is empty");
  for (const std::string& name : names) {
    SolverConfig sc = solver_by_name(name);
    apply_solver_ini(sc, ini);
    ec.solvers.push_back(sc);
  }
  ec.axis1.name = ini_get(ini, "grid", "param");
  if (!ec.axis1.name.empty())
    ec.axis1.values = parse_doubles(ini_get(ini, "grid", "values"), "grid values");
  ec.axis2.name = ini_get(ini, "grid", "param2");
  if (!ec.axis2.name.empty())
    ec.axis2.values = parse_doubles(ini_get(ini, "grid", "values2"), "grid values2");
  if (!ec.axis1.name.empty() && ec.axis1.values.empty())
    throw std::invalid_argument("experiment: grid values missing");
  if (!ec.axis2.name.empty() && ec.axis2.values.empty())
    throw std::invalid_argument("experiment: grid values2 missing");

  ec.admm.rho = ini_get_double(ini, "admm", "rho", ec.admm.rho);
  ec.admm.max_iters = ini_get_int(ini, "admm", "max_iters", ec.admm.max_iters);
  const double eps = ini_get_double(ini, "admm", "eps", -1.0);
  if (eps > 0.0) ec.admm.eps_primal = ec.admm.eps_dual = eps;
  ec.admm.eps_primal = ini_get_double(ini, "admm", "eps_primal", ec.admm.eps_primal);
  ec.admm.eps_dual = ini_get_double(ini, "admm", "eps_dual", ec.admm.eps_dual);
  ec.admm.over_relaxation =
      ini_get_double(ini, "admm", "over_relaxation", ec.admm.over_relaxation);
  ec.admm.keep_trace = false;
  return ec;
}

struct CellStats {
  int count = 0;
  double sum = 0.0, sumsq = 0.0;
  void add(double v) {
    ++count;
    sum += v;
    sumsq += v * v;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double se() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sumsq - count * m * m) / (count - 1)) / count);
  }
};

void cmd_experiment(const std::string& config_path, const std::string& out_override,
                    bool no_timestamp) {
  const IniFile ini = read_ini(config_path);
  ExperimentConfig ec = experiment_from_ini(ini);
  if (!out_override.empty()) ec.out_dir = out_override;
  if (no_timestamp) ec.timestamp = false;
  fs::create_directories(ec.out_dir);

  const int len1 = ec.axis1.name.empty() ? 1 : static_cast<int>(ec.axis1.values.size());
  const int len2 = ec.axis2.name.empty() ? 1 : static_cast<int>(ec.axis2.values.size());
  const int cells = len1 * len2;
  const int S = static_cast<int>(ec.solvers.size());

  const std::vector<std::string> metric_cols = {
      "converged",       "iterations",     "primal_residual",
      "dual_residual",   "objective",      "nmi",
      "adjusted_nmi",    "relative_error", "misclassified",
      "w_sdp1_holds",    "w_sdp1_gamma",   "w_sdp1_curvature",
      "w_sdp2_holds",    "w_sdp2_gamma",   "w_sdp2_curvature"};

  std::ostringstream csv;
  csv << "kind,cell,rep,seed,param1,value1,param2,value2,solver";
  for (const std::string& c : metric_cols) csv << "," << c;
  csv << ",nmi_se,adjusted_nmi_se,relative_error_se,misclassified_se\n";

  // stats[cell][solver][metric index into metric_cols]
  std::vector<std::vector<std::vector<CellStats>>> stats(
      cells, std::vector<std::vector<CellStats>>(
                 S, std::vector<CellStats>(metric_cols.size())));

  const std::string p1 = ec.axis1.name.empty() ? "-" : ec.axis1.name;
  const std::string p2 = ec.axis2.name.empty() ? "-" : ec.axis2.name;

  for (int c = 0; c < cells; ++c) {
    const int i1 = c % len1;
    const int i2 = c / len1;
    ModelConfig mc = ec.model;
    if (!ec.axis1.name.empty())
      apply_override(mc, ec.axis1.name, ec.axis1.values[i1]);
    if (!ec.axis2.name.empty())
      apply_override(mc, ec.axis2.name, ec.axis2.values[i2]);
    const PreparedModel pm = prepare_model(mc);
    const std::string v1 =
        ec.axis1.name.empty() ? "" : format_double(ec.axis1.values[i1]);
    const std::string v2 =
        ec.axis2.name.empty() ? "" : format_double(ec.axis2.values[i2]);

    for (int r = 0; r < ec.replications; ++r) {
      const std::uint64_t seed_rc = ec.seed + 1000003ull * c + r;
      const Instance inst = sample_instance(pm, seed_rc);

      // Certificate columns, shared by every solver row of this draw.
      std::string wcols[6];
      double wvals[6] = {0, 0, 0, 0, 0, 0};
      bool whave[6] = {false, false, false, false, false, false};
      if (inst.has_truth && pm.blocks.is_balanced()) {
        WitnessOptions wo;
        if (ec.witness1) {
          const WitnessCertificate w = witness_sdp1(inst.a, pm.blocks, pm.psi, wo);
          wvals[0] = w.holds ? 1 : 0;
          wvals[1] = w.gamma_min;
          wvals[2] = w.curvature_margin;
          whave[0] = whave[1] = whave[2] = true;
        }
        if (ec.witness2) {
          const WitnessCertificate w = witness_sdp2(inst.a, pm.blocks, pm.psi, wo);
          wvals[3] = w.holds ? 1 : 0;
          wvals[4] = w.gamma_min;
          wvals[5] = w.curvature_margin;
          whave[3] = whave[4] = whave[5] = true;
        }
      }
      for (int i = 0; i < 6; ++i)
        wcols[i] = whave[i] ? format_double(wvals[i]) : "";

      for (int s = 0; s < S; ++s) {
        const SdpProblem prob = build_problem(ec.solvers[s], pm, inst.a);
        const SolveResult res = solve_sdp(inst.a, prob, ec.admm);
        auto& st = stats[c][s];
        st[0].add(res.converged ? 1.0 : 0.0);
        st[1].add(res.iterations);
        st[2].add(res.primal_residual);
        st[3].add(res.dual_residual);
        st[4].add(res.objective);

        std::string mcols[4];  // nmi, anmi, relerr, misclassified
        double anmi_se = 0.0;
        if (inst.has_truth) {
          const Labels lab = labels_from_x(res.X, pm.K, seed_rc);
          const double v_nmi = nmi(inst.truth, lab);
          const MetricValue v_anmi = adjusted_nmi(
              inst.truth, lab, pm.K, ec.anmi_reps, seed_rc + 7919ull * (s + 1));
          const double v_rel = relative_error(res.X, inst.x0);
          const int v_mis = misclassified(lab, inst.truth);
          st[5].add(v_nmi);
          st[6].add(v_anmi.value);
          st[7].add(v_rel);
          st[8].add(v_mis);
          mcols[0] = format_double(v_nmi);
          mcols[1] = format_double(v_anmi.value);
          mcols[2] = format_double(v_rel);
          mcols[3] = std::to_string(v_mis);
          anmi_se = v_anmi.std_error;
        }
        for (int i = 0; i < 6; ++i)
          if (whave[i]) st[9 + i].add(wvals[i]);

        csv << "data," << c << "," << r << "," << seed_rc << "," << p1 << ","
            << v1 << "," << p2 << "," << v2 << "," << ec.solvers[s].name << ","
            << (res.converged ? 1 : 0) << "," << res.iterations << ","
            << format_double(res.primal_residual) << ","
            << format_double(res.dual_residual) << ","
            << format_double(res.objective) << "," << mcols[0] << ","
            << mcols[1] << "," << mcols[2] << "," << mcols[3];
        for (int i = 0; i < 6; ++i) csv << "," << wcols[i];
        csv << ",," << format_double(anmi_se) << ",,\n";
      }
      std::cerr << "cell " << (c + 1) << "/" << cells << " rep " << (r + 1)
                << "/" << ec.replications << " done\n";
    }
  }

  for (int c = 0; c < cells; ++c) {
    const int i1 = c % len1;
    const int i2 = c / len1;
    const std::string v1 =
        ec.axis1.name.empty() ? "" : format_double(ec.axis1.values[i1]);
    const std::string v2 =
        ec.axis2.name.empty() ? "" : format_double(ec.axis2.values[i2]);
    for (int s = 0; s < S; ++s) {
      csv << "agg," << c << ",,," << p1 << "," << v1 << "," << p2 << "," << v2
          << "," << ec.solvers[s].name;
      for (std::size_t i = 0; i < metric_cols.size(); ++i) {
        const CellStats& st = stats[c][s][i];
        csv << "," << (st.count ? format_double(st.mean()) : "");
      }
      const int se_ixs[4] = {5, 6, 7, 8};
      for (int ix : se_ixs) {
        const CellStats& st = stats[c][s][ix];
        csv << "," << (st.count ? format_double(st.se()) : "");
      }
      csv << "\n";
    }
  }

  const std::string path = (fs::path(ec.out_dir) / "results.csv").string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  if (ec.timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated " << buf << "\n";
  }
  out << csv.str();
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
  std::cout << path << "\n";
}

// ---------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"block model fitting via semidefinite relaxations"};
  app.require_subcommand(1);

  GenerateOpts g;
  CLI::App* gen = app.add_subcommand("generate", "sample a graph to disk");
  gen->add_option("--config", g.config, "INI file with a [model] section");
  gen->add_option("--type", g.model.type, "pp, psi or graphon");
  gen->add_option("--n", g.model.n);
  gen->add_option("--K", g.model.K);
  gen->add_option("--d", [&g](const auto& v) { g.model.d = std::stod(v[0]); return true; }, "average degree")->expected(1);
  gen->add_option("--beta", [&g](const auto& v) { g.model.beta = std::stod(v[0]); return true; }, "q/p ratio")->expected(1);
  gen->add_option("--p", [&g](const auto& v) { g.model.p = std::stod(v[0]); return true; }, "within-block probability")->expected(1);
  gen->add_option("--q", [&g](const auto& v) { g.model.q = std::stod(v[0]); return true; }, "cross-block probability")->expected(1);
  std::string psi_inline, sizes_inline;
  gen->add_option("--psi", psi_inline, "row-major K*K entries");
  gen->add_option("--sizes", sizes_inline, "space-separated block sizes");
  gen->add_option("--graphon", g.model.graphon, "product, average, blocky or constant:<v>");
  gen->add_option("--seed", [&g](const auto& v) { g.seed = std::stoull(v[0]); g.seed_set = true; return true; }, "RNG seed")->expected(1);
  gen->add_flag("--permute", g.permute, "shuffle node order");
  gen->add_option("--out", g.out, "output prefix")->required();
  gen->callback([&] {
    if (!psi_inline.empty()) g.model.psi_entries = parse_doubles(psi_inline, "psi");
    if (!sizes_inline.empty())
      for (double v : parse_doubles(sizes_inline, "sizes"))
        g.model.sizes.push_back(static_cast<int>(std::lround(v)));
    cmd_generate(g);
  });

  SolveOpts so;
  CLI::App* sol = app.add_subcommand("solve", "fit one relaxation");
  sol->add_option("--graph", so.graph, "edge list or .csv matrix")->required();
  sol->add_flag("--matrix", so.as_matrix, "force CSV matrix input");
  sol->add_option("--solver", so.solver,
                  "sdp1, sdp1_ineq, sdp2prime, sdp3, sdp13 or evt");
  sol->add_option("--K", so.K);
  sol->add_option("--m", [&so](const auto& v) { so.m = std::stoi(v[0]); return true; }, "row-sum level")->expected(1);
  sol->add_option("--mode", so.mode, "atmost, atleast or equal");
  sol->add_option("--lambda", so.lambda, "number, oracle or median");
  sol->add_option("--mu", so.mu, "number, oracle or median");
  sol->add_flag("--absolute", so.evt_absolute, "rank eigenvalues by magnitude");
  sol->add_option("--p", so.p, "oracle rule within-block probability");
  sol->add_option("--q", so.q, "oracle rule cross-block probability");
  sol->add_option("--rho", so.admm.rho);
  sol->add_option("--max-iters", so.admm.max_iters);
  sol->add_option("--eps", [&so](const auto& v) {
    so.admm.eps_primal = so.admm.eps_dual = std::stod(v[0]);
    return true;
  }, "primal and dual tolerance")->expected(1);
  sol->add_option("--over-relaxation", so.admm.over_relaxation);
  sol->add_flag("--no-trace", so.no_trace);
  sol->add_option("--out", so.out, "output prefix")->required();
  sol->callback([&] { cmd_solve(so); });

  EstimateOpts eo;
  CLI::App* est = app.add_subcommand("estimate", "labels, Q and M from an estimate");
  est->add_option("--graph", eo.graph)->required();
  est->add_flag("--matrix", eo.as_matrix, "force CSV matrix input");
  est->add_option("--x", eo.x, "cluster-matrix estimate CSV");
  est->add_option("--given-labels", eo.given_labels, "skip clustering");
  est->add_option("--K", eo.K);
  est->add_option("--seed", eo.seed);
  est->add_option("--norm", eo.norm, "block_counts or literal");
  est->add_option("--out", eo.out, "output prefix")->required();
  est->callback([&] { cmd_estimate(eo); });

  EvaluateOpts vo;
  CLI::App* ev = app.add_subcommand("evaluate", "clustering quality metrics");
  ev->add_option("--labels", vo.labels)->required();
  ev->add_option("--truth", vo.truth)->required();
  ev->add_option("--x", vo.x, "estimate CSV for relative error");
  ev->add_option("--x0", vo.x0, "reference CSV for relative error");
  ev->add_option("--K", vo.K, "chance-model label count");
  ev->add_option("--reps", vo.reps);
  ev->add_option("--seed", vo.seed);
  ev->add_option("--out", vo.out, "also write the CSV here");
  ev->callback([&] { cmd_evaluate(vo); });

  WitnessOpts wopt;
  CLI::App* wit = app.add_subcommand("witness", "primal-dual recovery certificates");
  wit->add_option("--graph", wopt.graph)->required();
  wit->add_flag("--matrix", wopt.as_matrix, "force CSV matrix input");
  wit->add_option("--labels", wopt.labels, "ground-truth labels")->required();
  wit->add_option("--psi-file", wopt.psi_file, "block probability CSV");
  wit->add_option("--p", wopt.p, "planted-partition within probability");
  wit->add_option("--q", wopt.q, "planted-partition cross probability");
  wit->add_option("--which", wopt.which, "sdp1, sdp2 or both");
  wit->add_option("--convention", wopt.convention, "zero or bernoulli");
  wit->add_option("--fill-seed", wopt.fill_seed);
  wit->add_option("--phi-mode", wopt.phi_mode, "auto or theory");
  wit->add_option("--c2", wopt.c2, "theory-mode constant");
  wit->add_option("--mu", [&wopt](const auto& v) { wopt.mu = std::stod(v[0]); return true; }, "fixed sum-witness level")->expected(1);
  wit->add_option("--out", wopt.out, "also write the CSV here");
  wit->callback([&] { cmd_witness(wopt); });

  std::string xcfg, xout;
  bool xnots = false;
  CLI::App* exp = app.add_subcommand("experiment", "Monte Carlo grid to CSV");
  exp->add_option("--config", xcfg, "experiment INI")->required();
  exp->add_option("--out", xout, "override output directory");
  exp->add_flag("--no-timestamp", xnots, "omit the generated-at header");
  exp->callback([&] { cmd_experiment(xcfg, xout, xnots); });

  std::string hin, hout;
  CLI::App* heat = app.add_subcommand("heatmap", "matrix CSV to PGM image");
  heat->add_option("--in", hin, "matrix CSV")->required();
  heat->add_option("--out", hout, "PGM path")->required();
  heat->callback([&] { write_pgm(hout, read_matrix_csv(hin)); });

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) { return dispatch(args); }

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args);
}

}  // namespace blocksdp::cli
