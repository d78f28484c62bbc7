// Front end: graph generation, solver runs, oracle comparison. Reports are
// JSON (snake_case keys), traces CSV. Exit codes: 0 ok, 1 usage/IO error,
// 2 solver finished without meeting its stopping contract (partial report
// still written).

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pagerank/pagerank.hpp"

namespace pr = pagerank;
using nlohmann::json;

namespace {

struct SolveArgs {
  std::string graph_path;
  std::string algo;
  std::optional<double> damping;
  std::string damping_mode = "teleport";
  double eps = 0.1;
  double sigma = 0.1;
  std::optional<double> alpha;
  std::string mode = "single";
  double c_burn = 1.0;
  double c_total = 1.0;
  std::optional<std::uint64_t> max_iter;
  std::uint64_t restarts = 1;
  std::uint64_t seed = 0;
  std::size_t topk = 10;
  std::string report_path;
  std::string trace_path;
  std::uint64_t trace_every = 0;
  std::uint64_t tau = 100;
  double tol_adapt = 1e-3;
  double tol = 1e-12;
  unsigned threads = 0;
  bool weak_count = false;
  std::string against;  // empty, "dense" or "power"
};

void add_solve_flags(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("--algo", a.algo, "Algorithm: power|mcmc|gk")
      ->required()
      ->check(CLI::IsMember({"power", "mcmc", "gk"}));
  cmd->add_option("--graph", a.graph_path, "Edge-list file")->required();
  cmd->add_option("--damping", a.damping,
                  "Damping factor delta in (0, 1]; omit for the raw matrix");
  cmd->add_option("--damping-mode", a.damping_mode, "lazy|teleport")
      ->check(CLI::IsMember({"lazy", "teleport"}));
  cmd->add_option("--eps", a.eps, "Accuracy parameter");
  cmd->add_option("--sigma", a.sigma, "Failure probability");
  cmd->add_option("--alpha", a.alpha,
                  "Spectral gap lower bound (mcmc); defaults to 1 - delta "
                  "under teleport damping");
  cmd->add_option("--mode", a.mode, "mcmc mode: single|parallel|adaptive")
      ->check(CLI::IsMember({"single", "parallel", "adaptive"}));
  cmd->add_option("--c-burn", a.c_burn, "Burn-in constant multiplier");
  cmd->add_option("--c-total", a.c_total, "Total-steps constant multiplier");
  cmd->add_option("--max-iter", a.max_iter, "Step/iteration cap override");
  cmd->add_option("--restarts", a.restarts, "gk: independent runs, best kept");
  cmd->add_option("--seed", a.seed, "RNG seed")->required();
  cmd->add_option("--topk", a.topk, "Entries in the ranking table");
  cmd->add_option("--report", a.report_path, "Report JSON path (default stdout)");
  cmd->add_option("--trace", a.trace_path, "Trace CSV path");
  cmd->add_option("--trace-every", a.trace_every, "Trace sampling period");
  cmd->add_option("--tau", a.tau, "mcmc adaptive: steps between checks");
  cmd->add_option("--tol-adapt", a.tol_adapt, "mcmc adaptive: l2 stop tolerance");
  cmd->add_option("--tol", a.tol, "power: l1 step tolerance");
  cmd->add_option("--threads", a.threads, "mcmc parallel: worker threads");
  cmd->add_flag("--weak-count", a.weak_count,
                "gk: constant-3 iteration count instead of 12");
}

pr::StochasticMatrix load_matrix(const SolveArgs& a) {
  std::ifstream in(a.graph_path);
  if (!in) throw pr::ParseError("cannot open graph file: " + a.graph_path);
  const pr::AdjacencyGraph g = pr::parse_edge_list(in);
  pr::StochasticMatrix p =
      pr::StochasticMatrix::from_edge_list(g, pr::DanglingPolicy::uniform);
  if (a.damping) {
    const pr::DampingKind kind = a.damping_mode == "lazy"
                                     ? pr::DampingKind::lazy
                                     : pr::DampingKind::teleport;
    p = pr::apply_damping(p, {*a.damping, kind});
  }
  return p;
}

json topk_json(const pr::RankVector& p, std::size_t k) {
  json arr = json::array();
  for (std::size_t i : pr::top_k(p, std::min(k, p.size())))
    arr.push_back({{"node", i}, {"score", p[i]}});
  return arr;
}

json residuals_json(const pr::Residuals& r) {
  return {{"l1", r.l1}, {"l2", r.l2}, {"linf", r.linf}, {"f", r.objective}};
}

void write_report(const SolveArgs& a, const json& report) {
  if (a.report_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(a.report_path);
  if (!out) throw pr::ParseError("cannot write report: " + a.report_path);
  out << report.dump(2) << "\n";
}

void write_trace_header_rows(const SolveArgs& a, const std::string& header,
                             const std::vector<std::string>& rows) {
  if (a.trace_path.empty()) return;
  std::ofstream out(a.trace_path);
  if (!out) throw pr::ParseError("cannot write trace: " + a.trace_path);
  out << header << "\n";
  for (const auto& row : rows) out << row << "\n";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int run_solve(const SolveArgs& a) {
  const pr::StochasticMatrix p = load_matrix(a);
  const std::uint64_t trace_every =
      a.trace_every != 0 ? a.trace_every : (a.trace_path.empty() ? 0 : 100);

  json report;
  report["algorithm"] = a.algo;
  report["graph"] = a.graph_path;
  report["n"] = p.n();
  report["nnz"] = p.nnz();
  report["seed"] = a.seed;
  json params;
  if (a.damping)
    params["damping"] = *a.damping;
  else
    params["damping"] = nullptr;
  params["damping_mode"] =
      a.damping ? a.damping_mode : std::string("none");
  params["topk"] = a.topk;

  pr::RankVector estimate;
  std::string status = "ok";

  if (a.algo == "power") {
    params["tol"] = a.tol;
    params["max_iter"] = a.max_iter ? json(*a.max_iter) : json(nullptr);
    const auto t0 = std::chrono::steady_clock::now();
    const pr::PowerResult res = pr::power_iteration(
        p, a.tol, a.max_iter ? static_cast<std::size_t>(*a.max_iter) : 100000);
    estimate = res.p;
    if (!res.converged) status = "not_converged";
    report["iterations"] = res.iterations;
    report["wall_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    report["counters"] = {{"transpose_applies", res.iterations}};
    if (!a.trace_path.empty())
      std::cerr << "note: no trace format for power; --trace ignored\n";
  } else if (a.algo == "mcmc") {
    pr::McmcConfig cfg;
    cfg.eps = a.eps;
    cfg.sigma = a.sigma;
    cfg.c_burn = a.c_burn;
    cfg.c_total = a.c_total;
    cfg.max_iter = a.max_iter;
    cfg.tau = a.tau;
    cfg.tol_adapt = a.tol_adapt;
    cfg.threads = a.threads;
    if (a.alpha) {
      cfg.alpha = *a.alpha;
    } else if (p.gap_lower_bound()) {
      cfg.alpha = *p.gap_lower_bound();
    } else {
      throw pr::InvalidConfig(
          "spectral gap unknown: supply --alpha or use teleport damping");
    }
    if (a.mode == "single") cfg.mode = pr::McmcMode::single;
    if (a.mode == "parallel") cfg.mode = pr::McmcMode::parallel;
    if (a.mode == "adaptive") cfg.mode = pr::McmcMode::adaptive;
    const pr::McmcResult res = pr::run_mcmc(p, cfg, a.seed);
    estimate = res.estimate;
    if (res.max_steps_hit) status = "max_steps_exceeded";
    params["eps"] = cfg.eps;
    params["sigma"] = cfg.sigma;
    params["alpha"] = cfg.alpha;
    params["mode"] = a.mode;
    params["c_burn"] = cfg.c_burn;
    params["c_total"] = cfg.c_total;
    params["tau"] = cfg.tau;
    params["tol_adapt"] = cfg.tol_adapt;
    params["max_iter"] = a.max_iter ? json(*a.max_iter) : json(nullptr);
    report["iterations"] = res.steps_total;
    report["trajectories"] = res.trajectories;
    report["wall_ms"] = res.wall_ms;
    report["counters"] = {{"steps_total", res.steps_total},
                          {"steps_burn", res.steps_burn}};
    if (!a.trace_path.empty() && a.mode == "adaptive") {
      std::vector<std::string> rows;
      rows.reserve(res.adapt_trace.size());
      for (const auto& [step, diff] : res.adapt_trace)
        rows.push_back(std::to_string(step) + "," + fmt(diff));
      write_trace_header_rows(a, "step,l2_lag_diff", rows);
    } else if (!a.trace_path.empty()) {
      std::cerr << "note: mcmc trace exists only in adaptive mode; ignored\n";
    }
  } else {  // gk
    pr::GkConfig cfg;
    cfg.eps = a.eps;
    cfg.sigma = a.sigma;
    cfg.max_iter = a.max_iter;
    cfg.trace_every = trace_every;
    cfg.weak_count = a.weak_count;
    if (a.restarts == 0) throw pr::InvalidConfig("--restarts must be >= 1");
    pr::GkResult best;
    for (std::uint64_t r = 0; r < a.restarts; ++r) {
      pr::GkResult res = pr::gk_run(p, cfg, a.seed, r);
      if (r == 0 || res.objective < best.objective) best = std::move(res);
    }
    estimate = best.p_hat;
    params["eps"] = cfg.eps;
    params["sigma"] = cfg.sigma;
    params["restarts"] = a.restarts;
    params["weak_count"] = cfg.weak_count;
    params["max_iter"] = a.max_iter ? json(*a.max_iter) : json(nullptr);
    params["trace_every"] = trace_every;
    report["iterations"] = best.iterations;
    report["wall_ms"] = best.wall_ms;
    report["mass"] = best.mass;
    report["counters"] = {{"iters_sparse", best.iters_sparse},
                          {"writes_sparse", best.writes_sparse},
                          {"max_writes_sparse", best.max_writes_sparse},
                          {"iters_dense", best.iters_dense},
                          {"writes_dense", best.writes_dense},
                          {"mean_writes_sparse", best.mean_writes_sparse()},
                          {"rescales", best.rescales},
                          {"rescale_writes", best.rescale_writes}};
    if (!a.trace_path.empty()) {
      std::vector<std::string> rows;
      rows.reserve(best.trace.size());
      for (const auto& row : best.trace)
        rows.push_back(std::to_string(row.iter) + "," + fmt(row.ln_phi) + "," +
                       fmt(row.objective));
      write_trace_header_rows(a, "iter,ln_phi,f_checkpoint", rows);
    }
  }

  report["params"] = params;
  report["residuals"] = residuals_json(pr::residuals(p, estimate));
  report["top_k"] = topk_json(estimate, a.topk);

  if (!a.against.empty()) {
    const pr::RankVector truth = a.against == "dense"
                                     ? pr::dense_solve(p)
                                     : pr::power_iteration(p, 1e-12, 1000000).p;
    const std::size_t k = std::min(a.topk, truth.size());
    report["oracle"] = {
        {"method", a.against},
        {"l1", pr::distance(estimate, truth, pr::Norm::l1)},
        {"l2", pr::distance(estimate, truth, pr::Norm::l2)},
        {"linf", pr::distance(estimate, truth, pr::Norm::linf)},
        {"topk_overlap", pr::topk_overlap(estimate, truth, k)}};
  }

  report["status"] = status;
  write_report(a, report);
  return status == "ok" ? 0 : 2;
}

int run_gen(const std::string& model, std::size_t n, std::size_t s,
            std::uint64_t seed, const std::string& out_path) {
  pr::GraphModel m = pr::GraphModel::cycle;
  if (model == "star") m = pr::GraphModel::star;
  if (model == "uniform_sparse") m = pr::GraphModel::uniform_sparse;
  if (model == "preferential") m = pr::GraphModel::preferential;
  const pr::AdjacencyGraph g = pr::generate(m, n, s, seed);
  std::ofstream out(out_path);
  if (!out) throw pr::ParseError("cannot write graph file: " + out_path);
  pr::write_edge_list(g, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PageRank solver suite: deterministic baselines, a random-walk "
               "frequency estimator, and a randomized matrix-game solver"};
  app.require_subcommand(1);

  std::string gen_model;
  std::size_t gen_n = 0;
  std::size_t gen_s = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate a seeded test graph");
  gen->add_option("--model", gen_model, "cycle|star|uniform_sparse|preferential")
      ->required()
      ->check(CLI::IsMember({"cycle", "star", "uniform_sparse", "preferential"}));
  gen->add_option("--n", gen_n, "Node count")->required();
  gen->add_option("--s", gen_s, "Out-degree parameter (sparse models)");
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("-o,--output", gen_out, "Output edge-list file")->required();

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Run one solver on a graph");
  add_solve_flags(solve, solve_args);

  SolveArgs cmp_args;
  CLI::App* cmp =
      app.add_subcommand("compare", "Run a solver and an oracle, report distances");
  add_solve_flags(cmp, cmp_args);
  cmp->add_option("--against", cmp_args.against, "Oracle: dense|power")
      ->required()
      ->check(CLI::IsMember({"dense", "power"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return run_gen(gen_model, gen_n, gen_s, gen_seed, gen_out);
    if (solve->parsed()) return run_solve(solve_args);
    return run_solve(cmp_args);
  } catch (const pr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
