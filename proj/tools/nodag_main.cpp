#include <unistd.h>

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nodag/bench.hpp"
#include "nodag/csv.hpp"
#include "nodag/format.hpp"
#include "nodag/serialize.hpp"

namespace {

using namespace nodag;

// Flag-level mistakes; everything a user typed wrong is exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitArgs {
  std::string data_path;
  bool header = false;
  double lambda = 0.0;
  double eps = 1e-6;
  int max_iter = 1000;
  double alpha = 0.5;
  bool no_penalize_diagonal = false;
  bool no_standardize = false;
  bool allow_nonconverged = false;
  std::string out_path;
  std::string matrix_out;
  std::string sem_out;
};

struct SimulateArgs {
  int p = 0;
  double k = 0.0;
  std::string noise = "gaussian";
  int n = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string truth_out;
};

struct EvalArgs {
  std::string est_path;
  std::string truth_path;
};

struct BenchArgs {
  std::string config_path;
  std::string out_path;
  std::string summary_path;
  int workers = 1;
};

int run_fit(const FitArgs& args) {
  if (!(args.lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
  if (!(args.eps > 0.0)) throw UsageError("--eps must be > 0");
  if (args.max_iter < 1) throw UsageError("--max-iter must be >= 1");
  if (!(args.alpha > 0.0 && args.alpha < 1.0)) {
    throw UsageError("--alpha must lie strictly in (0, 1)");
  }

  const DataTable table = read_data_csv(args.data_path, args.header);

  SolverConfig cfg;
  cfg.lambda = args.lambda;
  cfg.eps = args.eps;
  cfg.max_iter = args.max_iter;
  cfg.alpha = args.alpha;
  cfg.penalize_diagonal = !args.no_penalize_diagonal;

  SolverResult res;
  try {
    if (args.no_standardize) {
      res = fit_gram(covariance_from_data(table.values), cfg);
    } else {
      res = fit(correlation_from_data(table.values), cfg);
    }
  } catch (const StepFailureError& e) {
    if (!args.allow_nonconverged) {
      throw NonConvergence(std::string(e.what()) +
                           "; rerun with --allow-nonconverged to accept the last iterate");
    }
    res = e.last;
  }
  if (!res.converged && !args.allow_nonconverged) {
    throw NonConvergence("solver did not converge within " + std::to_string(cfg.max_iter) +
                         " iterations (delta=" + fmt_metric(res.delta) +
                         ", eps=" + fmt_metric(cfg.eps) +
                         "); rerun with --allow-nonconverged to accept the iterate");
  }

  const Digraph est = support_graph(res);

  Json graph = graph_json(est, table.names, &res.a);
  write_json_file(args.out_path, graph);
  if (!args.matrix_out.empty()) {
    write_data_csv(args.matrix_out, res.a);
  }
  if (!args.sem_out.empty()) {
    const SemCoefficients sem = factor_to_sem(res.a);
    Json out = graph_json(est, table.names, &sem.lambda);
    out["omega"] = sem.omega;
    write_json_file(args.sem_out, out);
  }

  std::cout << "f=" << fmt_full(res.f) << '\n'
            << "g=" << fmt_full(res.g) << '\n'
            << "delta=" << fmt_full(res.delta) << '\n'
            << "iterations=" << res.iterations << '\n'
            << "converged=" << (res.converged ? "true" : "false") << '\n'
            << "acyclic=" << (is_acyclic(est) ? "true" : "false") << '\n'
            << "edges=" << est.edge_count() << '\n';
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  if (args.p < 2) throw UsageError("--p must be >= 2");
  if (!(args.k >= 0.0)) throw UsageError("--k must be >= 0");
  if (args.k / args.p > 1.0) throw UsageError("edge probability k/p exceeds 1");
  if (args.n < 1) throw UsageError("--n must be >= 1");
  const NoiseFamily noise = [&] {
    try {
      return noise_family_from_string(args.noise);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
  }();

  // Same tag chain as one benchmark job, so any record's seed column can be
  // replayed here verbatim.
  const RngSeed base{args.seed};
  const Dag dag = random_dag(args.p, args.k, derive_seed(base, 1));
  SemSpec sem = random_sem(dag, derive_seed(base, 2));
  const Matrix x = sample_data(sem, args.n, noise, derive_seed(base, 3));

  write_data_csv(args.out_path, x);
  if (!args.truth_out.empty()) {
    sem.noise_family = noise;
    sem.seed = base;  // the replay handle is the user-facing seed
    write_json_file(args.truth_out, sem_json(sem));
  }
  return 0;
}

int run_eval(const EvalArgs& args) {
  const GraphFile est_file = graph_from_json(load_json_file(args.est_path));
  const GraphFile truth_file = graph_from_json(load_json_file(args.truth_path));

  const Dag truth = [&] {
    try {
      return Dag(truth_file.as_digraph());
    } catch (const ParameterError& e) {
      throw ParseError(args.truth_path + ": truth graph must be a DAG (" + e.what() + ")");
    }
  }();

  SkeletonMetrics m;
  int shd_graph = 0;
  int shd_cpdag = 0;
  const Cpdag truth_cpdag = dag_to_cpdag(truth);
  if (est_file.undirected.empty()) {
    const Digraph est = est_file.as_digraph();
    m = skeleton_metrics(est, truth);
    shd_graph = shd(est, truth.graph());
    shd_cpdag = shd(estimate_pdag(est), truth_cpdag);
  } else {
    const Cpdag est = est_file.as_cpdag();
    m = skeleton_metrics(est, truth);
    shd_graph = shd(est, truth.graph());
    shd_cpdag = shd(est, truth_cpdag);
  }

  std::cout << fmt_metric(m.f1) << ',' << fmt_metric(m.tpr) << ',' << fmt_metric(m.fpr)
            << ',' << shd_graph << ',' << shd_cpdag << '\n';
  return 0;
}

int run_bench(const BenchArgs& args) {
  if (args.workers < 1) throw UsageError("--workers must be >= 1");

  const BenchConfig cfg = bench_config_from_json(load_json_file(args.config_path));

  ProgressSink progress;
  if (isatty(fileno(stderr))) {
    progress = [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "\rbench: %zu/%zu jobs", done, total);
      if (done == total) std::fputc('\n', stderr);
    };
  }

  const BenchOutput out = run_benchmark(cfg, args.workers, progress);

  write_text_file(args.out_path, records_csv(out.records));
  write_json_file(args.out_path + ".meta.json", run_metadata_json(cfg, out, args.workers));
  if (!args.summary_path.empty()) {
    write_text_file(args.summary_path, summary_csv(summarize(out.records)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure learning for linear Gaussian SEMs: l1-penalized likelihood "
               "over invertible matrices, no acyclicity constraint"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "Estimate a directed graph from a CSV dataset");
  fit_cmd->add_option("--data", fit_args.data_path, "Input CSV, one observation per row")
      ->required();
  fit_cmd->add_flag("--header", fit_args.header, "First CSV line holds variable names");
  fit_cmd->add_option("--lambda", fit_args.lambda, "l1 penalty weight")->required();
  fit_cmd->add_option("--eps", fit_args.eps, "Termination tolerance (default 1e-6)");
  fit_cmd->add_option("--max-iter", fit_args.max_iter, "Iteration cap (default 1000)");
  fit_cmd->add_option("--alpha", fit_args.alpha, "Line-search shrink factor (default 0.5)");
  fit_cmd->add_flag("--no-penalize-diagonal", fit_args.no_penalize_diagonal,
                    "Exclude diagonal entries from the l1 penalty");
  fit_cmd->add_flag("--no-standardize", fit_args.no_standardize,
                    "Fit on the sample covariance instead of the correlation");
  fit_cmd->add_flag("--allow-nonconverged", fit_args.allow_nonconverged,
                    "Exit 0 with converged=false instead of exit 3");
  fit_cmd->add_option("--out", fit_args.out_path, "Estimated graph JSON")->required();
  fit_cmd->add_option("--matrix-out", fit_args.matrix_out, "Raw factor A as CSV");
  fit_cmd->add_option("--sem-out", fit_args.sem_out,
                      "Structural coefficients JSON: A = (I - Lambda) Omega^{-1/2}, so "
                      "Lambda = I - A diag(A)^{-1} and omega_j = A_jj^{-2}; columns with "
                      "negative diagonal are sign-flipped first, zero diagonal is an error");

  SimulateArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Sample a dataset from a random DAG-structured SEM");
  sim_cmd->add_option("--p", sim_args.p, "Number of variables")->required();
  sim_cmd->add_option("--k", sim_args.k, "Expected out-rate; edge probability is k/p")
      ->required();
  sim_cmd->add_option("--noise", sim_args.noise, "gaussian or exponential (default gaussian)");
  sim_cmd->add_option("--n", sim_args.n, "Number of observations")->required();
  sim_cmd->add_option("--seed", sim_args.seed, "RNG seed (default 0)");
  sim_cmd->add_option("--out", sim_args.out_path, "Output data CSV")->required();
  sim_cmd->add_option("--truth-out", sim_args.truth_out, "Ground-truth SEM JSON");

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Score an estimated graph against a ground truth; prints "
              "f1,tpr,fpr,shd_graph,shd_cpdag");
  eval_cmd->add_option("--est", eval_args.est_path, "Estimated graph JSON")->required();
  eval_cmd->add_option("--truth", eval_args.truth_path, "Truth graph or SEM JSON")
      ->required();

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Run a benchmark grid from a JSON config");
  bench_cmd->add_option("--config", bench_args.config_path, "Grid config JSON")->required();
  bench_cmd->add_option("--out", bench_args.out_path, "Results CSV; a .meta.json replay "
                        "companion is written next to it")->required();
  bench_cmd->add_option("--summary", bench_args.summary_path,
                        "Grouped mean/standard-error CSV");
  bench_cmd->add_option("--workers", bench_args.workers, "Concurrent jobs (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "nodag: error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit_args);
    if (sim_cmd->parsed()) return run_simulate(sim_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (bench_cmd->parsed()) return run_bench(bench_args);
    std::cerr << "nodag: error: no subcommand\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "nodag: error: " << e.what() << '\n';
    return 1;
  } catch (const NonConvergence& e) {
    std::cerr << "nodag: error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    // Library errors carry their own greppable category prefix.
    std::cerr << "nodag: error: " << e.what() << '\n';
    return 2;
  }
}
