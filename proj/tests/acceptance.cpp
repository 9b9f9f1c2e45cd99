// Release gates for the toolkit, one printed line per gate. Each gate either
// passes, fails with a diagnostic, or is skipped when its optional input is
// absent; the process exits nonzero iff any gate fails. Gates check the
// library against independent oracles (finite differences, direct inversion,
// scalar bisection, exhaustive enumeration) and the CLI against itself.
#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <tuple>
#include <unistd.h>
#include <vector>

#include "nodag/bench.hpp"
#include "nodag/csv.hpp"
#include "nodag/graphs.hpp"
#include "nodag/matrix_core.hpp"
#include "nodag/rng.hpp"
#include "nodag/serialize.hpp"
#include "nodag/simulation.hpp"
#include "nodag/solver.hpp"

namespace fs = std::filesystem;
using namespace nodag;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct GateResult {
  enum class Status { pass, fail, skip } status = Status::pass;
  std::string detail;  // failure diagnostic or skip reason; empty on pass
};

GateResult pass() { return {GateResult::Status::pass, ""}; }
GateResult fail(std::string detail) {
  return {GateResult::Status::fail, std::move(detail)};
}
GateResult skip(std::string reason) {
  return {GateResult::Status::skip, std::move(reason)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Shared random fixtures.

Matrix random_table(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

// Sample correlation of a tall normal table: well conditioned almost surely.
CorrelationMatrix random_correlation(int p, std::uint64_t seed) {
  Rng rng(RngSeed{seed});
  return CorrelationMatrix::from_data(random_table(8 * p + 20, p, rng));
}

Matrix random_invertible(int p, Rng& rng) {
  Matrix m = random_table(p, p, rng);
  m.diagonal().array() += 3.0;  // diagonally dominant enough in practice
  return m;
}

// ---------------------------------------------------------------------------
// Gate 1: analytic gradient vs central finite differences.

GateResult gate_gradient() {
  const auto t0 = Clock::now();
  const double h = 1e-6;
  const double tol = 1e-5;
  double worst = 0.0;
  for (int p : {3, 5, 10}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const CorrelationMatrix r = random_correlation(p, 1000 * p + seed);
      Rng rng(RngSeed{2000 * static_cast<std::uint64_t>(p) + seed});
      const Matrix a = random_invertible(p, rng);
      const Matrix g = gradient(a, r);
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
          Matrix ap = a, am = a;
          ap(i, j) += h;
          am(i, j) -= h;
          const double fd =
              (objective(ap, r, 0.0).first - objective(am, r, 0.0).first) /
              (2.0 * h);
          // Relative error with a unit floor so near-zero entries are judged
          // on the scale of the gradient as a whole.
          const double rel =
              std::abs(fd - g(i, j)) / std::max(1.0, std::abs(g(i, j)));
          worst = std::max(worst, rel);
          if (rel > tol) {
            return fail("p=" + std::to_string(p) + " seed=" +
                        std::to_string(seed) + " entry (" + std::to_string(i) +
                        "," + std::to_string(j) + ") rel err " + fmt(rel));
          }
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 1.0) return fail("took " + fmt(elapsed) + " s, budget 1 s");
  return pass();
}

// ---------------------------------------------------------------------------
// Gate 2: accepted iterations never increase f + g beyond 1e-12.

GateResult gate_monotone() {
  const auto t0 = Clock::now();
  const double lambdas[] = {0.0, 0.1, 0.3};
  double worst_increase = -1e300;
  for (int i = 0; i < 100; ++i) {
    const int p = 2 + i % 19;  // 2..20
    SolverConfig cfg;
    cfg.lambda = lambdas[i % 3];
    cfg.eps = 1e-9;
    cfg.max_iter = 3000;
    const CorrelationMatrix r =
        random_correlation(p, 7000 + static_cast<std::uint64_t>(i));
    const auto [f0, g0] = objective(Matrix::Identity(p, p), r, cfg.lambda);
    double prev = f0 + g0;
    double max_inc = -1e300;
    fit(r, cfg, [&](int, double f, double g, double) {
      max_inc = std::max(max_inc, (f + g) - prev);
      prev = f + g;
    });
    worst_increase = std::max(worst_increase, max_inc);
    if (max_inc > 1e-12) {
      return fail("instance " + std::to_string(i) + " (p=" + std::to_string(p) +
                  ", lambda=" + fmt(cfg.lambda) + ") increase " + fmt(max_inc));
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 30.0) return fail("took " + fmt(elapsed) + " s, budget 30 s");
  return pass();
}

// ---------------------------------------------------------------------------
// Gate 3: unpenalized minimizer satisfies A A^T = R^{-1} (direct inversion).

GateResult gate_mle() {
  for (int p = 2; p <= 10; ++p) {
    const CorrelationMatrix r = random_correlation(p, 40 + static_cast<std::uint64_t>(p));
    SolverConfig cfg;
    cfg.lambda = 0.0;
    cfg.eps = 1e-10;
    cfg.max_iter = 50000;
    const SolverResult res = fit(r, cfg);
    if (!res.converged) return fail("p=" + std::to_string(p) + " did not converge");
    const Matrix rinv = invert(lu_factor(r.matrix()));
    const double rel = (res.a * res.a.transpose() - rinv).norm() / rinv.norm();
    if (!(rel < 1e-4)) {
      return fail("p=" + std::to_string(p) + " relative Frobenius error " + fmt(rel));
    }
  }
  return pass();
}

// ---------------------------------------------------------------------------
// Gate 4: identity input with lambda = 0.2 has a known diagonal fixed point.

// Positive root of 2a - 2/a + lambda = 0, found by bisection: the stationary
// equation of the per-diagonal objective a^2 - 2 log a + lambda * a.
double diagonal_root(double lambda) {
  double lo = 0.5, hi = 1.5;
  auto phi = [lambda](double a) { return 2.0 * a - 2.0 / a + lambda; };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

GateResult gate_closed_form() {
  const double root = diagonal_root(0.2);
  const double algebraic = (-0.2 + std::sqrt(16.04)) / 4.0;
  if (std::abs(root - algebraic) > 1e-12) {
    return fail("bisection oracle disagrees with algebraic root: " + fmt(root) +
                " vs " + fmt(algebraic));
  }
  SolverConfig cfg;
  cfg.lambda = 0.2;
  cfg.eps = 1e-14;
  cfg.max_iter = 10000;
  const SolverResult res = fit(CorrelationMatrix(Matrix::Identity(2, 2)), cfg);
  for (int i = 0; i < 2; ++i) {
    if (std::abs(res.a(i, i) - root) > 1e-6) {
      return fail("diagonal entry " + std::to_string(i) + " = " + fmt(res.a(i, i)) +
                  ", expected " + fmt(root));
    }
  }
  if (res.a(0, 1) != 0.0 || res.a(1, 0) != 0.0) {
    return fail("off-diagonals not exactly zero: " + fmt(res.a(0, 1)) + ", " +
                fmt(res.a(1, 0)));
  }
  return pass();
}

// ---------------------------------------------------------------------------
// Gate 5: class representatives are equal exactly for equivalent inputs,
// exhaustively over every DAG on up to 4 nodes.

std::vector<Dag> all_dags(int p) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
  std::vector<Dag> out;
  const std::size_t total = static_cast<std::size_t>(std::pow(3.0, pairs.size()));
  for (std::size_t code = 0; code < total; ++code) {
    Digraph g(p);
    std::size_t c = code;
    for (const auto& [i, j] : pairs) {
      switch (c % 3) {
        case 1: g.add_edge(i, j); break;
        case 2: g.add_edge(j, i); break;
        default: break;
      }
      c /= 3;
    }
    if (is_acyclic(g)) out.emplace_back(g);
  }
  return out;
}

GateResult gate_cpdag() {
  const auto t0 = Clock::now();
  for (int p = 2; p <= 4; ++p) {
    const std::vector<Dag> dags = all_dags(p);
    if (p == 4 && dags.size() != 543) {
      return fail("enumeration found " + std::to_string(dags.size()) +
                  " DAGs on 4 nodes, expected 543");
    }
    struct Repr {
      std::set<NodePair> skel;
      std::set<std::tuple<int, int, int>> vs;
      Cpdag cpdag;
    };
    std::vector<Repr> reprs;
    reprs.reserve(dags.size());
    for (const Dag& d : dags) {
      reprs.push_back({skeleton(d.graph()), v_structures(d), dag_to_cpdag(d)});
    }
    for (std::size_t i = 0; i < reprs.size(); ++i) {
      for (std::size_t j = i + 1; j < reprs.size(); ++j) {
        const bool equivalent =
            reprs[i].skel == reprs[j].skel && reprs[i].vs == reprs[j].vs;
        const bool same_output =
            reprs[i].cpdag.directed() == reprs[j].cpdag.directed() &&
            reprs[i].cpdag.undirected() == reprs[j].cpdag.undirected();
        if (equivalent != same_output) {
          return fail("p=" + std::to_string(p) + " DAG pair (" + std::to_string(i) +
                      "," + std::to_string(j) + "): equivalent=" +
                      (equivalent ? "yes" : "no") + " but outputs " +
                      (same_output ? "equal" : "differ"));
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 10.0) return fail("took " + fmt(elapsed) + " s, budget 10 s");
  return pass();
}

// ---------------------------------------------------------------------------
// Gate 6: empirical covariance of simulated data matches the analytic one.

GateResult gate_covariance() {
  const auto t0 = Clock::now();
  const Dag dag = random_dag(5, 2.0, RngSeed{61});
  const SemSpec sem = random_sem(dag, RngSeed{62});
  const Matrix analytic = analytic_covariance(sem);
  for (NoiseFamily fam : {NoiseFamily::gaussian, NoiseFamily::exponential}) {
    const Matrix x = sample_data(sem, 100000, fam, RngSeed{63});
    const Matrix emp = covariance_from_data(x);
    const double rel = (emp - analytic).norm() / analytic.norm();
    if (!(rel < 0.05)) {
      return fail(to_string(fam) + " noise: relative Frobenius error " + fmt(rel));
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 5.0) return fail("took " + fmt(elapsed) + " s, budget 5 s");
  return pass();
}

// ---------------------------------------------------------------------------
// Gate 7: mean skeleton F1 rises with sample size and clears a pinned floor.

GateResult gate_recovery_trend() {
  const auto t0 = Clock::now();
  BenchConfig cfg;
  cfg.p_list = {10};
  cfg.k_list = {2.0};
  cfg.noise_list = {NoiseFamily::gaussian};
  cfg.n_list = {100, 1000, 10000};
  cfg.lambda_list = {0.2};
  cfg.replicates = 20;
  cfg.master_seed = RngSeed{2026};
  const BenchOutput out = run_benchmark(cfg, 4);
  std::map<int, std::pair<double, int>> by_n;  // n -> (f1 sum, count)
  for (const MetricsRecord& rec : out.records) {
    by_n[rec.n].first += rec.f1;
    by_n[rec.n].second += 1;
  }
  std::vector<double> means;
  for (int n : cfg.n_list) {
    const auto& [sum, count] = by_n.at(n);
    if (count != cfg.replicates) {
      return fail("n=" + std::to_string(n) + " has " + std::to_string(count) +
                  " records, expected " + std::to_string(cfg.replicates));
    }
    means.push_back(sum / count);
  }
  const std::string trace = "mean F1 " + fmt(means[0]) + " -> " + fmt(means[1]) +
                            " -> " + fmt(means[2]);
  if (!(means[0] < means[1] && means[1] < means[2])) {
    return fail("not strictly increasing: " + trace);
  }
  if (!(means[2] > 0.0)) return fail("F1 at n=10000 is zero: " + trace);
  // Regression floor pinned from this grid's own deterministic pilot run
  // (master seed 2026 gives mean F1 0.974936 at n = 10000).
  const double pinned = 0.95;
  if (!(means[2] > pinned)) {
    return fail("F1 at n=10000 " + fmt(means[2]) + " below pinned floor " +
                fmt(pinned));
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 120.0) return fail("took " + fmt(elapsed) + " s, budget 120 s");
  return pass();
}

// ---------------------------------------------------------------------------
// Gate 8: protein-signaling anchor, run when the user supplies the dataset.

std::optional<fs::path> sachs_path() {
  if (const char* env = std::getenv("NODAG_SACHS_CSV")) {
    if (*env != '\0' && fs::exists(env)) return fs::path(env);
  }
  for (const char* candidate : {"data/sachs.csv", "../data/sachs.csv"}) {
    if (fs::exists(candidate)) return fs::path(candidate);
  }
  return std::nullopt;
}

std::string canonical_protein(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  static const std::map<std::string, std::string> aliases = {
      {"praf", "raf"},     {"pmek", "mek"}, {"p44/42", "erk"},
      {"pakts473", "akt"}, {"pjnk", "jnk"},
  };
  const auto it = aliases.find(name);
  return it == aliases.end() ? name : it->second;
}

GateResult gate_sachs() {
  const auto path = sachs_path();
  if (!path) {
    return skip(
        "dataset not supplied (set NODAG_SACHS_CSV or place data/sachs.csv)");
  }
  DataTable table = read_data_csv(path->string(), true);
  if (table.values.cols() != 11) {
    return fail("expected 11 columns, found " + std::to_string(table.values.cols()));
  }
  std::map<std::string, int> index;
  for (std::size_t j = 0; j < table.names.size(); ++j) {
    index[canonical_protein(table.names[j])] = static_cast<int>(j);
  }
  for (const char* required : {"plcg", "pip2", "pip3", "pka", "erk", "pkc", "p38"}) {
    if (index.count(required) == 0) return fail(std::string("column not found: ") + required);
  }
  std::string note = table.values.rows() == 7466
                         ? ""
                         : " (note: " + std::to_string(table.values.rows()) +
                               " rows, expected 7466)";

  // Two documented preprocessing variants: raw measurements and their natural
  // log. The gate passes when either yields the consensus picture.
  std::vector<std::pair<std::string, Matrix>> variants;
  variants.emplace_back("raw", table.values);
  if ((table.values.array() > 0.0).all()) {
    variants.emplace_back("log", table.values.array().log().matrix());
  }
  std::string outcomes;
  for (const auto& [label, x] : variants) {
    SolverConfig cfg;
    cfg.lambda = 0.2;
    cfg.eps = 1e-8;
    cfg.max_iter = 10000;
    const SolverResult res = fit(CorrelationMatrix::from_data(x), cfg);
    const Digraph g = support_graph(res);
    const bool acyclic = is_acyclic(g);
    const int edges = static_cast<int>(g.edge_count());
    const bool consensus = g.has_edge(index["plcg"], index["pip2"]) &&
                           g.has_edge(index["pip3"], index["pip2"]) &&
                           g.has_edge(index["pka"], index["erk"]) &&
                           g.has_edge(index["pkc"], index["p38"]);
    if (acyclic && edges >= 10 && edges <= 14 && consensus) {
      return pass();
    }
    outcomes += " [" + label + ": " + (acyclic ? "acyclic" : "cyclic") + ", " +
                std::to_string(edges) + " edges, consensus edges " +
                (consensus ? "present" : "missing") + "]";
  }
  return fail("no preprocessing variant matched" + outcomes + note);
}

// ---------------------------------------------------------------------------
// Gate 9: fit cost tracks the variable count, not the sample count.

GateResult gate_timing() {
  // Equal-workload comparison: the solver consumes a p x p correlation, so a
  // fixed 60-iteration budget (tolerance too small to ever trigger) gives the
  // same amount of arithmetic at n = 100 and n = 10000; to-convergence wall
  // times are not comparable because the iteration count depends on the
  // conditioning of the input, not on its size.
  const Dag dag = random_dag(50, 2.0, RngSeed{91});
  const SemSpec sem = random_sem(dag, RngSeed{92});
  const Matrix x = sample_data(sem, 10000, NoiseFamily::gaussian, RngSeed{93});
  const CorrelationMatrix r_small = CorrelationMatrix::from_data(x.topRows(100));
  const CorrelationMatrix r_big = CorrelationMatrix::from_data(x);
  SolverConfig cfg;
  cfg.lambda = 0.2;
  cfg.eps = 1e-300;
  cfg.max_iter = 60;

  auto timed_fit = [&cfg](const CorrelationMatrix& r) -> std::optional<double> {
    const auto t0 = Clock::now();
    const SolverResult res = fit(r, cfg);
    const double ms = 1000.0 * seconds_since(t0);
    if (res.iterations != cfg.max_iter || res.converged) return std::nullopt;
    return ms;
  };
  (void)timed_fit(r_small);  // warm up caches before measuring
  (void)timed_fit(r_big);
  std::vector<double> small_ms, big_ms;
  for (int rep = 0; rep < 9; ++rep) {
    const auto a = timed_fit(r_small);
    const auto b = timed_fit(r_big);
    if (!a || !b) return fail("fixed iteration budget exited early");
    small_ms.push_back(*a);
    big_ms.push_back(*b);
  }
  const auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  const double t_small = median(small_ms);
  const double t_big = median(big_ms);
  const double gap = std::abs(t_small - t_big) / std::max(t_small, t_big);
  if (!(gap < 0.20)) {
    return fail("p=50 equal-workload fit times " + fmt(t_small) + " ms (n=100) vs " +
                fmt(t_big) + " ms (n=10000): gap " + fmt(100.0 * gap) + "%");
  }

  // Absolute budget: a p = 100, n = 1000 problem fits end to end in seconds.
  const Dag dag2 = random_dag(100, 2.0, RngSeed{94});
  const SemSpec sem2 = random_sem(dag2, RngSeed{95});
  const Matrix x2 = sample_data(sem2, 1000, NoiseFamily::gaussian, RngSeed{96});
  SolverConfig cfg2;
  cfg2.lambda = 0.2;
  cfg2.eps = 1e-8;
  cfg2.max_iter = 10000;
  const auto t0 = Clock::now();
  const SolverResult res2 = fit(CorrelationMatrix::from_data(x2), cfg2);
  const double end_to_end = seconds_since(t0);
  if (!res2.converged) return fail("p=100 fit did not converge");
  if (!(end_to_end < 10.0)) {
    return fail("p=100, n=1000 fit took " + fmt(end_to_end) + " s, budget 10 s");
  }
  return pass();
}

// ---------------------------------------------------------------------------
// Gate 10: every CLI subcommand is byte-reproducible (wall-time fields in the
// benchmark outputs masked, as documented).

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("'") + NODAG_CLI_PATH + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

// Replaces a comma-separated field (0-based) with MASKED on every non-header line.
std::string mask_csv_fields(const std::string& text, const std::set<int>& fields) {
  std::istringstream in(text);
  std::ostringstream os;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!first) {
      std::istringstream cells(line);
      std::string cell;
      std::vector<std::string> parts;
      while (std::getline(cells, cell, ',')) parts.push_back(cell);
      for (int f : fields) {
        if (f < static_cast<int>(parts.size())) parts[static_cast<std::size_t>(f)] = "MASKED";
      }
      line.clear();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) line += ',';
        line += parts[i];
      }
    }
    first = false;
    os << line << '\n';
  }
  return os.str();
}

Json meta_without_times(const fs::path& p) {
  Json j = load_json_file(p.string());
  j.erase("timestamp_utc");
  j.erase("correlation_time_ms");
  return j;
}

GateResult gate_determinism() {
  const fs::path dir =
      fs::temp_directory_path() / ("nodag_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto file = [&dir](const std::string& name) { return (dir / name).string(); };
  std::string diffs;
  const auto expect_equal = [&diffs](const std::string& what, const std::string& a,
                                     const std::string& b) {
    if (a != b) diffs += " " + what;
  };

  for (char tag : {'a', 'b'}) {
    const std::string t(1, tag);
    const RunResult sim = run_cli("simulate --p 8 --k 2 --noise exponential --n 200"
                                  " --seed 11 --out " + file("data_" + t + ".csv") +
                                      " --truth-out " + file("truth_" + t + ".json"),
                                  dir);
    if (sim.exit_code != 0) return fail("simulate exited " + std::to_string(sim.exit_code));
    fs::rename(dir / "stdout.txt", dir / ("sim_stdout_" + t));

    const RunResult fitted = run_cli("fit --data " + file("data_" + t + ".csv") +
                                         " --lambda 0.2 --out " + file("g_" + t + ".json") +
                                         " --matrix-out " + file("m_" + t + ".csv") +
                                         " --sem-out " + file("s_" + t + ".json"),
                                     dir);
    if (fitted.exit_code != 0) return fail("fit exited " + std::to_string(fitted.exit_code));
    fs::rename(dir / "stdout.txt", dir / ("fit_stdout_" + t));

    const RunResult ev = run_cli("eval --est " + file("g_" + t + ".json") +
                                     " --truth " + file("truth_" + t + ".json"),
                                 dir);
    if (ev.exit_code != 0) return fail("eval exited " + std::to_string(ev.exit_code));
    fs::rename(dir / "stdout.txt", dir / ("eval_stdout_" + t));
  }
  expect_equal("simulate-stdout", slurp(dir / "sim_stdout_a"), slurp(dir / "sim_stdout_b"));
  expect_equal("simulate-data", slurp(dir / "data_a.csv"), slurp(dir / "data_b.csv"));
  expect_equal("simulate-truth", slurp(dir / "truth_a.json"), slurp(dir / "truth_b.json"));
  expect_equal("fit-stdout", slurp(dir / "fit_stdout_a"), slurp(dir / "fit_stdout_b"));
  expect_equal("fit-graph", slurp(dir / "g_a.json"), slurp(dir / "g_b.json"));
  expect_equal("fit-matrix", slurp(dir / "m_a.csv"), slurp(dir / "m_b.csv"));
  expect_equal("fit-sem", slurp(dir / "s_a.json"), slurp(dir / "s_b.json"));
  expect_equal("eval-stdout", slurp(dir / "eval_stdout_a"), slurp(dir / "eval_stdout_b"));

  {
    std::ofstream cfg(dir / "bench.json");
    cfg << R"({"p_list": [5], "k_list": [1.5], "noise_list": ["gaussian", "exponential"],
               "n_list": [50, 100], "lambda_list": [0.1, 0.3],
               "replicates": 2, "master_seed": 404})";
  }
  for (char tag : {'a', 'b'}) {
    const std::string t(1, tag);
    const RunResult bench = run_cli("bench --config " + file("bench.json") +
                                        " --out " + file("rec_" + t + ".csv") +
                                        " --summary " + file("sum_" + t + ".csv") +
                                        " --workers 2",
                                    dir);
    if (bench.exit_code != 0) return fail("bench exited " + std::to_string(bench.exit_code));
  }
  // Records column 13 is the fit wall time; summary columns 16/17 its mean/se.
  expect_equal("bench-records",
               mask_csv_fields(slurp(dir / "rec_a.csv"), {13}),
               mask_csv_fields(slurp(dir / "rec_b.csv"), {13}));
  expect_equal("bench-summary",
               mask_csv_fields(slurp(dir / "sum_a.csv"), {16, 17}),
               mask_csv_fields(slurp(dir / "sum_b.csv"), {16, 17}));
  if (meta_without_times(dir / "rec_a.csv.meta.json") !=
      meta_without_times(dir / "rec_b.csv.meta.json")) {
    diffs += " bench-meta";
  }

  fs::remove_all(dir);
  if (!diffs.empty()) return fail("outputs differ between identical runs:" + diffs);
  return pass();
}

}  // namespace

int main() {
  struct Gate {
    std::string name;
    std::function<GateResult()> run;
  };
  const std::vector<Gate> gates = {
      {"gradient matches central finite differences (h=1e-6, rel err <= 1e-5)",
       gate_gradient},
      {"no accepted iteration increases f+g by more than 1e-12 (100 instances)",
       gate_monotone},
      {"unpenalized solution reproduces the inverse correlation (rel err < 1e-4)",
       gate_mle},
      {"identity input, lambda=0.2: known diagonal value, off-diagonals exactly 0",
       gate_closed_form},
      {"class representatives equal exactly for equivalent DAGs (all p <= 4)",
       gate_cpdag},
      {"simulated covariance matches the analytic one within 5% (both noise families)",
       gate_covariance},
      {"mean skeleton F1 strictly increases over n and exceeds the pinned floor",
       gate_recovery_trend},
      {"protein-signaling dataset: acyclic, 12+-2 edges, consensus edges present",
       gate_sachs},
      {"fit cost depends on p, not n (equal-workload < 20%); p=100 fit < 10 s",
       gate_timing},
      {"every CLI subcommand byte-reproducible (bench wall-time fields masked)",
       gate_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto t0 = Clock::now();
    GateResult result;
    try {
      result = gates[i].run();
    } catch (const std::exception& e) {
      result = fail(std::string("unexpected exception: ") + e.what());
    }
    const double elapsed = seconds_since(t0);
    const char* label = result.status == GateResult::Status::pass   ? "[PASS]"
                        : result.status == GateResult::Status::skip ? "[SKIP]"
                                                                    : "[FAIL]";
    std::cout << label << " criterion " << (i + 1) << ": " << gates[i].name;
    if (!result.detail.empty()) std::cout << " — " << result.detail;
    std::cout << " (" << fmt(elapsed) << " s)" << std::endl;
    if (result.status == GateResult::Status::fail) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  return 0;
}
