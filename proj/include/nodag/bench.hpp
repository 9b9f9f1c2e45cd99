#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nodag/serialize.hpp"
#include "nodag/simulation.hpp"
#include "nodag/solver.hpp"

namespace nodag {

/// Experiment grid. One dataset is generated per (p, k, noise, replicate)
/// and reused across every n (sample prefixes are nested) and every lambda.
struct BenchConfig {
  std::vector<int> p_list;
  std::vector<double> k_list;
  std::vector<NoiseFamily> noise_list;
  std::vector<int> n_list;
  std::vector<double> lambda_list;
  int replicates = 1;
  RngSeed master_seed;
  SolverConfig solver;  ///< defaults for every fit; lambda is taken from the grid

  void validate() const;
};

/// One evaluated fit: grid coordinates, replay seed, and recovery metrics.
struct MetricsRecord {
  int p = 0;
  double k = 0.0;
  NoiseFamily noise = NoiseFamily::gaussian;
  int n = 0;
  double lambda = 0.0;
  int replicate = 0;          ///< 1-based
  std::uint64_t seed = 0;     ///< job seed; replays the whole (p,k,noise,replicate) job
  std::string method = "nodag";
  double f1 = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  int shd_graph = 0;
  int shd_cpdag = 0;
  double time_ms = 0.0;       ///< fit only; correlation time is reported separately
  int iterations = 0;
  bool converged = false;
  bool acyclic_estimate = false;
};

struct BenchOutput {
  std::vector<MetricsRecord> records;  ///< canonical (p,k,noise,n,lambda,replicate) order
  double correlation_time_ms = 0.0;    ///< total across all jobs
};

/// Called after each finished job as (jobs done, jobs total).
using ProgressSink = std::function<void(std::size_t, std::size_t)>;

/// Runs the full grid. Jobs — one per (p, k, noise, replicate) — execute on
/// up to `workers` threads; every record is deterministic given
/// cfg.master_seed except the measured time_ms. A solver line-search failure
/// is recorded (converged = false, last valid iterate evaluated), never
/// aborts the run.
BenchOutput run_benchmark(const BenchConfig& cfg, int workers = 1,
                          const ProgressSink& progress = {});

/// Seed of the (p, k, noise, replicate) job, derived from the master seed by
/// hash-chaining the coordinates (k enters by its bit pattern, noise by its
/// enum value, replicate 1-based).
std::uint64_t job_seed(RngSeed master, int p, double k, NoiseFamily noise, int replicate);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  ///< sample standard error; 0 for groups of size 1
};

/// Per-(p, k, noise, n, lambda) aggregate of a record set.
struct SummaryRow {
  int p = 0;
  double k = 0.0;
  NoiseFamily noise = NoiseFamily::gaussian;
  int n = 0;
  double lambda = 0.0;
  std::size_t count = 0;
  MeanSe f1, tpr, fpr, shd_graph, shd_cpdag, time_ms, iterations, converged,
      acyclic_estimate;
};

/// Groups by (p, k, noise, n, lambda); rows come out in canonical key order.
/// Boolean metrics aggregate as rates. Throws on an empty input.
std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records);

extern const char* const kRecordsCsvHeader;
extern const char* const kSummaryCsvHeader;
std::string records_csv(const std::vector<MetricsRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);

BenchConfig bench_config_from_json(const Json& j);
Json bench_config_json(const BenchConfig& cfg);

/// Replay companion written next to every results file: config echo,
/// versions, worker count, correlation timing, timestamp.
Json run_metadata_json(const BenchConfig& cfg, const BenchOutput& out, int workers);

}  // namespace nodag
