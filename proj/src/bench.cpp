#include "nodag/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "nodag/format.hpp"

namespace nodag {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double, std::milli>(to - from).count();
}

template <typename T>
void require_nonempty(const std::vector<T>& v, const char* name) {
  if (v.empty()) throw ParameterError(std::string(name) + " must be nonempty");
}

struct Job {
  int p = 0;
  double k = 0.0;
  NoiseFamily noise = NoiseFamily::gaussian;
  int replicate = 0;
  std::size_t slot = 0;  // first index of this job's records
};

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void BenchConfig::validate() const {
  require_nonempty(p_list, "p_list");
  require_nonempty(k_list, "k_list");
  require_nonempty(noise_list, "noise_list");
  require_nonempty(n_list, "n_list");
  require_nonempty(lambda_list, "lambda_list");
  if (replicates < 1) throw ParameterError("replicates must be >= 1");
  for (int p : p_list) {
    if (p < 2) throw ParameterError("grid p must be >= 2");
  }
  for (double k : k_list) {
    if (!(k >= 0.0)) throw ParameterError("grid k must be >= 0");
    for (int p : p_list) {
      if (k / p > 1.0) {
        throw ParameterError("edge probability k/p exceeds 1 at p = " + std::to_string(p));
      }
    }
  }
  for (int n : n_list) {
    if (n < 2) throw ParameterError("grid n must be >= 2 (correlation needs two rows)");
  }
  for (double l : lambda_list) {
    if (!(l >= 0.0)) throw ParameterError("grid lambda must be >= 0");
  }
  if (solver.init) {
    throw ParameterError("bench solver defaults cannot pin an init matrix (p varies)");
  }
  SolverConfig probe = solver;
  probe.lambda = lambda_list.front();
  probe.validate(1);
}

std::uint64_t job_seed(RngSeed master, int p, double k, NoiseFamily noise, int replicate) {
  std::uint64_t k_bits = 0;
  static_assert(sizeof(k_bits) == sizeof(k));
  std::memcpy(&k_bits, &k, sizeof(k));
  RngSeed s = master;
  s = derive_seed(s, static_cast<std::uint64_t>(p));
  s = derive_seed(s, k_bits);
  s = derive_seed(s, static_cast<std::uint64_t>(noise));
  s = derive_seed(s, static_cast<std::uint64_t>(replicate));
  return s.seed;
}

BenchOutput run_benchmark(const BenchConfig& cfg, int workers, const ProgressSink& progress) {
  cfg.validate();
  if (workers < 1) throw ParameterError("workers must be >= 1");

  const std::size_t per_job = cfg.n_list.size() * cfg.lambda_list.size();
  std::vector<Job> jobs;
  for (int p : cfg.p_list) {
    for (double k : cfg.k_list) {
      for (NoiseFamily noise : cfg.noise_list) {
        for (int rep = 1; rep <= cfg.replicates; ++rep) {
          jobs.push_back({p, k, noise, rep, jobs.size() * per_job});
        }
      }
    }
  }

  BenchOutput out;
  out.records.resize(jobs.size() * per_job);

  const int n_max = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());

  std::mutex shared_mutex;  // guards progress + correlation time
  std::size_t jobs_done = 0;
  std::atomic<std::size_t> next_job{0};
  std::exception_ptr first_error;

  auto run_job = [&](const Job& job) {
    const std::uint64_t js = job_seed(cfg.master_seed, job.p, job.k, job.noise, job.replicate);
    const RngSeed base{js};
    const Dag dag = random_dag(job.p, job.k, derive_seed(base, 1));
    const SemSpec sem = random_sem(dag, derive_seed(base, 2));
    const Matrix x = sample_data(sem, n_max, job.noise, derive_seed(base, 3));
    const Cpdag truth_cpdag = dag_to_cpdag(dag);

    double corr_ms = 0.0;
    std::size_t slot = job.slot;
    for (int n : cfg.n_list) {
      const auto c0 = Clock::now();
      const CorrelationMatrix r = correlation_from_data(x.topRows(n));
      corr_ms += elapsed_ms(c0, Clock::now());

      for (double lambda : cfg.lambda_list) {
        SolverConfig sc = cfg.solver;
        sc.lambda = lambda;

        const auto t0 = Clock::now();
        SolverResult res;
        try {
          res = fit(r, sc);
        } catch (const StepFailureError& e) {
          res = e.last;
        }
        const double ms = elapsed_ms(t0, Clock::now());

        const Digraph est = support_graph(res);
        const SkeletonMetrics m = skeleton_metrics(est, dag);

        MetricsRecord rec;
        rec.p = job.p;
        rec.k = job.k;
        rec.noise = job.noise;
        rec.n = n;
        rec.lambda = lambda;
        rec.replicate = job.replicate;
        rec.seed = js;
        rec.f1 = m.f1;
        rec.tpr = m.tpr;
        rec.fpr = m.fpr;
        rec.shd_graph = shd(est, dag.graph());
        rec.shd_cpdag = shd(estimate_pdag(est), truth_cpdag);
        rec.time_ms = ms;
        rec.iterations = res.iterations;
        rec.converged = res.converged;
        rec.acyclic_estimate = is_acyclic(est);
        out.records[slot++] = std::move(rec);
      }
    }

    std::lock_guard<std::mutex> lock(shared_mutex);
    out.correlation_time_ms += corr_ms;
    ++jobs_done;
    if (progress) progress(jobs_done, jobs.size());
  };

  auto worker_loop = [&] {
    while (true) {
      const std::size_t i = next_job.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        run_job(jobs[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(shared_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const std::size_t thread_count =
      std::min<std::size_t>(static_cast<std::size_t>(workers), jobs.size());
  if (thread_count <= 1) {
    worker_loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker_loop);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Canonical order regardless of the config's list order or the schedule.
  std::sort(out.records.begin(), out.records.end(),
            [](const MetricsRecord& a, const MetricsRecord& b) {
              return std::tie(a.p, a.k, a.noise, a.n, a.lambda, a.replicate) <
                     std::tie(b.p, b.k, b.noise, b.n, b.lambda, b.replicate);
            });
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records) {
  if (records.empty()) throw ParameterError("summarize needs at least one record");

  using Key = std::tuple<int, double, NoiseFamily, int, double>;
  std::map<Key, std::vector<const MetricsRecord*>> groups;
  for (const auto& r : records) {
    groups[{r.p, r.k, r.noise, r.n, r.lambda}].push_back(&r);
  }

  auto mean_se = [](const std::vector<const MetricsRecord*>& g, auto field) {
    MeanSe ms;
    const double c = static_cast<double>(g.size());
    for (const auto* r : g) ms.mean += field(*r);
    ms.mean /= c;
    if (g.size() > 1) {
      double ss = 0.0;
      for (const auto* r : g) {
        const double d = field(*r) - ms.mean;
        ss += d * d;
      }
      ms.se = std::sqrt(ss / (c - 1.0)) / std::sqrt(c);
    }
    return ms;
  };

  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, g] : groups) {
    SummaryRow row;
    std::tie(row.p, row.k, row.noise, row.n, row.lambda) = key;
    row.count = g.size();
    row.f1 = mean_se(g, [](const MetricsRecord& r) { return r.f1; });
    row.tpr = mean_se(g, [](const MetricsRecord& r) { return r.tpr; });
    row.fpr = mean_se(g, [](const MetricsRecord& r) { return r.fpr; });
    row.shd_graph = mean_se(g, [](const MetricsRecord& r) { return double(r.shd_graph); });
    row.shd_cpdag = mean_se(g, [](const MetricsRecord& r) { return double(r.shd_cpdag); });
    row.time_ms = mean_se(g, [](const MetricsRecord& r) { return r.time_ms; });
    row.iterations = mean_se(g, [](const MetricsRecord& r) { return double(r.iterations); });
    row.converged = mean_se(g, [](const MetricsRecord& r) { return r.converged ? 1.0 : 0.0; });
    row.acyclic_estimate =
        mean_se(g, [](const MetricsRecord& r) { return r.acyclic_estimate ? 1.0 : 0.0; });
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* const kRecordsCsvHeader =
    "p,k,noise,n,lambda,replicate,seed,method,f1,tpr,fpr,shd_graph,shd_cpdag,"
    "time_ms,iterations,converged,acyclic_estimate";

const char* const kSummaryCsvHeader =
    "p,k,noise,n,lambda,count,f1_mean,f1_se,tpr_mean,tpr_se,fpr_mean,fpr_se,"
    "shd_graph_mean,shd_graph_se,shd_cpdag_mean,shd_cpdag_se,time_ms_mean,time_ms_se,"
    "iterations_mean,iterations_se,converged_mean,converged_se,"
    "acyclic_estimate_mean,acyclic_estimate_se";

std::string records_csv(const std::vector<MetricsRecord>& records) {
  std::ostringstream out;
  out << kRecordsCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.p << ',' << fmt_metric(r.k) << ',' << to_string(r.noise) << ',' << r.n << ','
        << fmt_metric(r.lambda) << ',' << r.replicate << ',' << r.seed << ',' << r.method
        << ',' << fmt_metric(r.f1) << ',' << fmt_metric(r.tpr) << ',' << fmt_metric(r.fpr)
        << ',' << r.shd_graph << ',' << r.shd_cpdag << ',' << fmt_metric(r.time_ms) << ','
        << r.iterations << ',' << (r.converged ? "true" : "false") << ','
        << (r.acyclic_estimate ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << kSummaryCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.p << ',' << fmt_metric(row.k) << ',' << to_string(row.noise) << ',' << row.n
        << ',' << fmt_metric(row.lambda) << ',' << row.count;
    for (const MeanSe* m : {&row.f1, &row.tpr, &row.fpr, &row.shd_graph, &row.shd_cpdag,
                            &row.time_ms, &row.iterations, &row.converged,
                            &row.acyclic_estimate}) {
      out << ',' << fmt_metric(m->mean) << ',' << fmt_metric(m->se);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<double> double_list(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ParseError(std::string("bench config needs an array \"") + key + "\"");
  }
  std::vector<double> v;
  for (const Json& item : j[key]) {
    if (!item.is_number()) throw ParseError(std::string(key) + " entries must be numbers");
    v.push_back(item.get<double>());
  }
  return v;
}

std::vector<int> int_list(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ParseError(std::string("bench config needs an array \"") + key + "\"");
  }
  std::vector<int> v;
  for (const Json& item : j[key]) {
    if (!item.is_number_integer()) {
      throw ParseError(std::string(key) + " entries must be integers");
    }
    v.push_back(item.get<int>());
  }
  return v;
}

}  // namespace

BenchConfig bench_config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("bench config must be a json object");
  BenchConfig cfg;
  cfg.p_list = int_list(j, "p_list");
  cfg.k_list = double_list(j, "k_list");
  cfg.n_list = int_list(j, "n_list");
  cfg.lambda_list = double_list(j, "lambda_list");

  if (!j.contains("noise_list") || !j["noise_list"].is_array()) {
    throw ParseError("bench config needs an array \"noise_list\"");
  }
  for (const Json& item : j["noise_list"]) {
    if (!item.is_string()) throw ParseError("noise_list entries must be strings");
    cfg.noise_list.push_back(noise_family_from_string(item.get<std::string>()));
  }

  if (j.contains("replicates")) {
    if (!j["replicates"].is_number_integer()) {
      throw ParseError("\"replicates\" must be an integer");
    }
    cfg.replicates = j["replicates"].get<int>();
  }

  if (j.contains("master_seed")) {
    if (!j["master_seed"].is_number_integer() && !j["master_seed"].is_number_unsigned()) {
      throw ParseError("\"master_seed\" must be an integer");
    }
    cfg.master_seed.seed = j["master_seed"].get<std::uint64_t>();
  }

  if (j.contains("solver")) {
    const Json& s = j["solver"];
    if (!s.is_object()) throw ParseError("\"solver\" must be a json object");
    for (auto it = s.begin(); it != s.end(); ++it) {
      const std::string& key = it.key();
      const Json& v = it.value();
      if (key == "eps") {
        if (!v.is_number()) throw ParseError("solver eps must be a number");
        cfg.solver.eps = v.get<double>();
      } else if (key == "max_iter") {
        if (!v.is_number_integer()) throw ParseError("solver max_iter must be an integer");
        cfg.solver.max_iter = v.get<int>();
      } else if (key == "alpha") {
        if (!v.is_number()) throw ParseError("solver alpha must be a number");
        cfg.solver.alpha = v.get<double>();
      } else if (key == "penalize_diagonal") {
        if (!v.is_boolean()) throw ParseError("solver penalize_diagonal must be a boolean");
        cfg.solver.penalize_diagonal = v.get<bool>();
      } else {
        throw ParseError("unknown solver option \"" + key + "\"");
      }
    }
  }

  cfg.validate();
  return cfg;
}

Json bench_config_json(const BenchConfig& cfg) {
  Json noise = Json::array();
  for (NoiseFamily f : cfg.noise_list) noise.push_back(to_string(f));
  return Json{{"p_list", cfg.p_list},
              {"k_list", cfg.k_list},
              {"noise_list", std::move(noise)},
              {"n_list", cfg.n_list},
              {"lambda_list", cfg.lambda_list},
              {"replicates", cfg.replicates},
              {"master_seed", cfg.master_seed.seed},
              {"solver",
               {{"eps", cfg.solver.eps},
                {"max_iter", cfg.solver.max_iter},
                {"alpha", cfg.solver.alpha},
                {"penalize_diagonal", cfg.solver.penalize_diagonal}}}};
}

Json run_metadata_json(const BenchConfig& cfg, const BenchOutput& out, int workers) {
  Json j;
  j["config"] = bench_config_json(cfg);
  j["workers"] = workers;
  j["records"] = out.records.size();
  j["correlation_time_ms"] = out.correlation_time_ms;
  j["timestamp_utc"] = iso8601_utc_now();
  j["sampling"] = "datasets nested across n: each n uses the first n rows of one "
                  "max-n sample per (p, k, noise, replicate) job";
  j["seed_scheme"] = "job seed = splitmix64 chain over (master_seed, p, k bit pattern, "
                     "noise enum, replicate); dag/sem/data seeds derived from it with "
                     "tags 1/2/3";
  j["versions"] = Json{{"nodag", "0.1.0"},
                       {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                     std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                     std::to_string(EIGEN_MINOR_VERSION)},
                       {"compiler", __VERSION__}};
  return j;
}

}  // namespace nodag
