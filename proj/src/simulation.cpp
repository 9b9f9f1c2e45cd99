#include "nodag/simulation.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace nodag {

std::string to_string(NoiseFamily f) {
  return f == NoiseFamily::gaussian ? "gaussian" : "exponential";
}

NoiseFamily noise_family_from_string(const std::string& s) {
  if (s == "gaussian") return NoiseFamily::gaussian;
  if (s == "exponential") return NoiseFamily::exponential;
  throw ParameterError("unknown noise family '" + s + "' (gaussian or exponential)");
}

void SemSpec::validate() const {
  const int n = p();
  if (lambda_mat.rows() != n || lambda_mat.cols() != n) {
    throw DimensionError("coefficient matrix must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  }
  if (!lambda_mat.allFinite()) {
    throw ParameterError("coefficient matrix has non-finite entries");
  }
  if (static_cast<int>(omega.size()) != n) {
    throw DimensionError("omega needs one variance per node");
  }
  for (double w : omega) {
    if (!(w > 0.0)) throw ParameterError("noise variances must be strictly positive");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool nonzero = lambda_mat(i, j) != 0.0;
      if (i == j) {
        if (nonzero) throw ParameterError("coefficient diagonal must be zero");
      } else if (nonzero != dag.graph().has_edge(i, j)) {
        throw ParameterError("coefficient support must match the dag edges");
      }
    }
  }
  if (static_cast<int>(topo_order.size()) != n) {
    throw DimensionError("topo_order must list every node once");
  }
  std::vector<int> pos(n, -1);
  for (int idx = 0; idx < n; ++idx) {
    const int v = topo_order[idx];
    if (v < 0 || v >= n || pos[v] != -1) {
      throw ParameterError("topo_order is not a permutation of the nodes");
    }
    pos[v] = idx;
  }
  for (const auto& [i, j] : dag.edges()) {
    if (pos[i] > pos[j]) {
      throw ParameterError("topo_order is not a topological order of the dag");
    }
  }
}

Dag random_dag(int p, double k, RngSeed seed) {
  if (p < 2) throw ParameterError("random_dag needs p >= 2");
  if (!(k >= 0.0)) throw ParameterError("edge rate k must be >= 0");
  const double prob = k / p;
  if (prob > 1.0) {
    throw ParameterError("edge probability k/p exceeds 1");
  }

  Rng rng(seed);
  std::vector<int> order(p);  // order[t] = node at topological position t
  std::iota(order.begin(), order.end(), 0);
  for (int i = p - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  std::vector<int> pos(p);
  for (int t = 0; t < p; ++t) pos[order[t]] = t;

  // One uniform per unordered pair, in fixed (i, j) order, so the draw
  // sequence does not depend on the permutation.
  Digraph g(p);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if (rng.uniform01() < prob) {
        if (pos[i] < pos[j]) {
          g.add_edge(i, j);
        } else {
          g.add_edge(j, i);
        }
      }
    }
  }
  return Dag(std::move(g));
}

SemSpec random_sem(const Dag& dag, RngSeed seed) {
  Rng rng(seed);
  const int p = dag.node_count();
  Matrix lam = Matrix::Zero(p, p);
  for (const auto& [i, j] : dag.edges()) {
    lam(i, j) = rng.uniform(0.1, 1.0);
  }
  return SemSpec{dag,
                 std::move(lam),
                 std::vector<double>(static_cast<std::size_t>(p), 1.0),
                 NoiseFamily::gaussian,
                 dag.topological_order(),
                 seed};
}

Matrix sample_data(const SemSpec& sem, int n, NoiseFamily noise_family, RngSeed seed) {
  sem.validate();
  if (n < 1) throw ParameterError("sample size must be >= 1");
  const int p = sem.p();

  std::vector<std::vector<int>> parents(static_cast<std::size_t>(p));
  for (const auto& [i, j] : sem.dag.edges()) parents[j].push_back(i);
  std::vector<double> noise_scale(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) noise_scale[j] = std::sqrt(sem.omega[j]);

  Rng rng(seed);
  Matrix x(n, p);
  std::vector<double> eps(static_cast<std::size_t>(p));
  for (int row = 0; row < n; ++row) {
    for (int j = 0; j < p; ++j) {
      const double z =
          noise_family == NoiseFamily::gaussian ? rng.normal() : rng.exponential();
      eps[j] = noise_scale[j] * z;
    }
    for (int v : sem.topo_order) {
      double val = eps[v];
      for (int i : parents[v]) val += sem.lambda_mat(i, v) * x(row, i);
      x(row, v) = val;
    }
  }
  return x;
}

Matrix analytic_covariance(const SemSpec& sem) {
  sem.validate();
  const int p = sem.p();
  const Matrix b = Matrix::Identity(p, p) - sem.lambda_mat;
  const Matrix m = LuFactors(b).inverse();
  const Eigen::Map<const Vector> w(sem.omega.data(), p);
  const Matrix sigma = m.transpose() * w.asDiagonal() * m;
  return 0.5 * (sigma + sigma.transpose());
}

}  // namespace nodag
