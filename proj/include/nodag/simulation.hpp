#pragma once

#include <string>
#include <vector>

#include "nodag/graphs.hpp"
#include "nodag/matrix_core.hpp"
#include "nodag/rng.hpp"

namespace nodag {

enum class NoiseFamily { gaussian, exponential };

std::string to_string(NoiseFamily f);
NoiseFamily noise_family_from_string(const std::string& s);

/// Ground-truth linear structural equation model X = Lambda^T X + eps.
/// lambda_mat(i, j) is the coefficient on edge i -> j; its support is
/// exactly the edge set of dag and its diagonal is zero. omega holds the
/// noise variances (diagonal of Var(eps)).
struct SemSpec {
  Dag dag;
  Matrix lambda_mat;
  std::vector<double> omega;
  NoiseFamily noise_family = NoiseFamily::gaussian;
  std::vector<int> topo_order;
  RngSeed seed;  ///< seed random_sem was called with; replay provenance

  int p() const { return dag.node_count(); }

  /// Checks the invariants above; throws ParameterError / DimensionError.
  void validate() const;
};

/// Random DAG: draws a uniform topological order, then includes each
/// compatible edge independently with probability k/p.
Dag random_dag(int p, double k, RngSeed seed);

/// Coefficients i.i.d. Uniform(0.1, 1) on the dag's edges, unit noise
/// variances.
SemSpec random_sem(const Dag& dag, RngSeed seed);

/// n i.i.d. observations (rows) from the structural equations, with noise
/// coordinates drawn standard normal or Exp(1). Exp(1) noise is used raw:
/// downstream correlation estimation centers the data, so its nonzero mean
/// is immaterial, and its variance is 1 as the model requires.
Matrix sample_data(const SemSpec& sem, int n, NoiseFamily noise_family, RngSeed seed);

/// Model covariance (I - Lambda)^{-T} Omega (I - Lambda)^{-1}; symmetric
/// positive definite for any DAG.
Matrix analytic_covariance(const SemSpec& sem);

}  // namespace nodag
