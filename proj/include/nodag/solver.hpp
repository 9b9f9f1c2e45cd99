#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nodag/graphs.hpp"
#include "nodag/matrix_core.hpp"

namespace nodag {

/// Hyperparameters of the proximal-gradient solver.
struct SolverConfig {
  double lambda = 0.0;            ///< l1 penalty weight, >= 0
  double eps = 1e-6;              ///< termination tolerance on the objective decrease
  int max_iter = 1000;            ///< outer iteration cap
  double alpha = 0.5;             ///< step-shrink factor, strictly in (0, 1)
  bool penalize_diagonal = true;  ///< include diagonal entries in the l1 term
  std::optional<Matrix> init;     ///< starting factor; identity when absent

  void validate(Eigen::Index dim) const;
};

/// Fitted factor with diagnostics. `a * a^T` estimates the inverse of the
/// input matrix; the off-diagonal support of `a` is the estimated graph.
struct SolverResult {
  Matrix a;
  double f = 0.0;      ///< smooth objective part at a
  double g = 0.0;      ///< penalty part at a
  double delta = 0.0;  ///< objective decrease of the last accepted iteration
  int iterations = 0;
  bool converged = false;
};

/// Backtracking could not find an acceptable step (step size underflowed
/// below 1e-16). Carries the last valid iterate.
struct StepFailureError : std::runtime_error {
  explicit StepFailureError(SolverResult last_result)
      : std::runtime_error("solver error: line search failed to find an acceptable step"),
        last(std::move(last_result)) {}
  SolverResult last;
};

/// Elementwise shrinkage sign(m_ij) * (|m_ij| - t)_+ ; entries with
/// magnitude at most t become exactly zero. Proximal operator of t*||.||_1.
template <typename Derived>
Matrix soft_threshold(const Eigen::MatrixBase<Derived>& m, double t) {
  if (!(t >= 0.0)) {
    throw ParameterError("soft_threshold level must be >= 0");
  }
  return m.unaryExpr([t](double v) {
    const double mag = std::abs(v) - t;
    return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
  });
}

/// Objective split (f, g): f = -2 log|det a| + trace(a^T r a) evaluated via
/// an LU factorization, g = lambda * l1-norm of a (diagonal included when
/// penalize_diagonal).
std::pair<double, double> objective(const Matrix& a, const CorrelationMatrix& r,
                                    double lambda, bool penalize_diagonal = true);

/// Gradient of the smooth part: 2 r a - 2 (a^{-1})^T.
Matrix gradient(const Matrix& a, const CorrelationMatrix& r);

/// Observer invoked after every accepted outer iteration with
/// (iteration index, f, g, accepted step size).
using IterationCallback = std::function<void(int, double, double, double)>;

/// Proximal-gradient minimization of
///   -2 log|det A| + trace(A^T R A) + lambda ||A||_1
/// over invertible A, starting from cfg.init (identity by default). Each
/// iteration backtracks from step 1 until the local-model and descent
/// conditions both hold; terminates when the objective decrease drops below
/// cfg.eps or after cfg.max_iter iterations.
///
/// The penalized problem is nonconvex: the result is the local minimizer
/// reached from the starting point, and depends on it.
SolverResult fit(const CorrelationMatrix& r, const SolverConfig& cfg,
                 const IterationCallback& on_accept = {});

/// Same iteration on an arbitrary symmetric positive-definite second-moment
/// matrix (a covariance when standardization is bypassed).
SolverResult fit_gram(const Matrix& gram, const SolverConfig& cfg,
                      const IterationCallback& on_accept = {});

/// Estimated graph: edge i -> j iff i != j and |a_ij| > tol. The default
/// tol = 0 relies on the shrinkage producing exact zeros.
Digraph support_graph(const SolverResult& res, double tol = 0.0);

/// Structural coefficients read off a fitted factor. With the model
/// factorization A = (I - Lambda) Omega^{-1/2}, the diagonal of A carries
/// Omega_jj^{-1/2}, so Lambda_ij = -A_ij / A_jj and omega_j = A_jj^{-2}.
struct SemCoefficients {
  Matrix lambda;
  std::vector<double> omega;
};

/// Columns whose diagonal entry is negative are sign-flipped first (A and
/// -A produce the same A A^T; positive diagonal is the normalization).
/// A zero diagonal entry leaves the coefficients undefined and throws.
SemCoefficients factor_to_sem(const Matrix& a);

}  // namespace nodag
