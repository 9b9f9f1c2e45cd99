#include "nodag/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace nodag {

namespace {

constexpr double kMinStep = 1e-16;

double penalty(const Matrix& a, double lambda, bool penalize_diagonal) {
  return lambda * (penalize_diagonal ? l1_norm(a) : l1_norm_offdiag(a));
}

void check_gram(const Matrix& gram) {
  if (gram.rows() != gram.cols() || gram.rows() < 1) {
    throw DimensionError("solver input must be a square non-empty matrix");
  }
  if (!gram.allFinite()) {
    throw ParameterError("solver input has non-finite entries");
  }
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ParameterError("solver input must be symmetric");
  }
}

// Smooth part evaluated through the LU factorization of a:
//   f = -2 sum log|U_ii| + sum_ij a_ij (r a)_ij.
// The product r*a is returned to the caller since the gradient reuses it.
double smooth_objective(const Matrix& a, const Matrix& r, const LuFactors& lu, Matrix& ra) {
  ra.noalias() = r * a;
  return -2.0 * lu.log_abs_det() + a.cwiseProduct(ra).sum();
}

}  // namespace

void SolverConfig::validate(Eigen::Index dim) const {
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
  if (!(eps > 0.0)) throw ParameterError("eps must be > 0");
  if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie strictly in (0, 1)");
  if (init) {
    if (init->rows() != dim || init->cols() != dim) {
      throw DimensionError("init must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (!init->allFinite()) throw ParameterError("init has non-finite entries");
  }
}

std::pair<double, double> objective(const Matrix& a, const CorrelationMatrix& r,
                                    double lambda, bool penalize_diagonal) {
  if (a.rows() != r.dim() || a.cols() != r.dim()) {
    throw DimensionError("factor and correlation dimensions differ");
  }
  const LuFactors lu(a);
  if (lu.singular()) {
    throw SingularMatrixError("objective at a singular factor");
  }
  Matrix ra;
  const double f = smooth_objective(a, r.matrix(), lu, ra);
  return {f, penalty(a, lambda, penalize_diagonal)};
}

Matrix gradient(const Matrix& a, const CorrelationMatrix& r) {
  if (a.rows() != r.dim() || a.cols() != r.dim()) {
    throw DimensionError("factor and correlation dimensions differ");
  }
  const LuFactors lu(a);
  if (lu.singular()) {
    throw SingularMatrixError("gradient at a singular factor");
  }
  return 2.0 * (r.matrix() * a) - 2.0 * lu.inverse().transpose();
}

SolverResult fit_gram(const Matrix& gram, const SolverConfig& cfg,
                      const IterationCallback& on_accept) {
  check_gram(gram);
  const Eigen::Index p = gram.rows();
  cfg.validate(p);

  Matrix a = cfg.init ? *cfg.init : Matrix::Identity(p, p);
  LuFactors lu(a);
  if (lu.singular()) {
    throw SingularMatrixError("initial factor is singular");
  }

  Matrix ra;  // gram * a at the current iterate
  double f = smooth_objective(a, gram, lu, ra);
  double g = penalty(a, cfg.lambda, cfg.penalize_diagonal);

  SolverResult res;
  res.delta = 0.0;

  Matrix grad(p, p), cand(p, p), cand_ra(p, p), diff(p, p);
  int k = 0;
  bool converged = false;

  while (k < cfg.max_iter && !converged) {
    ++k;
    grad.noalias() = 2.0 * ra;
    grad.noalias() -= 2.0 * lu.inverse().transpose();

    const Matrix prev = a;
    const double f_prev = f;
    const double g_prev = g;

    double s = 1.0;
    bool accepted = false;
    while (!accepted) {
      cand = soft_threshold(prev - s * grad, s * cfg.lambda);
      if (!cfg.penalize_diagonal) {
        cand.diagonal() = prev.diagonal() - s * grad.diagonal();
      }

      LuFactors cand_lu(cand);
      if (!cand_lu.singular()) {
        const double f_cand = smooth_objective(cand, gram, cand_lu, cand_ra);
        const double g_cand = penalty(cand, cfg.lambda, cfg.penalize_diagonal);
        diff = cand - prev;
        const double nu = (0.5 / s) * diff.squaredNorm() + diff.cwiseProduct(grad).sum();
        if (f_cand <= f_prev + nu && f_cand + g_cand <= f_prev + g_prev) {
          a.swap(cand);
          lu = std::move(cand_lu);
          ra.swap(cand_ra);
          f = f_cand;
          g = g_cand;
          accepted = true;
          break;
        }
      }
      // Singular candidates count as failed steps, same as a rejected
      // descent condition.
      s *= cfg.alpha;
      if (s < kMinStep) {
        res.a = prev;
        res.f = f_prev;
        res.g = g_prev;
        res.iterations = k - 1;
        res.converged = false;
        throw StepFailureError(std::move(res));
      }
    }

    res.delta = (f_prev + g_prev) - (f + g);
    if (on_accept) on_accept(k, f, g, s);
    if (res.delta < cfg.eps) converged = true;
  }

  res.a = std::move(a);
  res.f = f;
  res.g = g;
  res.iterations = k;
  res.converged = converged;
  return res;
}

SolverResult fit(const CorrelationMatrix& r, const SolverConfig& cfg,
                 const IterationCallback& on_accept) {
  return fit_gram(r.matrix(), cfg, on_accept);
}

Digraph support_graph(const SolverResult& res, double tol) {
  if (!(tol >= 0.0)) {
    throw ParameterError("support threshold must be >= 0");
  }
  const Eigen::Index p = res.a.rows();
  Digraph g(static_cast<int>(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j && std::abs(res.a(i, j)) > tol) {
        g.add_edge(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return g;
}

SemCoefficients factor_to_sem(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw DimensionError("factor must be a square non-empty matrix");
  }
  const Eigen::Index p = a.rows();
  Matrix b = a;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (b(j, j) == 0.0) {
      throw ParameterError("factor diagonal entry " + std::to_string(j + 1) +
                           " is zero; structural coefficients are undefined");
    }
    if (b(j, j) < 0.0) b.col(j) *= -1.0;
  }

  SemCoefficients sem;
  sem.lambda = Matrix::Zero(p, p);
  sem.omega.resize(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    sem.omega[static_cast<std::size_t>(j)] = 1.0 / (b(j, j) * b(j, j));
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i != j && b(i, j) != 0.0) {
        sem.lambda(i, j) = -b(i, j) / b(j, j);
      }
    }
  }
  return sem;
}

}  // namespace nodag
