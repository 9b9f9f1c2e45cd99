#pragma once

#include <Eigen/Dense>
#include <utility>

#include "nodag/errors.hpp"

namespace nodag {

// Dense double-precision matrices everywhere; Eigen's default column-major
// storage. All interfaces are index based, storage order never leaks.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// LU factorization with partial pivoting, P*M = L*U.
///
/// A factorization is flagged singular when some pivot magnitude |U_ii|
/// falls below 1e-12 times the largest row 1-norm of the input, or is
/// exactly zero. log_abs_det() and inverse() refuse to run on a singular
/// factorization.
class LuFactors {
 public:
  explicit LuFactors(const Matrix& m);

  Eigen::Index dim() const { return lu_.rows(); }
  bool singular() const { return singular_; }

  /// Packed factors: strictly lower part of L (unit diagonal implied), U on
  /// and above the diagonal.
  const Matrix& packed_lu() const { return lu_.matrixLU(); }

  /// Row permutation as an index sequence (a permutation of 0..p-1).
  Eigen::VectorXi pivots() const { return lu_.permutationP().indices(); }

  /// Applies the row permutation to a matrix (computes P*m).
  Matrix permute_rows(const Matrix& m) const { return lu_.permutationP() * m; }

  /// log|det M| of the factored matrix, from the pivot magnitudes.
  double log_abs_det() const;

  Matrix inverse() const;

 private:
  Eigen::PartialPivLU<Matrix> lu_;
  bool singular_ = false;
};

inline LuFactors lu_factor(const Matrix& m) { return LuFactors(m); }
inline double log_abs_det(const LuFactors& f) { return f.log_abs_det(); }
inline Matrix invert(const LuFactors& f) { return f.inverse(); }

/// Empirical correlation matrix: symmetric with unit diagonal, off-diagonal
/// entries in [-1, 1]. The solver's sole data input.
class CorrelationMatrix {
 public:
  /// Validates an existing matrix against the class invariants.
  explicit CorrelationMatrix(Matrix r);

  /// Sample correlation of the columns of an n-by-p data matrix. Columns are
  /// mean-centered first; the n-vs-(n-1) variance divisor cancels in the
  /// ratio. Perfectly correlated columns produce exactly +-1.
  static CorrelationMatrix from_data(const Matrix& x);

  /// Rescales a symmetric positive-definite matrix to unit diagonal.
  static CorrelationMatrix from_covariance(const Matrix& s);

  Eigen::Index dim() const { return r_.rows(); }
  const Matrix& matrix() const { return r_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return r_(i, j); }

 private:
  struct Unchecked {};
  CorrelationMatrix(Matrix r, Unchecked) : r_(std::move(r)) {}

  Matrix r_;
};

inline CorrelationMatrix correlation_from_data(const Matrix& x) {
  return CorrelationMatrix::from_data(x);
}

/// Sample covariance of the columns of an n-by-p data matrix (divisor n-1),
/// mirrored to be exactly symmetric.
Matrix covariance_from_data(const Matrix& x);

/// Sum of absolute values over all entries.
template <typename Derived>
double l1_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().sum();
}

/// Sum of absolute values over off-diagonal entries only.
template <typename Derived>
double l1_norm_offdiag(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
}

}  // namespace nodag
