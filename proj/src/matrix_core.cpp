#include "nodag/matrix_core.hpp"

#include <cmath>
#include <string>

namespace nodag {

LuFactors::LuFactors(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("lu_factor expects a square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (m.rows() == 0) {
    throw DimensionError("lu_factor expects a non-empty matrix");
  }
  if (!m.allFinite()) {
    throw ParameterError("lu_factor input has non-finite entries");
  }
  lu_.compute(m);

  // Pivot tolerance scaled by the worst row of the original matrix.
  const double row_scale = m.cwiseAbs().rowwise().sum().maxCoeff();
  const double tol = 1e-12 * row_scale;
  const double min_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
  singular_ = (min_pivot < tol) || (min_pivot == 0.0);
}

double LuFactors::log_abs_det() const {
  if (singular_) {
    throw SingularMatrixError("log_abs_det on a singular factorization");
  }
  return lu_.matrixLU().diagonal().array().abs().log().sum();
}

Matrix LuFactors::inverse() const {
  if (singular_) {
    throw SingularMatrixError("inverse of a singular factorization");
  }
  return lu_.inverse();
}

namespace {

void check_data_shape(const Matrix& x) {
  if (x.cols() < 1) {
    throw DimensionError("data matrix has no columns");
  }
  if (x.rows() < 2) {
    throw InsufficientDataError("need at least 2 observations, got " +
                                std::to_string(x.rows()));
  }
  if (!x.allFinite()) {
    throw ParameterError("data matrix has non-finite entries");
  }
}

// Centers columns in place and rejects columns with no variation. The
// degeneracy test is on the largest centered deviation, scaled to the raw
// column magnitude, so exactly-constant columns are caught even when the
// computed mean carries rounding noise.
Matrix centered_columns(const Matrix& x) {
  Matrix c = x;
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    const double mean = c.col(j).mean();
    c.col(j).array() -= mean;
    const double dev = c.col(j).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, x.col(j).cwiseAbs().maxCoeff());
    if (dev <= 1e-12 * scale) {
      throw DegenerateDataError("column " + std::to_string(j + 1) +
                                " has zero sample variance");
    }
  }
  return c;
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(Matrix r) : r_(std::move(r)) {
  if (r_.rows() != r_.cols() || r_.rows() < 1) {
    throw DimensionError("correlation matrix must be square and non-empty");
  }
  if (!r_.allFinite()) {
    throw ParameterError("correlation matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < r_.rows(); ++i) {
    if (r_(i, i) != 1.0) {
      throw ParameterError("correlation diagonal must be exactly 1");
    }
    for (Eigen::Index j = i + 1; j < r_.cols(); ++j) {
      if (r_(i, j) != r_(j, i)) {
        throw ParameterError("correlation matrix must be exactly symmetric");
      }
      if (r_(i, j) < -1.0 || r_(i, j) > 1.0) {
        throw ParameterError("correlation entries must lie in [-1, 1]");
      }
    }
  }
}

CorrelationMatrix CorrelationMatrix::from_data(const Matrix& x) {
  check_data_shape(x);
  const Matrix c = centered_columns(x);
  const Eigen::Index p = x.cols();

  Matrix r = Matrix::Identity(p, p);
  Vector ss(p);
  for (Eigen::Index j = 0; j < p; ++j) ss(j) = c.col(j).squaredNorm();

  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double cross = c.col(i).dot(c.col(j));
      double rij;
      if (cross * cross >= ss(i) * ss(j)) {
        // Cauchy-Schwarz equality: perfectly correlated columns map to +-1
        // exactly instead of picking up a 1-ulp rounding residue.
        rij = cross > 0 ? 1.0 : -1.0;
      } else {
        rij = cross / std::sqrt(ss(i) * ss(j));
        rij = std::clamp(rij, -1.0, 1.0);
      }
      r(i, j) = rij;
      r(j, i) = rij;
    }
  }
  return CorrelationMatrix(std::move(r), Unchecked{});
}

CorrelationMatrix CorrelationMatrix::from_covariance(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() < 1) {
    throw DimensionError("covariance matrix must be square and non-empty");
  }
  if (!s.allFinite()) {
    throw ParameterError("covariance matrix has non-finite entries");
  }
  const Eigen::Index p = s.rows();
  const double scale = s.cwiseAbs().maxCoeff();
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale)) {
    throw ParameterError("covariance matrix is not symmetric");
  }
  Matrix r = Matrix::Identity(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(s(j, j) > 0.0)) {
      throw DegenerateDataError("covariance diagonal entry " +
                                std::to_string(j + 1) + " is not positive");
    }
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double v = 0.5 * (s(i, j) + s(j, i));
      double rij = v / std::sqrt(s(i, i) * s(j, j));
      rij = std::clamp(rij, -1.0, 1.0);
      r(i, j) = rij;
      r(j, i) = rij;
    }
  }
  return CorrelationMatrix(std::move(r), Unchecked{});
}

Matrix covariance_from_data(const Matrix& x) {
  check_data_shape(x);
  const Matrix c = centered_columns(x);
  const Eigen::Index p = x.cols();
  const double denom = static_cast<double>(x.rows() - 1);

  Matrix s(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    s(i, i) = c.col(i).squaredNorm() / denom;
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double v = c.col(i).dot(c.col(j)) / denom;
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

}  // namespace nodag
