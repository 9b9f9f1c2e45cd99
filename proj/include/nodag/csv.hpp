#pragma once

#include <string>
#include <vector>

#include "nodag/matrix_core.hpp"

namespace nodag {

/// Rectangular numeric dataset: one observation per row, one variable per
/// column. names is empty when the file had no header row.
struct DataTable {
  std::vector<std::string> names;
  Matrix values;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

/// Reads a comma-separated numeric file. Blank lines are ignored; every
/// remaining line must have the same number of cells; any cell that is not
/// a finite number is a parse error reporting its 1-based row and column.
/// With has_header, the first non-blank line supplies the variable names.
DataTable read_data_csv(const std::string& path, bool has_header);

/// Writes rows of m at full round-trip precision, preceded by a header line
/// when names is nonempty (its size must then match the column count).
void write_data_csv(const std::string& path, const Matrix& m,
                    const std::vector<std::string>& names = {});

}  // namespace nodag
