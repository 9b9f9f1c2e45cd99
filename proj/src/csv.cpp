#include "nodag/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nodag/format.hpp"

namespace nodag {

namespace {

bool blank(const std::string& line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Cell -> finite double; row/col are 1-based file coordinates for messages.
double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string cell = trimmed(raw);
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || cell.empty() || !std::isfinite(v)) {
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                     ": not a number: '" + cell + "'");
  }
  return v;
}

}  // namespace

DataTable read_data_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open " + path);
  }

  DataTable table;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  bool header_pending = has_header;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;

    const auto cells = split_cells(line);
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw ParseError("row " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(width));
    }

    if (header_pending) {
      header_pending = false;
      for (const auto& c : cells) table.names.push_back(trimmed(c));
      continue;
    }

    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      row[c] = parse_cell(cells[c], line_no, c + 1);
    }
    rows.push_back(std::move(row));
  }

  if (width == 0 || rows.empty()) {
    throw ParseError(path + ": no data rows");
  }

  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return table;
}

void write_data_csv(const std::string& path, const Matrix& m,
                    const std::vector<std::string>& names) {
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != m.cols()) {
    throw DimensionError("header has " + std::to_string(names.size()) +
                         " names for " + std::to_string(m.cols()) + " columns");
  }
  std::ostringstream out;
  if (!names.empty()) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) out << ',';
      out << names[i];
    }
    out << '\n';
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << fmt_full(m(r, c));
    }
    out << '\n';
  }

  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << out.str()) || !file.flush()) {
    throw FileError("cannot write " + path);
  }
}

}  // namespace nodag
