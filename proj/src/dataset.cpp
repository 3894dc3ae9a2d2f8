#include "distreg/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace distreg {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, const std::string& path,
                  std::size_t line_no, std::size_t col_no) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (cell.empty() || end == begin || (end && *end != '\0'))
    throw std::runtime_error(path + ":" + std::to_string(line_no) +
                             ": column " + std::to_string(col_no + 1) + " ('" +
                             cell + "') is not numeric");
  if (!std::isfinite(v))
    throw std::runtime_error(path + ":" + std::to_string(line_no) +
                             ": column " + std::to_string(col_no + 1) +
                             " is not finite");
  return v;
}

}  // namespace

void Dataset::validate() const {
  if (n_rows == 0) throw std::invalid_argument("Dataset: no rows");
  if (columns.size() != n_rows * n_cols)
    throw std::invalid_argument("Dataset: feature storage size mismatch");
  if (targets.size() != n_rows)
    throw std::invalid_argument("Dataset: target size mismatch");
  if (column_names.size() != n_cols)
    throw std::invalid_argument("Dataset: column name count mismatch");
  for (const double v : columns)
    if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite feature");
  for (const double v : targets)
    if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite target");
}

Dataset load_csv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file, expected a header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_line(line);
  std::size_t target_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == target_column) target_idx = j;
  if (target_idx == header.size()) {
    std::string available;
    for (std::size_t j = 0; j < header.size(); ++j)
      available += (j ? ", " : "") + header[j];
    throw std::runtime_error(path + ": target column '" + target_column +
                             "' not found (columns: " + available + ")");
  }

  Dataset d;
  d.n_cols = header.size() - 1;
  d.target_name = target_column;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (j != target_idx) d.column_names.push_back(header[j]);

  std::vector<std::vector<double>> cols(d.n_cols);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, found " +
                               std::to_string(cells.size()));
    std::size_t feature = 0;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const double v = parse_cell(cells[j], path, line_no, j);
      if (j == target_idx) {
        d.targets.push_back(v);
      } else {
        cols[feature++].push_back(v);
      }
    }
  }

  d.n_rows = d.targets.size();
  if (d.n_rows == 0) throw std::runtime_error(path + ": no data rows");
  d.columns.reserve(d.n_rows * d.n_cols);
  for (const auto& c : cols) d.columns.insert(d.columns.end(), c.begin(), c.end());
  d.validate();
  return d;
}

void save_csv(const Dataset& data, const std::string& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");

  for (std::size_t j = 0; j < data.n_cols; ++j) out << data.column_names[j] << ',';
  out << data.target_name << '\n';

  char buf[64];
  auto write_value = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << sep;
  };
  for (std::size_t i = 0; i < data.n_rows; ++i) {
    for (std::size_t j = 0; j < data.n_cols; ++j) write_value(data.x(i, j), ',');
    write_value(data.targets[i], '\n');
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace distreg
