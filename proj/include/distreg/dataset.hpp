#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace distreg {

// Tabular regression data, features stored column-major.
struct Dataset {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> columns;  // column j occupies [j * n_rows, (j+1) * n_rows)
  std::vector<double> targets;
  std::vector<std::string> column_names;
  std::string target_name = "y";

  double x(std::size_t row, std::size_t col) const {
    return columns[col * n_rows + row];
  }

  std::span<const double> column(std::size_t col) const {
    return {columns.data() + col * n_rows, n_rows};
  }

  // Features of one row gathered into a contiguous buffer.
  void row(std::size_t i, std::vector<double>& out) const {
    out.resize(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) out[j] = x(i, j);
  }

  // Throws if shapes disagree or any value is non-finite.
  void validate() const;
};

// Reads a comma-separated file with a mandatory header row. The named column
// becomes the target, every other column a feature. Errors carry the
// offending row and column.
Dataset load_csv(const std::string& path, const std::string& target_column);

// Writes features plus target with 17 significant digits, so that a
// write/read round trip reproduces every double exactly.
void save_csv(const Dataset& data, const std::string& path);

}  // namespace distreg
