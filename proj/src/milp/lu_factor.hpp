#pragma once

// Sparse LU of a square matrix by right-looking Markowitz elimination with threshold
// pivoting. Singleton columns and rows are taken first, so the slack-heavy bases met in
// the simplex factor with little or no fill.

#include <vector>

namespace oeh::milp::detail {

class MarkowitzLU {
 public:
  /// Columns in compressed form (start has m + 1 entries). Returns false if singular.
  bool factor(int m, const std::vector<int>& start, const std::vector<int>& index, const std::vector<double>& value);

  /// B x = v. Input indexed by row, output by column.
  void solve(std::vector<double>& v) const;
  /// B^T y = v. Input indexed by column, output by row.
  void solve_transpose(std::vector<double>& v) const;

  [[nodiscard]] int size() const { return m_; }
  [[nodiscard]] std::size_t fill() const { return l_value_.size() + ur_value_.size() + static_cast<std::size_t>(m_); }

 private:
  int m_ = 0;
  std::vector<int> prow_, pcol_;
  std::vector<double> diag_;
  std::vector<int> l_start_, l_index_;
  std::vector<double> l_value_;
  std::vector<int> ur_start_, ur_index_;  // row of U per pivot, column indices
  std::vector<double> ur_value_;
  std::vector<int> uc_start_, uc_index_;  // column of U per pivot, row indices
  std::vector<double> uc_value_;
  mutable std::vector<double> work_;
};

}  // namespace oeh::milp::detail
