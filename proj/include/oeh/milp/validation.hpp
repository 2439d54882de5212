#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oeh/milp/instance.hpp"

namespace oeh::milp {

class SolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ValidationReport {
  double max_constraint_violation = 0.0;
  double mean_constraint_violation = 0.0;
  double max_bound_violation = 0.0;
  double max_integrality_deviation = 0.0;
  double objective = 0.0;
  /// Absolute violation of every row (0 when satisfied).
  std::vector<double> row_violations;
  std::ptrdiff_t worst_row = -1;
  VarId worst_variable = -1;

  [[nodiscard]] double max_residual() const;
  /// Rows whose violation exceeds `threshold`.
  [[nodiscard]] std::vector<std::size_t> violated_rows(double threshold = 0.0) const;
};

/// Residuals of `values` against every row, bound and integrality requirement.
/// Throws SolutionError naming the first variable without a value.
ValidationReport validate_solution(const MILPInstance& instance, std::span<const double> values);

using NamedValues = std::vector<std::pair<std::string, double>>;

/// Dense value vector from name/value pairs. Names may be original variable names or the
/// C%07d names used in MPS output. Throws SolutionError naming any variable left unset or
/// any unknown name.
std::vector<double> values_from_named(const MILPInstance& instance, const NamedValues& named);

/// Solution file: UTF-8 lines "<variable name> <value>", '#' starts a comment.
NamedValues read_solution(std::istream& in);
NamedValues read_solution_file(const std::filesystem::path& path);
void write_solution(const MILPInstance& instance, std::span<const double> values, std::ostream& out);

}  // namespace oeh::milp
