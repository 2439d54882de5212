#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace oeh::milp {

/// Sentinel for an absent bound. Upper bounds use +kInfinity, lower bounds -kInfinity.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using VarId = std::int32_t;

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Term {
  VarId var = 0;
  double coef = 0.0;
};

struct Variable {
  VarId id = 0;
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integral = false;
};

struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// Compressed sparse column/row storage. `start` has outer_size + 1 entries.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> start;
  std::vector<int> index;
  std::vector<double> value;

  [[nodiscard]] std::size_t nnz() const { return value.size(); }
};

/// Thrown when an instance violates a structural invariant. `offending()` lists the
/// variable ids / constraint names responsible.
class InstanceError : public std::runtime_error {
 public:
  InstanceError(const std::string& what, std::vector<std::string> offending)
      : std::runtime_error(what), offending_(std::move(offending)) {}

  [[nodiscard]] const std::vector<std::string>& offending() const { return offending_; }

 private:
  std::vector<std::string> offending_;
};

/// A minimisation MILP: bounded variables, sparse linear rows and a linear objective with a
/// constant offset. Immutable after construction, so one instance can back any number of
/// concurrent solves.
class MILPInstance {
 public:
  MILPInstance() : MILPInstance(std::vector<Variable>{}, {}, {}, 0.0) {}

  /// Validates every invariant and throws InstanceError listing all offenders.
  MILPInstance(std::vector<Variable> variables, std::vector<LinearConstraint> constraints,
               std::vector<Term> objective, double objective_offset, std::string name = "OEHPLAN");

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::span<const Variable> variables() const { return variables_; }
  [[nodiscard]] std::span<const LinearConstraint> constraints() const { return constraints_; }
  [[nodiscard]] std::span<const Term> objective() const { return objective_; }
  [[nodiscard]] double objective_offset() const { return objective_offset_; }
  [[nodiscard]] std::size_t num_variables() const { return variables_.size(); }
  [[nodiscard]] std::size_t num_constraints() const { return constraints_.size(); }
  [[nodiscard]] std::size_t num_integral() const;

  [[nodiscard]] const Variable& variable(VarId id) const { return variables_.at(static_cast<std::size_t>(id)); }
  [[nodiscard]] std::optional<VarId> find_variable(std::string_view name) const;

  /// Dense objective coefficient vector (length num_variables()).
  [[nodiscard]] const std::vector<double>& cost() const { return cost_; }
  /// Constraint matrix, column-major (rows = constraints).
  [[nodiscard]] const SparseMatrix& csc() const { return csc_; }
  /// Constraint matrix, row-major.
  [[nodiscard]] const SparseMatrix& csr() const { return csr_; }

  [[nodiscard]] double evaluate_objective(std::span<const double> values) const;

 private:
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<LinearConstraint> constraints_;
  std::vector<Term> objective_;
  double objective_offset_ = 0.0;
  std::vector<double> cost_;
  SparseMatrix csc_;
  SparseMatrix csr_;
  std::unordered_map<std::string, VarId> by_name_;
};

/// Incremental construction of a MILPInstance. Duplicate terms in a row are merged and
/// exact-zero coefficients dropped, so builders may emit expressions naively.
class InstanceBuilder {
 public:
  VarId add_variable(std::string name, double lower = 0.0, double upper = kInfinity, bool integral = false);
  std::size_t add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs);
  void add_objective(VarId var, double coef);
  void add_objective_constant(double value) { offset_ += value; }

  [[nodiscard]] std::size_t num_variables() const { return variables_.size(); }
  [[nodiscard]] std::size_t num_constraints() const { return constraints_.size(); }
  [[nodiscard]] const Variable& variable(VarId id) const { return variables_.at(static_cast<std::size_t>(id)); }
  [[nodiscard]] double objective_coefficient(VarId var) const;

  [[nodiscard]] MILPInstance build(std::string name = "OEHPLAN") const;

 private:
  std::vector<Variable> variables_;
  std::vector<LinearConstraint> constraints_;
  std::vector<double> objective_;
  double offset_ = 0.0;
};

/// Sorts terms by variable id, sums duplicates and removes zeros.
std::vector<Term> canonicalize(std::vector<Term> terms);

[[nodiscard]] std::string_view to_string(Sense sense);

}  // namespace oeh::milp
