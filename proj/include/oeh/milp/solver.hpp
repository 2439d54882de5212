#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "oeh/milp/instance.hpp"

namespace oeh::milp {

struct SolverConfig {
  double feasibility_tol = 1e-6;
  double integrality_tol = 1e-6;
  /// Relative gap (incumbent - bound) / max(1, |incumbent|) at which branch-and-bound stops.
  double optimality_gap = 1e-6;
  double pivot_tol = 1e-9;
  std::int64_t node_limit = 1'000'000;

  /// Throws std::invalid_argument unless every tolerance is positive.
  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NodeLimit };

[[nodiscard]] std::string_view to_string(SolveStatus status);

struct LPSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;         ///< one per variable
  std::vector<double> duals;          ///< one per constraint (row multipliers)
  std::vector<double> reduced_costs;  ///< one per variable
  double objective = 0.0;
  /// Lagrangian dual objective recomputed from duals and reduced costs (Optimal only).
  double dual_objective = 0.0;
  /// Sum of bound violations left by phase 1 (Infeasible certificate).
  double phase1_infeasibility = 0.0;
  /// Improving direction for Unbounded results (one entry per variable).
  std::vector<double> ray;
  std::int64_t iterations = 0;
};

/// Root LP basis of a previous branch-and-bound run. Reusable for any instance whose
/// presolved form has the same shape (for example the same model with other costs or
/// right-hand sides); otherwise it is ignored.
struct WarmStart {
  int rows = 0;
  int cols = 0;
  std::vector<int> head;
  std::vector<std::uint8_t> state;
};

struct MILPSolution {
  SolveStatus status = SolveStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = kInfinity;
  double best_bound = -kInfinity;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  std::shared_ptr<const WarmStart> root_basis;

  [[nodiscard]] double relative_gap() const;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves the LP relaxation (integrality ignored) with a bounded revised simplex.
LPSolution solve_lp(const MILPInstance& instance, const SolverConfig& config = {});

/// Presolve (singleton rows, fixed columns), then best-first branch-and-bound over LP
/// relaxations with most-fractional branching and lowest-id tie breaking.
MILPSolution solve_milp(const MILPInstance& instance, const SolverConfig& config = {}, const WarmStart* warm = nullptr);

}  // namespace oeh::milp
