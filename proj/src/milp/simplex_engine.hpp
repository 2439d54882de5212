#pragma once

// Bounded revised simplex shared by solve_lp and branch-and-bound.
//
// Internal form: structural columns x_0..x_{n-1} plus one logical per row with
//   A x - s = 0,  lo <= (x, s) <= up,
// so a row "a x <= b" becomes a logical with bounds (-inf, b]. The starting basis is the
// all-logical basis. Costs are scaled by a power of two so tolerances are relative to the
// largest objective coefficient; scaling by a power of two is exact.

#include <cstdint>
#include <vector>

#include "oeh/milp/instance.hpp"
#include "oeh/milp/solver.hpp"
#include "lu_factor.hpp"

namespace oeh::milp::detail {

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

struct Basis {
  std::vector<int> head;         ///< variable basic in each row position (size m)
  std::vector<VarState> state;   ///< per variable, structurals then logicals (size n + m)
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

class BasisFactor {
 public:
  /// Factorizes B = [columns of (A | -I) selected by head]. Returns false if singular.
  bool factor(const SparseMatrix& csc, int n, const std::vector<int>& head);
  void ftran(std::vector<double>& v) const;
  void btran(std::vector<double>& v) const;
  void push_eta(int r, const std::vector<double>& alpha);
  [[nodiscard]] int eta_count() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };
  int m_ = 0;
  MarkowitzLU lu_;
  std::vector<Eta> etas_;
  std::vector<int> start_, index_;
  std::vector<double> value_;
};

class SimplexEngine {
 public:
  SimplexEngine(const MILPInstance& instance, const SolverConfig& config);

  [[nodiscard]] int num_structural() const { return n_; }
  [[nodiscard]] int num_rows() const { return m_; }

  void set_structural_bounds(int j, double lower, double upper);
  void restore_structural_bounds();
  [[nodiscard]] double lower(int j) const { return lo_[static_cast<std::size_t>(j)]; }
  [[nodiscard]] double upper(int j) const { return up_[static_cast<std::size_t>(j)]; }

  LpStatus solve();
  LpStatus solve(const Basis& warm);

  [[nodiscard]] Basis basis() const { return Basis{head_, state_}; }
  [[nodiscard]] std::int64_t iterations() const { return iterations_; }

  [[nodiscard]] std::vector<double> structural_values() const;
  /// Row multipliers in original cost units.
  [[nodiscard]] std::vector<double> row_duals() const;
  [[nodiscard]] std::vector<double> structural_reduced_costs() const;
  [[nodiscard]] double objective() const;
  [[nodiscard]] double dual_objective() const;
  [[nodiscard]] double phase1_infeasibility() const { return phase1_infeasibility_; }
  [[nodiscard]] std::vector<double> unbounded_ray() const;

 private:
  enum class Outcome { Optimal, Infeasible, Unbounded, Restart };

  LpStatus drive();
  Outcome run_primal();
  Outcome run_dual();

  void install_slack_basis();
  void place_nonbasic_at_bounds();
  bool refactor();
  void recompute_primal();
  void recompute_duals();
  bool make_dual_feasible();
  [[nodiscard]] bool primal_feasible() const;
  [[nodiscard]] bool dual_feasible() const;
  void compute_pivot_row(const std::vector<double>& rho);
  void load_column(int j, std::vector<double>& out) const;
  void pivot(int row, int entering, int leaving_state_bound, const std::vector<double>& alpha);
  void check_iteration_budget();

  [[nodiscard]] bool is_fixed(int j) const { return lo_[static_cast<std::size_t>(j)] == up_[static_cast<std::size_t>(j)]; }

  const MILPInstance& instance_;
  SolverConfig config_;
  int n_ = 0;
  int m_ = 0;
  double cost_scale_ = 1.0;
  double ptol_ = 1e-9;
  double dtol_ = 1e-9;
  double pivtol_ = 1e-9;

  std::vector<double> cost_;  // scaled, size n + m
  std::vector<double> lo_, up_;
  std::vector<double> orig_lo_, orig_up_;
  std::vector<double> x_;
  std::vector<double> d_;
  std::vector<double> y_;
  std::vector<int> head_;
  std::vector<VarState> state_;
  BasisFactor factor_;

  // scratch
  std::vector<double> alpha_;
  std::vector<double> rho_;
  std::vector<double> row_alpha_;
  std::vector<double> dots_;
  std::vector<double> devex_;  // dual Devex reference weights per basis row
  std::vector<int> touched_;
  std::vector<char> touched_mark_;

  std::int64_t iterations_ = 0;
  std::int64_t iteration_budget_ = 0;
  double phase1_infeasibility_ = 0.0;
  int ray_entering_ = -1;
  int ray_direction_ = 0;
  std::vector<double> ray_alpha_;
};

}  // namespace oeh::milp::detail
