#pragma once

// Sensitivity sweeps over the CO2 tax, a CO2 budget and the power-from-shore limit. Every
// point is an independent solve; points run in parallel and rows come back in grid order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oeh/analysis/accounting.hpp"

namespace oeh::analysis {

enum class SweepKind { Tax, Budget, Pfs };

std::string_view to_string(SweepKind kind);
std::optional<SweepKind> parse_sweep_kind(std::string_view s);

struct SweepRow {
  std::size_t index = 0;
  double parameter = 0.0;  ///< tax (per t), cap fraction of base emissions, or PFS limit (MW)
  milp::SolveStatus status = milp::SolveStatus::Infeasible;
  bool feasible = false;
  double cost = 0.0;
  double emissions_mt = 0.0;     ///< Mt CO2 per year
  double cap_t = 0.0;            ///< emission cap of a budget point, t/yr (0 for other sweeps)
  bool binding = false;          ///< cap met with equality
  double pfs_installed_mw = 0.0;
  double pfs_utilization = 0.0;  ///< installed PFS over the allowed limit summed over onshore buses
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double gap = 0.0;
  double max_residual = 0.0;
  bool warm_started = false;
  LossLedger losses;
  std::vector<CapacityEntry> capacities;
};

struct SweepResult {
  SweepKind kind = SweepKind::Tax;
  std::vector<SweepRow> rows;
  double base_emissions_t = 0.0;  ///< uncapped emissions (budget sweeps)
  double fixed_tax = 0.0;         ///< tax held during PFS sweeps
};

struct SweepOptions {
  SweepOptions() { solver.optimality_gap = 1e-10; }

  /// The tight default gap keeps neighbouring points comparable at 1e-6 relative.
  milp::SolverConfig solver;
  /// Points whose grid index is a multiple of this are solved from scratch; the others
  /// start from the root basis of the anchor below them. 1 disables warm starts.
  int anchor_every = 10;
  /// Upper bound on worker threads; 0 means the OpenMP default. OEHPLAN_THREADS caps both.
  int threads = 0;
  /// Evaluation order is shuffled with this seed when set. Rows do not depend on it.
  std::optional<std::uint64_t> shuffle_seed;
};

/// lo, lo + step, ... up to hi (inclusive within 1e-9 step). Throws std::invalid_argument
/// for step <= 0 or lo > hi.
std::vector<double> linear_grid(double lo, double hi, double step);
/// 1, 1 - step, ... down to and including 0.
std::vector<double> budget_fractions(double step);

/// Worker count after applying OEHPLAN_THREADS.
int sweep_threads(int requested);

SweepResult sweep_co2_tax(const model::EnergySystem& base, const std::vector<double>& taxes, const SweepOptions& options = {});
/// Solves `base` without a cap first, then with caps fraction * base emissions.
SweepResult sweep_co2_budget(const model::EnergySystem& base, const std::vector<double>& fractions, const SweepOptions& options = {});
/// Sets every onshore bus limit to each value in turn with the tax fixed.
SweepResult sweep_pfs_capacity(const model::EnergySystem& base, const std::vector<double>& limits, double fixed_tax,
                               const SweepOptions& options = {});

/// Parameter from which cost and PFS capacity stay constant (within rel_tol) up to the last
/// row; empty unless at least one later row confirms it and all those rows are feasible.
std::optional<double> saturation_point(const std::vector<SweepRow>& rows, double rel_tol = 1e-6);

}  // namespace oeh::analysis
