#pragma once

// Post-solve accounting on a built planning model: energy losses by category, CO2
// emissions, an input/output energy audit and installed capacities.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oeh/milp/solver.hpp"
#include "oeh/model/operational.hpp"

namespace oeh::analysis {

/// A loss term needs an efficiency the system does not supply.
class AccountingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Annual energy losses, MWh/yr (period values weighted by W_s * H_t).
struct LossLedger {
  double generation_shed = 0.0;
  double heat_shed = 0.0;           ///< heat dumped by the heat balance
  double turbine_conversion = 0.0;  ///< (1/eta - 1 - eta_heat) p^G
  double battery_charging = 0.0;
  double separator = 0.0;
  double compressor = 0.0;
  double pump_oil = 0.0;
  double pump_water_injection = 0.0;
  double pump_water_lift = 0.0;
  double electrolysis_net = 0.0;  ///< electricity in minus hydrogen energy produced
  double fuel_cell = 0.0;
  double transmission = 0.0;
  double boiler = 0.0;
  double total = 0.0;

  using Field = double LossLedger::*;
  /// Category names and members in report column order (total excluded).
  static const std::vector<std::pair<const char*, Field>>& categories();
  [[nodiscard]] double sum_of_categories() const;
};

/// Throws AccountingError naming the first term whose efficiency is missing and
/// std::invalid_argument if `values` does not match the model.
LossLedger compute_energy_loss(const model::EnergySystem& system, const model::PlanningModel& model, std::span<const double> values);

/// t CO2 per year; the same coefficients as the emission-cap row.
double compute_emissions(const model::EnergySystem& system, const model::PlanningModel& model, std::span<const double> values);

/// Annual energy entering and leaving the system boundary, MWh/yr.
struct EnergyAudit {
  double fuel = 0.0;            ///< chemical energy burnt in turbines
  double renewable = 0.0;
  double import = 0.0;          ///< power from shore
  double load_shed = 0.0;       ///< unserved electricity, counted as supply
  double heat_load_shed = 0.0;  ///< unserved heat, counted as supply
  double useful = 0.0;          ///< process work and heat delivered after device losses
  double demand_margin = 0.0;   ///< (mu^D - 1) times platform demand

  [[nodiscard]] double inputs() const { return fuel + renewable + import + load_shed + heat_load_shed; }
  /// What the loss ledger total should equal.
  [[nodiscard]] double implied_loss() const { return inputs() - useful - demand_margin; }
};

EnergyAudit audit_energy(const model::EnergySystem& system, const model::PlanningModel& model, std::span<const double> values);

/// Accumulated capacity of one (technology, location) site or branch.
struct CapacityEntry {
  std::string cluster;     ///< location cluster, or the location id when it has none
  std::string technology;  ///< technology id, or "line:<branch id>"
  std::string location;
  double value = 0.0;      ///< MW, MWh or kg depending on technology
};

std::vector<CapacityEntry> installed_capacities(const model::EnergySystem& system, const model::PlanningModel& model,
                                                std::span<const double> values);

/// Everything reported about one solve. Accounting fields are meaningful only when
/// has_solution is true.
struct SolveReport {
  milp::SolveStatus status = milp::SolveStatus::Infeasible;
  bool has_solution = false;
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double max_residual = 0.0;
  double emissions_t = 0.0;
  LossLedger losses;
  EnergyAudit audit;
  std::vector<CapacityEntry> capacities;
  std::vector<double> values;
  /// Set when the system lacks an accounting efficiency; losses and audit stay zero.
  std::string accounting_error;
};

SolveReport analyze(const model::EnergySystem& system, const model::PlanningModel& model, const milp::MILPSolution& solution);

}  // namespace oeh::analysis
