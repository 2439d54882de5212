#pragma once

// Operational model: electricity, production and hydrogen subsystems for every period of
// every slice, the operational cost g and the assembled planning model f + kappa * g.

#include <optional>
#include <vector>

#include "oeh/milp/instance.hpp"
#include "oeh/model/registry.hpp"

namespace oeh::model {

using VarSeries = std::vector<milp::VarId>;  ///< one id per period; empty when absent

struct TurbineVars {
  std::size_t turbine = 0;  ///< index into PlatformSpec::turbines
  VarSeries power;          ///< p^G
  VarSeries reserve;        ///< p^ResG
};

/// Operation of one capacity handle with a single power series (renewables, boilers,
/// electrolysers, fuel cells, power-from-shore).
struct UnitVars {
  std::size_t capacity = 0;  ///< index into Registry::capacities()
  VarSeries power;
};

struct BatteryVars {
  std::size_t capacity = 0;
  VarSeries charge;     ///< p^SE+
  VarSeries discharge;  ///< p^SE-
  VarSeries reserve;    ///< p^ResSE
  VarSeries level;      ///< q^SE
};

struct HydrogenStoreVars {
  std::size_t capacity = 0;
  VarSeries level;      ///< v^SHy
  VarSeries charge;     ///< v^SHy+
  VarSeries discharge;  ///< v^SHy-
};

struct PlatformVars {
  std::size_t location = 0;
  std::vector<TurbineVars> turbines;
  std::vector<BatteryVars> batteries;
  std::vector<UnitVars> boilers;
  VarSeries demand;     ///< p^D
  VarSeries load_shed;  ///< p^LShed (empty when disabled)
  VarSeries gen_shed;   ///< p^GShed
  VarSeries heat_shed;  ///< p^HLShed (empty when disabled)
  VarSeries heat_dump;  ///< p^HGShed
  VarSeries separator;  ///< p^HSEP
  VarSeries compressor_export;
  VarSeries compressor_injection;
  VarSeries pump_oil;
  VarSeries pump_water_injection;
  VarSeries pump_water_lift;
};

struct HubVars {
  std::size_t location = 0;
  std::vector<UnitVars> renewables;
  std::vector<UnitVars> electrolysers;
  std::vector<UnitVars> fuel_cells;
  std::vector<HydrogenStoreVars> stores;
  VarSeries gen_shed;
};

struct OnshoreVars {
  std::size_t location = 0;
  std::vector<UnitVars> imports;  ///< p^ZO per power-from-shore site
  VarSeries gen_shed;
};

/// Directional flows of a branch; forward runs from -> to.
struct LineVars {
  std::size_t branch = 0;
  VarSeries forward;
  VarSeries backward;
};

struct ModelIndex {
  std::vector<PlatformVars> platforms;
  std::vector<HubVars> hubs;
  std::vector<OnshoreVars> onshore;
  std::vector<LineVars> lines;
  std::vector<CapacityHandle> capacities;
  std::vector<LineHandle> line_capacities;
  std::optional<std::size_t> co2_row;
};

/// Turbines, renewables, batteries, onshore import, line flows, nodal balances, spinning
/// reserve and the CO2 cap row. Throws BuildError for an isolated hub.
void add_electricity_system(Registry& registry, ModelIndex& index);

/// Boilers, separators, compressors, pumps, the heat balance and the platform demand
/// composition. Requires add_electricity_system first (it owns the demand series).
void add_production_system(Registry& registry, ModelIndex& index);

/// Electrolysers, fuel cells, hydrogen stores and the hydrogen balance per hub.
void add_hydrogen_system(Registry& registry, ModelIndex& index);

/// Adds kappa * g(x, c) to the objective.
void build_operational_objective(Registry& registry, const ModelIndex& index);

/// Objective coefficient on p^G of one turbine in a period of weight W and duration H.
double turbine_cost_coefficient(const GasTurbineSpec& g, double co2_tax, double weight, double hours);

struct PlanningModel {
  milp::MILPInstance instance;
  ModelIndex index;
};

/// Validates the system and assembles investment block, subsystems, capacity links and
/// objective. Throws BuildError with every diagnostic when validation fails.
PlanningModel build_model(const EnergySystem& system);

}  // namespace oeh::model
