#pragma once

// Domain description of an offshore energy system: time structure, locations with their
// kind-specific payloads, investable technologies, transmission branches and policy.

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oeh::model {

struct TimeSlice {
  std::string id;
  int hours = 0;
  double weight = 0.0;  ///< W_s: how many times the slice repeats in a year
};

struct TimeStructure {
  std::vector<TimeSlice> slices;
  double hour_duration = 1.0;  ///< H_t in hours
  double kappa = 1.0;          ///< operational years represented by one investment period

  [[nodiscard]] int num_periods() const;
  [[nodiscard]] int slice_start(std::size_t s) const;
  /// Slice index owning global period t.
  [[nodiscard]] std::size_t slice_of(int t) const;
  /// Period before t within its slice, wrapping to the slice's last period.
  [[nodiscard]] int previous_in_slice(int t) const;
  [[nodiscard]] double weight_of(int t) const { return slices[slice_of(t)].weight; }
};

enum class LocationKind { Platform, Hub, Onshore };

struct GasTurbineSpec {
  std::string id;
  double capacity = 0.0;        ///< P^accG, MW
  double efficiency = 0.33;     ///< η^G
  double heat_recovery = 0.0;   ///< η^Gh
  double ramp = 1.0;            ///< G^GR, share of capacity per hour
  double fuel_emission = 0.2;   ///< E^Fuel, t CO2 per MWh fuel
  double fuel_cost = 0.0;       ///< C^Fuel per MWh fuel
  double var_cost = 0.0;        ///< C^G per MWh electricity
};

/// Fixed-capacity production equipment of one platform.
struct ProcessSpec {
  double separator_cap = 0.0;          ///< P^accSEP, MW heat
  double separator_heat_coeff = 0.0;   ///< ρ^SEP, MW per kg of oil
  double export_compressor_cap = 0.0;  ///< P^accCExp, MW
  double injection_compressor_cap = 0.0;
  double compression_ratio = 2.0;      ///< γ_c
  double polytropic_exponent = 1.4;    ///< α
  double head_density_coeff = 0.0;     ///< 1/(η^C·H·ρ), MW per kg
  double pump_oil_cap = 0.0;
  double pump_oil_coeff = 0.0;         ///< κ^PO, MW per kg
  double pump_water_injection_cap = 0.0;
  double pump_water_injection_coeff = 0.0;
  double pump_water_lift_cap = 0.0;
  double pump_water_lift_coeff = 0.0;
  // Accounting-only efficiencies (loss ledger); absent means not supplied.
  std::optional<double> compressor_efficiency;  ///< η^C
  std::optional<double> separator_efficiency;   ///< η^SEP
  std::optional<double> pump_oil_efficiency;    ///< η^PO
  std::optional<double> pump_water_injection_efficiency;
  std::optional<double> pump_water_lift_efficiency;

  /// (γ_c)^((α-1)/α) - 1
  [[nodiscard]] double compression_bracket() const;
};

/// Per-period flow volumes of a platform, kg per period.
struct FlowProfiles {
  std::vector<double> gas_export;        ///< V^NGE
  std::vector<double> gas_injection;     ///< V^NGI
  std::vector<double> oil;               ///< V^OD
  std::vector<double> water_injection;   ///< V^WI
  std::vector<double> water_lift;        ///< V^WL
  std::vector<double> produced_water;    ///< V^WB (carried, not used by the model)
};

struct PlatformSpec {
  std::vector<GasTurbineSpec> turbines;
  ProcessSpec process;
  FlowProfiles flows;
};

struct HubSpec {
  double electrolysis_storage = 0.055;    ///< η^ES, MWh per kg sent to storage
  double electrolysis_fuel_cell = 0.05;   ///< η^EF, MWh per kg sent to fuel cells
  double energy_content = 0.0333;         ///< θ^Hy, MWh per kg
};

struct OnshoreSpec {
  std::vector<double> price;     ///< C^ZO per period, per MWh
  double pfs_cap_limit = 0.0;    ///< upper bound on installed power-from-shore capacity, MW
};

struct Location {
  std::string id;
  LocationKind kind = LocationKind::Platform;
  std::string cluster;
  double lat = 0.0;
  double lon = 0.0;
  std::optional<PlatformSpec> platform;
  std::optional<HubSpec> hub;
  std::optional<OnshoreSpec> onshore;
};

enum class TechnologyKind { Wind, Solar, Electrolyser, FuelCell, HydrogenStorage, Battery, Boiler, PowerFromShore };

struct TechnologySite {
  std::string location;
  int max_units = 0;        ///< N̄
  double hist_cap = 0.0;    ///< X^PHist
  double max_cap = 0.0;     ///< X^PMax
  std::vector<double> availability;  ///< R^R per period, renewables only
};

struct TechnologySpec {
  std::string id;
  TechnologyKind kind = TechnologyKind::Wind;
  double unit_inv_cost = 0.0;   ///< C^PInv per MW (MWh for batteries, kg for hydrogen stores)
  double fixed_om = 0.0;        ///< C^PFix per unit of capacity and year
  double fixed_inv_cost = 0.0;  ///< C^PFInv per installed module
  double unit_max = 0.0;        ///< M^P, capacity of one module
  bool investable = true;
  /// η^SE (battery), η^F (fuel cell) or η^EB (boiler).
  std::optional<double> efficiency;
  double power_ratio = 1.0;  ///< H^SE, MW per MWh (battery)
  double ramp = 1.0;         ///< F^FR, share of capacity per hour (fuel cell)
  std::vector<TechnologySite> sites;
};

enum class BranchKind { HVAC, HVDC };

struct BranchSpec {
  std::string id;
  std::string from;
  std::string to;
  BranchKind kind = BranchKind::HVAC;
  double length_km = 0.0;
  double unit_inv_cost = 0.0;   ///< C^LInv per MW and km
  double per_km_fixed = 0.0;    ///< C^LLInv per km per cable
  double fixed_inv = 0.0;       ///< C^LFInv per cable
  double fixed_om = 0.0;        ///< C^LFix per MW, km and year
  double hist_cap = 0.0;
  double max_cap = 0.0;
  double unit_max = 0.0;        ///< M^L
  int max_cables = 0;           ///< N̄_l
  double efficiency = 1.0;      ///< η^L
  bool investable = true;
};

struct ReserveSpec {
  double sigma = 0.0;                    ///< σ^Res
  std::optional<double> load_shed_cost;  ///< C^LShed; absent disables load shedding
  std::optional<double> heat_shed_cost;  ///< C^HLShed; absent disables heat load shedding
  double gen_shed_cost = 0.0;            ///< C^GShed
  double demand_factor = 1.0;            ///< μ^D
};

struct PolicySpec {
  double co2_tax = 0.0;                                        ///< C^CO2 per tonne
  double co2_cap = std::numeric_limits<double>::infinity();    ///< t per year
};

struct EnergySystem {
  std::string name = "system";
  TimeStructure time;
  std::vector<Location> locations;
  std::vector<TechnologySpec> technologies;
  std::vector<BranchSpec> branches;
  ReserveSpec reserve;
  PolicySpec policy;

  [[nodiscard]] const Location* find_location(std::string_view id) const;
  [[nodiscard]] const TechnologySpec* find_technology(std::string_view id) const;
  /// Technologies with a site at `location`, in declaration order, paired with the site.
  [[nodiscard]] std::vector<std::pair<const TechnologySpec*, const TechnologySite*>> sited_at(std::string_view location) const;
};

struct Diagnostic {
  std::string code;     ///< short machine-readable tag, e.g. "profile-length"
  std::string subject;  ///< offending entity id
  std::string message;
};

/// Checks type invariants, references, profile lengths and connectivity (every platform
/// reaches a hub or onshore bus). Returns every problem found; empty means valid.
std::vector<Diagnostic> validate_system(const EnergySystem& system);

std::string_view to_string(LocationKind kind);
std::string_view to_string(TechnologyKind kind);
std::string_view to_string(BranchKind kind);
std::optional<LocationKind> parse_location_kind(std::string_view s);
std::optional<TechnologyKind> parse_technology_kind(std::string_view s);
std::optional<BranchKind> parse_branch_kind(std::string_view s);

/// Location kind allowed to host a technology kind.
LocationKind host_kind(TechnologyKind kind);
bool is_renewable(TechnologyKind kind);

}  // namespace oeh::model
