#include "tiny_systems.hpp"

#include <stdexcept>

namespace oeh::testing {

using namespace model;

TimeStructure one_slice(int hours) {
  TimeStructure t;
  t.slices.push_back({"all", hours, 8760.0 / hours});
  return t;
}

Location demand_platform(const std::string& id, int periods, double demand, double turbine_cap, double eta_accounting) {
  Location loc;
  loc.id = id;
  loc.kind = LocationKind::Platform;
  loc.cluster = "C1";
  PlatformSpec ps;
  GasTurbineSpec gt;
  gt.id = "GT";
  gt.capacity = turbine_cap;
  gt.efficiency = 0.33;
  gt.fuel_cost = 10.0;
  ps.turbines.push_back(gt);
  auto& pr = ps.process;
  pr.pump_oil_cap = demand + 1.0;
  pr.pump_oil_coeff = 1e-6;
  pr.compressor_efficiency = eta_accounting;
  pr.separator_efficiency = eta_accounting;
  pr.pump_oil_efficiency = eta_accounting;
  pr.pump_water_injection_efficiency = eta_accounting;
  pr.pump_water_lift_efficiency = eta_accounting;
  const auto n = static_cast<std::size_t>(periods);
  ps.flows.oil.assign(n, demand * 1e6);
  ps.flows.gas_export.assign(n, 0.0);
  ps.flows.gas_injection.assign(n, 0.0);
  ps.flows.water_injection.assign(n, 0.0);
  ps.flows.water_lift.assign(n, 0.0);
  loc.platform = ps;
  return loc;
}

EnergySystem lone_platform(double demand, int hours) {
  EnergySystem sys;
  sys.name = "lone";
  sys.time = one_slice(hours);
  sys.locations.push_back(demand_platform("P", hours, demand, 2.0 * demand + 1.0));
  // A platform must reach a hub or onshore bus; this one has nothing to offer.
  Location hub;
  hub.id = "H";
  hub.kind = LocationKind::Hub;
  hub.hub = HubSpec{};
  sys.locations.push_back(hub);
  BranchSpec br;
  br.id = "H-P";
  br.from = "H";
  br.to = "P";
  br.length_km = 10.0;
  br.investable = false;
  br.max_cap = 0.0;
  sys.branches.push_back(br);
  return sys;
}

EnergySystem wind_fed_platform(double demand, double line_efficiency, double line_cap, double wind_mw, int hours) {
  EnergySystem sys;
  sys.name = "wind-fed";
  sys.time = one_slice(hours);
  auto plat = demand_platform("P", hours, demand, 2.0 * demand + 1.0);
  plat.platform->turbines[0].fuel_cost = 1e5;
  sys.locations.push_back(plat);
  Location hub;
  hub.id = "H";
  hub.kind = LocationKind::Hub;
  hub.hub = HubSpec{};
  sys.locations.push_back(hub);

  TechnologySpec wind;
  wind.id = "wind";
  wind.kind = TechnologyKind::Wind;
  wind.investable = false;
  TechnologySite site;
  site.location = "H";
  site.hist_cap = wind_mw;
  site.max_cap = wind_mw;
  site.availability.assign(static_cast<std::size_t>(hours), 1.0);
  wind.sites.push_back(site);
  sys.technologies.push_back(wind);

  BranchSpec br;
  br.id = "H-P";
  br.from = "H";
  br.to = "P";
  br.length_km = 10.0;
  br.investable = false;
  br.hist_cap = line_cap;
  br.max_cap = line_cap;
  br.efficiency = line_efficiency;
  sys.branches.push_back(br);
  return sys;
}

EnergySystem hydrogen_system() {
  EnergySystem sys;
  sys.name = "hydrogen";
  const int h = 6;
  sys.time.slices = {{"a", h, 8760.0 / (2 * h)}, {"b", h, 8760.0 / (2 * h)}};
  sys.time.kappa = 1.0;
  sys.reserve.sigma = 0.1;
  const int T = 2 * h;

  auto plat = demand_platform("P", T, 8.0, 20.0);
  auto& ps = *plat.platform;
  ps.turbines[0].fuel_cost = 400.0;
  ps.turbines[0].heat_recovery = 0.3;
  ps.process.separator_cap = 5.0;
  ps.process.separator_heat_coeff = 5e-7;
  ps.process.export_compressor_cap = 3.0;
  ps.process.head_density_coeff = 5e-6;
  ps.process.compression_ratio = 3.0;
  ps.flows.gas_export.assign(static_cast<std::size_t>(T), 2e5);
  ps.process.pump_water_lift_cap = 2.0;
  ps.process.pump_water_lift_coeff = 1e-6;
  ps.flows.water_lift.assign(static_cast<std::size_t>(T), 1e6);
  ps.flows.oil.assign(static_cast<std::size_t>(T), 6e6);
  ps.process.pump_oil_cap = 7.0;
  sys.locations.push_back(plat);

  Location hub;
  hub.id = "H";
  hub.kind = LocationKind::Hub;
  hub.hub = HubSpec{};
  sys.locations.push_back(hub);

  auto tech = [&](const std::string& id, TechnologyKind kind, double inv, double unit_max, int units, const std::string& at) {
    TechnologySpec t;
    t.id = id;
    t.kind = kind;
    t.unit_inv_cost = inv;
    t.unit_max = unit_max;
    TechnologySite s;
    s.location = at;
    s.max_units = units;
    s.max_cap = unit_max * units;
    t.sites.push_back(s);
    return t;
  };
  auto wind = tech("wind", TechnologyKind::Wind, 2e4, 10.0, 6, "H");
  const double profile[] = {0.9, 0.8, 0.1, 0.0, 0.5, 0.95, 0.2, 0.0, 0.0, 0.6, 0.9, 0.7};
  wind.sites[0].availability.assign(std::begin(profile), std::end(profile));
  sys.technologies.push_back(wind);
  sys.technologies.push_back(tech("electrolyser", TechnologyKind::Electrolyser, 1e4, 5.0, 4, "H"));
  auto fc = tech("fuel_cell", TechnologyKind::FuelCell, 1e4, 5.0, 4, "H");
  fc.efficiency = 0.5;
  fc.ramp = 0.6;
  sys.technologies.push_back(fc);
  sys.technologies.push_back(tech("h2_store", TechnologyKind::HydrogenStorage, 1.0, 500.0, 4, "H"));
  auto bat = tech("battery", TechnologyKind::Battery, 5e3, 5.0, 2, "P");
  bat.efficiency = 0.9;
  bat.power_ratio = 0.5;
  sys.technologies.push_back(bat);
  auto boiler = tech("boiler", TechnologyKind::Boiler, 1e3, 2.0, 3, "P");
  boiler.efficiency = 0.95;
  sys.technologies.push_back(boiler);

  BranchSpec br;
  br.id = "H-P";
  br.from = "H";
  br.to = "P";
  br.length_km = 20.0;
  br.unit_inv_cost = 10.0;
  br.unit_max = 20.0;
  br.max_cables = 2;
  br.max_cap = 40.0;
  br.efficiency = 0.97;
  sys.branches.push_back(br);
  return sys;
}

EnergySystem shore_fed_platform(double demand, double price, int hours) {
  EnergySystem sys;
  sys.name = "shore-fed";
  sys.time = one_slice(hours);
  sys.locations.push_back(demand_platform("P", hours, demand, 2.0 * demand + 1.0));
  Location shore;
  shore.id = "O";
  shore.kind = LocationKind::Onshore;
  OnshoreSpec os;
  os.price.assign(static_cast<std::size_t>(hours), price);
  os.pfs_cap_limit = 1000.0;
  shore.onshore = os;
  sys.locations.push_back(shore);

  TechnologySpec pfs;
  pfs.id = "pfs";
  pfs.kind = TechnologyKind::PowerFromShore;
  pfs.unit_inv_cost = 1e3;
  pfs.unit_max = 1.0;
  TechnologySite site;
  site.location = "O";
  site.max_units = 100;
  site.max_cap = 100.0;
  pfs.sites.push_back(site);
  sys.technologies.push_back(pfs);

  BranchSpec br;
  br.id = "O-P";
  br.from = "O";
  br.to = "P";
  br.length_km = 50.0;
  br.investable = false;
  br.hist_cap = 100.0;
  br.max_cap = 100.0;
  sys.branches.push_back(br);
  return sys;
}

Solved build_and_solve(const EnergySystem& system, const milp::SolverConfig& config) {
  Solved s{build_model(system), {}};
  s.solution = milp::solve_milp(s.model.instance, config);
  return s;
}

double value_of(const Solved& s, const std::string& name) {
  const auto id = s.model.instance.find_variable(name);
  if (!id) throw std::invalid_argument("no variable named " + name);
  return s.solution.values.at(static_cast<std::size_t>(*id));
}

}  // namespace oeh::testing
