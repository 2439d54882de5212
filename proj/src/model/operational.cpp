#include "oeh/model/operational.hpp"

#include <cmath>

namespace oeh::model {

using milp::Sense;
using milp::Term;
using milp::VarId;

namespace {

std::string tagged(const char* prefix, const std::string& who, int t) {
  return std::string(prefix) + "[" + who + "," + std::to_string(t) + "]";
}

VarSeries series(milp::InstanceBuilder& b, const char* prefix, const std::string& who, int periods,
                 double upper = milp::kInfinity) {
  VarSeries out(static_cast<std::size_t>(periods));
  for (int t = 0; t < periods; ++t) out[static_cast<std::size_t>(t)] = b.add_variable(tagged(prefix, who, t), 0.0, upper);
  return out;
}

std::vector<UnitVars> unit_series(Registry& reg, std::size_t loc, TechnologyKind kind, const char* prefix, int periods) {
  std::vector<UnitVars> out;
  for (std::size_t k : reg.capacities_at(loc, kind)) {
    const auto& tech = reg.system().technologies[reg.capacities()[k].technology];
    out.push_back({k, series(reg.builder(), prefix, tech.id + "." + reg.system().locations[loc].id, periods)});
  }
  return out;
}

/// Creates every operational variable once, in a fixed order, so the subsystems can be
/// added in any order.
void ensure_variables(Registry& reg, ModelIndex& index) {
  if (!index.platforms.empty() || !index.hubs.empty() || !index.onshore.empty() || !index.lines.empty()) return;
  const EnergySystem& sys = reg.system();
  const int T = sys.time.num_periods();
  auto& b = reg.builder();
  index.capacities = reg.capacities();
  index.line_capacities = reg.lines();

  for (std::size_t z = 0; z < sys.locations.size(); ++z) {
    const Location& loc = sys.locations[z];
    const std::string& id = loc.id;
    if (loc.kind == LocationKind::Platform) {
      const auto& ps = *loc.platform;
      PlatformVars pv;
      pv.location = z;
      for (std::size_t g = 0; g < ps.turbines.size(); ++g) {
        const auto& gt = ps.turbines[g];
        const std::string who = id + "." + gt.id;
        pv.turbines.push_back({g, series(b, "pG", who, T, gt.capacity), series(b, "pResG", who, T, gt.capacity)});
      }
      for (std::size_t k : reg.capacities_at(z, TechnologyKind::Battery)) {
        const std::string who = sys.technologies[reg.capacities()[k].technology].id + "." + id;
        BatteryVars bv;
        bv.capacity = k;
        bv.charge = series(b, "pSEin", who, T);
        bv.discharge = series(b, "pSEout", who, T);
        bv.reserve = series(b, "pResSE", who, T);
        bv.level = series(b, "qSE", who, T);
        pv.batteries.push_back(std::move(bv));
      }
      pv.boilers = unit_series(reg, z, TechnologyKind::Boiler, "pEB", T);
      pv.demand = series(b, "pD", id, T);
      if (sys.reserve.load_shed_cost) pv.load_shed = series(b, "pLShed", id, T);
      pv.gen_shed = series(b, "pGShed", id, T);
      if (sys.reserve.heat_shed_cost) pv.heat_shed = series(b, "pHLShed", id, T);
      pv.heat_dump = series(b, "pHGShed", id, T);
      const auto& pr = ps.process;
      pv.separator = series(b, "pHSEP", id, T, pr.separator_cap);
      pv.compressor_export = series(b, "pCExp", id, T, pr.export_compressor_cap);
      pv.compressor_injection = series(b, "pCInj", id, T, pr.injection_compressor_cap);
      pv.pump_oil = series(b, "pPO", id, T, pr.pump_oil_cap);
      pv.pump_water_injection = series(b, "pPWI", id, T, pr.pump_water_injection_cap);
      pv.pump_water_lift = series(b, "pPWL", id, T, pr.pump_water_lift_cap);
      index.platforms.push_back(std::move(pv));
    } else if (loc.kind == LocationKind::Hub) {
      HubVars hv;
      hv.location = z;
      hv.renewables = unit_series(reg, z, TechnologyKind::Wind, "pR", T);
      for (auto& u : unit_series(reg, z, TechnologyKind::Solar, "pR", T)) hv.renewables.push_back(std::move(u));
      hv.electrolysers = unit_series(reg, z, TechnologyKind::Electrolyser, "pE", T);
      hv.fuel_cells = unit_series(reg, z, TechnologyKind::FuelCell, "pF", T);
      for (std::size_t k : reg.capacities_at(z, TechnologyKind::HydrogenStorage)) {
        const std::string who = sys.technologies[reg.capacities()[k].technology].id + "." + id;
        HydrogenStoreVars sv;
        sv.capacity = k;
        sv.level = series(b, "vSHy", who, T);
        sv.charge = series(b, "vSHyIn", who, T);
        sv.discharge = series(b, "vSHyOut", who, T);
        hv.stores.push_back(std::move(sv));
      }
      hv.gen_shed = series(b, "pGShed", id, T);
      index.hubs.push_back(std::move(hv));
    } else {
      OnshoreVars ov;
      ov.location = z;
      ov.imports = unit_series(reg, z, TechnologyKind::PowerFromShore, "pZO", T);
      ov.gen_shed = series(b, "pGShed", id, T);
      index.onshore.push_back(std::move(ov));
    }
  }
  for (std::size_t l = 0; l < sys.branches.size(); ++l) {
    const std::string& id = sys.branches[l].id;
    index.lines.push_back({l, series(b, "pLfwd", id, T), series(b, "pLbwd", id, T)});
  }
}

VarId at(const VarSeries& s, int t) { return s[static_cast<std::size_t>(t)]; }

/// Net electricity injected into `loc` by all lines in period t, appended as terms.
void line_terms(const Registry& reg, const ModelIndex& index, std::size_t loc, int t, std::vector<Term>& terms) {
  const auto& sys = reg.system();
  const std::string& id = sys.locations[loc].id;
  for (const auto& lv : index.lines) {
    const auto& br = sys.branches[lv.branch];
    if (br.to == id) {
      terms.push_back({at(lv.forward, t), br.efficiency});
      terms.push_back({at(lv.backward, t), -1.0});
    }
    if (br.from == id) {
      terms.push_back({at(lv.forward, t), -1.0});
      terms.push_back({at(lv.backward, t), br.efficiency});
    }
  }
}

}  // namespace

double turbine_cost_coefficient(const GasTurbineSpec& g, double co2_tax, double weight, double hours) {
  return weight * hours * (g.var_cost + (g.fuel_cost + co2_tax * g.fuel_emission) / g.efficiency);
}

void add_electricity_system(Registry& reg, ModelIndex& index) {
  ensure_variables(reg, index);
  const EnergySystem& sys = reg.system();
  const auto& time = sys.time;
  const int T = time.num_periods();
  const double H = time.hour_duration;
  auto& b = reg.builder();

  for (const auto& hv : index.hubs) {
    const std::string& id = sys.locations[hv.location].id;
    bool has_units = false;
    for (const auto& u : hv.renewables) {
      const auto& h = reg.capacities()[u.capacity];
      const auto& site = sys.technologies[h.technology].sites[h.site];
      has_units = has_units || site.max_units > 0 || site.hist_cap > 0.0;
    }
    bool has_branch = false;
    for (const auto& br : sys.branches) has_branch = has_branch || br.from == id || br.to == id;
    if (!has_units && !has_branch) throw BuildError("isolated hub '" + id + "': no renewable units and no branch");
  }

  std::vector<Term> co2;
  for (const auto& pv : index.platforms) {
    const Location& loc = sys.locations[pv.location];
    const auto& ps = *loc.platform;
    for (const auto& tv : pv.turbines) {
      const auto& gt = ps.turbines[tv.turbine];
      const std::string who = loc.id + "." + gt.id;
      for (int t = 0; t < T; ++t) {
        b.add_constraint(tagged("gtCap", who, t), {{at(tv.power, t), 1.0}, {at(tv.reserve, t), 1.0}}, Sense::LessEqual, gt.capacity);
        if (gt.ramp < 1.0) {
          const int p = time.previous_in_slice(t);
          if (p == t) continue;
          std::vector<Term> d{{at(tv.power, t), 1.0}, {at(tv.reserve, t), 1.0}, {at(tv.power, p), -1.0}, {at(tv.reserve, p), -1.0}};
          b.add_constraint(tagged("gtRampUp", who, t), d, Sense::LessEqual, gt.capacity * gt.ramp);
          b.add_constraint(tagged("gtRampDn", who, t), d, Sense::GreaterEqual, -gt.capacity * gt.ramp);
        }
        co2.push_back({at(tv.power, t), time.weight_of(t) * gt.fuel_emission * H / gt.efficiency});
      }
    }
    for (const auto& bv : pv.batteries) {
      const auto& h = reg.capacities()[bv.capacity];
      const auto& tech = sys.technologies[h.technology];
      const double eta = tech.efficiency.value_or(1.0);
      const std::string who = tech.id + "." + loc.id;
      for (int t = 0; t < T; ++t) {
        const int p = time.previous_in_slice(t);
        b.add_constraint(tagged("seLevel", who, t),
                         {{at(bv.level, t), 1.0}, {at(bv.level, p), -1.0}, {at(bv.charge, p), -H * eta}, {at(bv.discharge, p), H}},
                         Sense::Equal, 0.0);
        b.add_constraint(tagged("seOut", who, t), {{at(bv.reserve, t), H}, {at(bv.discharge, t), H}, {at(bv.level, t), -1.0}},
                         Sense::LessEqual, 0.0);
      }
      CapacityLink charge{"seChargeCap[" + who + "]", h.accumulated, tech.power_ratio, {}};
      CapacityLink out{"seDischargeCap[" + who + "]", h.accumulated, tech.power_ratio, {}};
      CapacityLink level{"seEnergyCap[" + who + "]", h.accumulated, 1.0, {}};
      for (int t = 0; t < T; ++t) {
        charge.usage.push_back({at(bv.charge, t)});
        out.usage.push_back({at(bv.discharge, t), at(bv.reserve, t)});
        level.usage.push_back({at(bv.level, t)});
      }
      reg.link(std::move(charge));
      reg.link(std::move(out));
      reg.link(std::move(level));
    }
    for (int t = 0; t < T; ++t) {
      std::vector<Term> kcl;
      for (const auto& tv : pv.turbines) kcl.push_back({at(tv.power, t), 1.0});
      line_terms(reg, index, pv.location, t, kcl);
      for (const auto& bv : pv.batteries) {
        kcl.push_back({at(bv.discharge, t), 1.0});
        kcl.push_back({at(bv.charge, t), -1.0});
      }
      if (!pv.load_shed.empty()) kcl.push_back({at(pv.load_shed, t), 1.0});
      kcl.push_back({at(pv.demand, t), -sys.reserve.demand_factor});
      kcl.push_back({at(pv.gen_shed, t), -1.0});
      b.add_constraint(tagged("kclPlatform", loc.id, t), std::move(kcl), Sense::Equal, 0.0);

      if (sys.reserve.sigma > 0.0) {
        std::vector<Term> res{{at(pv.demand, t), sys.reserve.sigma}};
        for (const auto& tv : pv.turbines) res.push_back({at(tv.reserve, t), -1.0});
        for (const auto& bv : pv.batteries) res.push_back({at(bv.reserve, t), -1.0});
        b.add_constraint(tagged("reserve", loc.id, t), std::move(res), Sense::LessEqual, 0.0);
      }
    }
  }

  for (const auto& hv : index.hubs) {
    const std::string& id = sys.locations[hv.location].id;
    for (const auto& u : hv.renewables) {
      const auto& h = reg.capacities()[u.capacity];
      const auto& tech = sys.technologies[h.technology];
      const auto& site = tech.sites[h.site];
      for (int t = 0; t < T; ++t) {
        b.add_constraint(tagged("renewable", tech.id + "." + id, t),
                         {{at(u.power, t), 1.0}, {h.accumulated, -site.availability[static_cast<std::size_t>(t)]}}, Sense::Equal, 0.0);
      }
    }
    for (int t = 0; t < T; ++t) {
      std::vector<Term> kcl;
      for (const auto& u : hv.renewables) kcl.push_back({at(u.power, t), 1.0});
      line_terms(reg, index, hv.location, t, kcl);
      for (const auto& u : hv.fuel_cells) kcl.push_back({at(u.power, t), 1.0});
      for (const auto& u : hv.electrolysers) kcl.push_back({at(u.power, t), -1.0});
      kcl.push_back({at(hv.gen_shed, t), -1.0});
      b.add_constraint(tagged("kclHub", id, t), std::move(kcl), Sense::Equal, 0.0);
    }
  }

  for (const auto& ov : index.onshore) {
    const std::string& id = sys.locations[ov.location].id;
    for (const auto& u : ov.imports) {
      CapacityLink link{"onshoreCap[" + sys.technologies[reg.capacities()[u.capacity].technology].id + "." + id + "]",
                        reg.capacities()[u.capacity].accumulated, 1.0, {}};
      for (int t = 0; t < T; ++t) link.usage.push_back({at(u.power, t)});
      reg.link(std::move(link));
    }
    for (int t = 0; t < T; ++t) {
      std::vector<Term> kcl;
      for (const auto& u : ov.imports) kcl.push_back({at(u.power, t), 1.0});
      line_terms(reg, index, ov.location, t, kcl);
      kcl.push_back({at(ov.gen_shed, t), -1.0});
      b.add_constraint(tagged("kclOnshore", id, t), std::move(kcl), Sense::Equal, 0.0);
    }
  }

  for (const auto& lv : index.lines) {
    const auto& br = sys.branches[lv.branch];
    const VarId cap = reg.lines()[lv.branch].accumulated;
    CapacityLink fwd{"lineCapFwd[" + br.id + "]", cap, 1.0, {}};
    CapacityLink bwd{"lineCapBwd[" + br.id + "]", cap, 1.0, {}};
    for (int t = 0; t < T; ++t) {
      fwd.usage.push_back({at(lv.forward, t)});
      bwd.usage.push_back({at(lv.backward, t)});
    }
    reg.link(std::move(fwd));
    reg.link(std::move(bwd));
  }

  if (std::isfinite(sys.policy.co2_cap)) {
    index.co2_row = b.num_constraints();
    b.add_constraint("co2Cap", std::move(co2), Sense::LessEqual, sys.policy.co2_cap);
  }
}

void add_production_system(Registry& reg, ModelIndex& index) {
  ensure_variables(reg, index);
  const EnergySystem& sys = reg.system();
  const int T = sys.time.num_periods();
  auto& b = reg.builder();

  for (const auto& pv : index.platforms) {
    const Location& loc = sys.locations[pv.location];
    const auto& ps = *loc.platform;
    const auto& pr = ps.process;
    const auto& f = ps.flows;
    auto need = [&](const std::vector<double>& v, const char* name) -> const std::vector<double>& {
      if (static_cast<int>(v.size()) != T) {
        throw BuildError("platform '" + loc.id + "' is missing flow series '" + name + "' (" + std::to_string(v.size()) + " of " +
                         std::to_string(T) + " periods)");
      }
      return v;
    };
    const auto& oil = need(f.oil, "oil");
    const auto& gas_export = need(f.gas_export, "gas_export");
    const auto& gas_injection = need(f.gas_injection, "gas_injection");
    const auto& water_injection = need(f.water_injection, "water_injection");
    const auto& water_lift = need(f.water_lift, "water_lift");
    const double comp = pr.head_density_coeff * pr.compression_bracket();

    for (const auto& u : pv.boilers) {
      const auto& h = reg.capacities()[u.capacity];
      CapacityLink link{"boilerCap[" + sys.technologies[h.technology].id + "." + loc.id + "]", h.accumulated, 1.0, {}};
      for (int t = 0; t < T; ++t) link.usage.push_back({at(u.power, t)});
      reg.link(std::move(link));
    }
    for (int t = 0; t < T; ++t) {
      const auto k = static_cast<std::size_t>(t);
      std::vector<Term> heat;
      for (const auto& tv : pv.turbines) heat.push_back({at(tv.power, t), ps.turbines[tv.turbine].heat_recovery});
      for (const auto& u : pv.boilers) {
        heat.push_back({at(u.power, t), sys.technologies[reg.capacities()[u.capacity].technology].efficiency.value_or(1.0)});
      }
      if (!pv.heat_shed.empty()) heat.push_back({at(pv.heat_shed, t), 1.0});
      heat.push_back({at(pv.separator, t), -1.0});
      heat.push_back({at(pv.heat_dump, t), -1.0});
      b.add_constraint(tagged("heatBalance", loc.id, t), std::move(heat), Sense::Equal, 0.0);

      b.add_constraint(tagged("separatorHeat", loc.id, t), {{at(pv.separator, t), 1.0}}, Sense::Equal, pr.separator_heat_coeff * oil[k]);
      b.add_constraint(tagged("compInj", loc.id, t), {{at(pv.compressor_injection, t), 1.0}}, Sense::Equal, gas_injection[k] * comp);
      b.add_constraint(tagged("compExp", loc.id, t), {{at(pv.compressor_export, t), 1.0}}, Sense::Equal, gas_export[k] * comp);
      b.add_constraint(tagged("pumpOil", loc.id, t), {{at(pv.pump_oil, t), 1.0}}, Sense::Equal, pr.pump_oil_coeff * oil[k]);
      b.add_constraint(tagged("pumpWI", loc.id, t), {{at(pv.pump_water_injection, t), 1.0}}, Sense::Equal,
                       pr.pump_water_injection_coeff * water_injection[k]);
      b.add_constraint(tagged("pumpWL", loc.id, t), {{at(pv.pump_water_lift, t), 1.0}}, Sense::Equal,
                       pr.pump_water_lift_coeff * water_lift[k]);

      std::vector<Term> dem{{at(pv.demand, t), 1.0},
                            {at(pv.compressor_export, t), -1.0},
                            {at(pv.compressor_injection, t), -1.0},
                            {at(pv.pump_oil, t), -1.0},
                            {at(pv.pump_water_injection, t), -1.0},
                            {at(pv.pump_water_lift, t), -1.0}};
      for (const auto& u : pv.boilers) dem.push_back({at(u.power, t), -1.0});
      b.add_constraint(tagged("powerDemand", loc.id, t), std::move(dem), Sense::Equal, 0.0);
    }
  }
}

void add_hydrogen_system(Registry& reg, ModelIndex& index) {
  ensure_variables(reg, index);
  const EnergySystem& sys = reg.system();
  const auto& time = sys.time;
  const int T = time.num_periods();
  const double H = time.hour_duration;
  auto& b = reg.builder();

  for (const auto& hv : index.hubs) {
    const Location& loc = sys.locations[hv.location];
    const auto& hub = *loc.hub;
    auto simple_link = [&](const UnitVars& u, const char* prefix) {
      const auto& h = reg.capacities()[u.capacity];
      CapacityLink link{std::string(prefix) + "[" + sys.technologies[h.technology].id + "." + loc.id + "]", h.accumulated, 1.0, {}};
      for (int t = 0; t < T; ++t) link.usage.push_back({at(u.power, t)});
      reg.link(std::move(link));
    };
    for (const auto& u : hv.electrolysers) simple_link(u, "electrolyserCap");
    for (const auto& u : hv.fuel_cells) {
      simple_link(u, "fuelCellCap");
      const auto& h = reg.capacities()[u.capacity];
      const auto& tech = sys.technologies[h.technology];
      if (tech.ramp >= 1.0) continue;
      const std::string who = tech.id + "." + loc.id;
      for (int t = 0; t < T; ++t) {
        const int p = time.previous_in_slice(t);
        if (p == t) continue;
        b.add_constraint(tagged("fcRampUp", who, t), {{at(u.power, t), 1.0}, {at(u.power, p), -1.0}, {h.accumulated, -tech.ramp}},
                         Sense::LessEqual, 0.0);
        b.add_constraint(tagged("fcRampDn", who, t), {{at(u.power, p), 1.0}, {at(u.power, t), -1.0}, {h.accumulated, -tech.ramp}},
                         Sense::LessEqual, 0.0);
      }
    }
    for (const auto& sv : hv.stores) {
      const auto& h = reg.capacities()[sv.capacity];
      const std::string who = sys.technologies[h.technology].id + "." + loc.id;
      CapacityLink link{"h2Cap[" + who + "]", h.accumulated, 1.0, {}};
      for (int t = 0; t < T; ++t) {
        const int p = time.previous_in_slice(t);
        b.add_constraint(tagged("h2Level", who, t),
                         {{at(sv.level, t), 1.0}, {at(sv.level, p), -1.0}, {at(sv.charge, p), -1.0}, {at(sv.discharge, p), 1.0}},
                         Sense::Equal, 0.0);
        link.usage.push_back({at(sv.level, t)});
      }
      reg.link(std::move(link));
    }
    for (int t = 0; t < T; ++t) {
      std::vector<Term> bal;
      for (const auto& u : hv.fuel_cells) {
        const double eta_f = sys.technologies[reg.capacities()[u.capacity].technology].efficiency.value_or(1.0);
        bal.push_back({at(u.power, t), hub.electrolysis_fuel_cell * H / (eta_f * hub.energy_content)});
      }
      for (const auto& sv : hv.stores) {
        bal.push_back({at(sv.discharge, t), -hub.electrolysis_fuel_cell});
        bal.push_back({at(sv.charge, t), hub.electrolysis_storage});
      }
      for (const auto& u : hv.electrolysers) bal.push_back({at(u.power, t), -H});
      b.add_constraint(tagged("h2Balance", loc.id, t), std::move(bal), Sense::Equal, 0.0);
    }
  }
}

void build_operational_objective(Registry& reg, const ModelIndex& index) {
  const EnergySystem& sys = reg.system();
  const auto& time = sys.time;
  const int T = time.num_periods();
  const double H = time.hour_duration;
  const double kappa = time.kappa;
  auto& b = reg.builder();
  const auto& res = sys.reserve;

  for (int t = 0; t < T; ++t) {
    const double wh = kappa * time.weight_of(t) * H;
    for (const auto& pv : index.platforms) {
      const auto& ps = *sys.locations[pv.location].platform;
      for (const auto& tv : pv.turbines) {
        b.add_objective(at(tv.power, t), kappa * turbine_cost_coefficient(ps.turbines[tv.turbine], sys.policy.co2_tax, time.weight_of(t), H));
      }
      if (!pv.load_shed.empty()) b.add_objective(at(pv.load_shed, t), wh * *res.load_shed_cost);
      if (!pv.heat_shed.empty()) b.add_objective(at(pv.heat_shed, t), wh * *res.heat_shed_cost);
      b.add_objective(at(pv.gen_shed, t), wh * res.gen_shed_cost);
    }
    for (const auto& hv : index.hubs) b.add_objective(at(hv.gen_shed, t), wh * res.gen_shed_cost);
    for (const auto& ov : index.onshore) {
      b.add_objective(at(ov.gen_shed, t), wh * res.gen_shed_cost);
      const double price = sys.locations[ov.location].onshore->price[static_cast<std::size_t>(t)];
      for (const auto& u : ov.imports) b.add_objective(at(u.power, t), wh * price);
    }
  }
}

PlanningModel build_model(const EnergySystem& system) {
  const auto diags = validate_system(system);
  if (!diags.empty()) {
    std::string msg = "system '" + system.name + "' is invalid:";
    for (const auto& d : diags) msg += "\n  [" + d.code + "] " + d.subject + ": " + d.message;
    throw BuildError(msg);
  }
  Registry reg(system);
  build_investment_block(reg);
  ModelIndex index;
  add_electricity_system(reg, index);
  add_production_system(reg, index);
  add_hydrogen_system(reg, index);
  link_operational_capacities(reg);
  build_operational_objective(reg, index);
  return {reg.builder().build(system.name), std::move(index)};
}

}  // namespace oeh::model
