#include "oeh/analysis/accounting.hpp"

#include <cmath>

#include "oeh/milp/validation.hpp"

namespace oeh::analysis {

namespace {

using model::EnergySystem;
using model::PlanningModel;
using model::VarSeries;

class Evaluator {
 public:
  Evaluator(const EnergySystem& sys, const PlanningModel& m, std::span<const double> values) : sys_(sys), values_(values) {
    if (values.size() != m.instance.num_variables()) {
      throw std::invalid_argument("solution has " + std::to_string(values.size()) + " values, model has " +
                                  std::to_string(m.instance.num_variables()) + " variables");
    }
  }

  [[nodiscard]] double at(const VarSeries& s, int t) const { return s.empty() ? 0.0 : values_[static_cast<std::size_t>(s[static_cast<std::size_t>(t)])]; }
  [[nodiscard]] double value(milp::VarId v) const { return values_[static_cast<std::size_t>(v)]; }
  /// W_s * H_t of period t.
  [[nodiscard]] double wh(int t) const { return sys_.time.weight_of(t) * sys_.time.hour_duration; }
  [[nodiscard]] double weighted(const VarSeries& s) const {
    double sum = 0.0;
    for (int t = 0; t < static_cast<int>(s.size()); ++t) sum += wh(t) * at(s, t);
    return sum;
  }

 private:
  const EnergySystem& sys_;
  std::span<const double> values_;
};

double require(const std::optional<double>& eta, const char* term, const std::string& who) {
  if (!eta) throw AccountingError(std::string(term) + " loss needs an efficiency for '" + who + "'");
  return *eta;
}

}  // namespace

const std::vector<std::pair<const char*, LossLedger::Field>>& LossLedger::categories() {
  static const std::vector<std::pair<const char*, Field>> list{
      {"generation_shed", &LossLedger::generation_shed},
      {"heat_shed", &LossLedger::heat_shed},
      {"turbine_conversion", &LossLedger::turbine_conversion},
      {"battery_charging", &LossLedger::battery_charging},
      {"separator", &LossLedger::separator},
      {"compressor", &LossLedger::compressor},
      {"pump_oil", &LossLedger::pump_oil},
      {"pump_water_injection", &LossLedger::pump_water_injection},
      {"pump_water_lift", &LossLedger::pump_water_lift},
      {"electrolysis_net", &LossLedger::electrolysis_net},
      {"fuel_cell", &LossLedger::fuel_cell},
      {"transmission", &LossLedger::transmission},
      {"boiler", &LossLedger::boiler},
  };
  return list;
}

double LossLedger::sum_of_categories() const {
  double s = 0.0;
  for (const auto& [name, field] : categories()) s += this->*field;
  return s;
}

LossLedger compute_energy_loss(const EnergySystem& sys, const PlanningModel& m, std::span<const double> values) {
  const Evaluator ev(sys, m, values);
  const auto& idx = m.index;
  const int T = sys.time.num_periods();
  const double H = sys.time.hour_duration;
  LossLedger out;

  for (const auto& pv : idx.platforms) {
    const auto& loc = sys.locations[pv.location];
    const auto& ps = *loc.platform;
    const auto& pr = ps.process;
    out.generation_shed += ev.weighted(pv.gen_shed);
    out.heat_shed += ev.weighted(pv.heat_dump);
    for (const auto& tv : pv.turbines) {
      const auto& gt = ps.turbines[tv.turbine];
      out.turbine_conversion += (1.0 / gt.efficiency - 1.0 - gt.heat_recovery) * ev.weighted(tv.power);
    }
    for (const auto& bv : pv.batteries) {
      const auto& tech = sys.technologies[idx.capacities[bv.capacity].technology];
      out.battery_charging += (1.0 - require(tech.efficiency, "battery_charging", tech.id)) * ev.weighted(bv.charge);
    }
    for (const auto& u : pv.boilers) {
      const auto& tech = sys.technologies[idx.capacities[u.capacity].technology];
      out.boiler += (1.0 - require(tech.efficiency, "boiler", tech.id)) * ev.weighted(u.power);
    }
    out.separator += (1.0 - require(pr.separator_efficiency, "separator", loc.id)) * ev.weighted(pv.separator);
    out.compressor += (1.0 - require(pr.compressor_efficiency, "compressor", loc.id)) *
                      (ev.weighted(pv.compressor_export) + ev.weighted(pv.compressor_injection));
    out.pump_oil += (1.0 - require(pr.pump_oil_efficiency, "pump_oil", loc.id)) * ev.weighted(pv.pump_oil);
    out.pump_water_injection +=
        (1.0 - require(pr.pump_water_injection_efficiency, "pump_water_injection", loc.id)) * ev.weighted(pv.pump_water_injection);
    out.pump_water_lift += (1.0 - require(pr.pump_water_lift_efficiency, "pump_water_lift", loc.id)) * ev.weighted(pv.pump_water_lift);
  }

  for (const auto& hv : idx.hubs) {
    const auto& hub = *sys.locations[hv.location].hub;
    out.generation_shed += ev.weighted(hv.gen_shed);
    for (int t = 0; t < T; ++t) {
      const double w = sys.time.weight_of(t);
      double hydrogen = 0.0;  // kg produced by electrolysis in period t
      double electricity = 0.0;
      for (const auto& u : hv.electrolysers) electricity += H * ev.at(u.power, t);
      for (const auto& u : hv.fuel_cells) {
        const auto& tech = sys.technologies[idx.capacities[u.capacity].technology];
        const double eta = require(tech.efficiency, "fuel_cell", tech.id);
        hydrogen += H * ev.at(u.power, t) / (eta * hub.energy_content);
        out.fuel_cell += w * H * (1.0 / eta - 1.0) * ev.at(u.power, t);
      }
      for (const auto& sv : hv.stores) hydrogen += ev.at(sv.charge, t) - ev.at(sv.discharge, t);
      out.electrolysis_net += w * (electricity - hub.energy_content * hydrogen);
    }
  }
  for (const auto& ov : idx.onshore) out.generation_shed += ev.weighted(ov.gen_shed);

  for (const auto& lv : idx.lines) {
    const double eta = sys.branches[lv.branch].efficiency;
    out.transmission += (1.0 - eta) * (ev.weighted(lv.forward) + ev.weighted(lv.backward));
  }
  out.total = out.sum_of_categories();
  return out;
}

double compute_emissions(const EnergySystem& sys, const PlanningModel& m, std::span<const double> values) {
  const Evaluator ev(sys, m, values);
  double total = 0.0;
  for (const auto& pv : m.index.platforms) {
    const auto& ps = *sys.locations[pv.location].platform;
    for (const auto& tv : pv.turbines) {
      const auto& gt = ps.turbines[tv.turbine];
      total += gt.fuel_emission / gt.efficiency * ev.weighted(tv.power);
    }
  }
  return total;
}

EnergyAudit audit_energy(const EnergySystem& sys, const PlanningModel& m, std::span<const double> values) {
  const Evaluator ev(sys, m, values);
  const auto& idx = m.index;
  EnergyAudit a;
  for (const auto& pv : idx.platforms) {
    const auto& loc = sys.locations[pv.location];
    const auto& ps = *loc.platform;
    const auto& pr = ps.process;
    for (const auto& tv : pv.turbines) a.fuel += ev.weighted(tv.power) / ps.turbines[tv.turbine].efficiency;
    a.load_shed += ev.weighted(pv.load_shed);
    a.heat_load_shed += ev.weighted(pv.heat_shed);
    a.useful += require(pr.compressor_efficiency, "compressor", loc.id) *
                (ev.weighted(pv.compressor_export) + ev.weighted(pv.compressor_injection));
    a.useful += require(pr.pump_oil_efficiency, "pump_oil", loc.id) * ev.weighted(pv.pump_oil);
    a.useful += require(pr.pump_water_injection_efficiency, "pump_water_injection", loc.id) * ev.weighted(pv.pump_water_injection);
    a.useful += require(pr.pump_water_lift_efficiency, "pump_water_lift", loc.id) * ev.weighted(pv.pump_water_lift);
    a.useful += require(pr.separator_efficiency, "separator", loc.id) * ev.weighted(pv.separator);
    a.demand_margin += (sys.reserve.demand_factor - 1.0) * ev.weighted(pv.demand);
  }
  for (const auto& hv : idx.hubs) {
    for (const auto& u : hv.renewables) a.renewable += ev.weighted(u.power);
  }
  for (const auto& ov : idx.onshore) {
    for (const auto& u : ov.imports) a.import += ev.weighted(u.power);
  }
  return a;
}

std::vector<CapacityEntry> installed_capacities(const EnergySystem& sys, const PlanningModel& m, std::span<const double> values) {
  const Evaluator ev(sys, m, values);
  auto cluster_of = [&](const model::Location& loc) { return loc.cluster.empty() ? loc.id : loc.cluster; };
  std::vector<CapacityEntry> out;
  for (const auto& h : m.index.capacities) {
    const auto& loc = sys.locations[h.location];
    out.push_back({cluster_of(loc), sys.technologies[h.technology].id, loc.id, ev.value(h.accumulated)});
  }
  for (const auto& l : m.index.line_capacities) {
    const auto& br = sys.branches[l.branch];
    const auto* to = sys.find_location(br.to);
    const auto* from = sys.find_location(br.from);
    const std::string cluster = !to->cluster.empty() ? to->cluster : cluster_of(*from);
    out.push_back({cluster, "line:" + br.id, br.from + "-" + br.to, ev.value(l.accumulated)});
  }
  return out;
}

SolveReport analyze(const EnergySystem& sys, const PlanningModel& m, const milp::MILPSolution& sol) {
  SolveReport r;
  r.status = sol.status;
  r.nodes = sol.nodes;
  r.lp_iterations = sol.lp_iterations;
  r.has_solution = sol.has_incumbent && !sol.values.empty();
  if (!r.has_solution) return r;
  r.objective = sol.objective;
  r.best_bound = sol.best_bound;
  r.gap = sol.relative_gap();
  r.values = sol.values;
  r.max_residual = milp::validate_solution(m.instance, sol.values).max_residual();
  r.emissions_t = compute_emissions(sys, m, sol.values);
  r.capacities = installed_capacities(sys, m, sol.values);
  try {
    r.losses = compute_energy_loss(sys, m, sol.values);
    r.audit = audit_energy(sys, m, sol.values);
  } catch (const AccountingError& e) {
    r.accounting_error = e.what();
  }
  return r;
}

}  // namespace oeh::analysis
