#include <algorithm>

#include "oeh/model/registry.hpp"

namespace oeh::model {

using milp::Sense;
using milp::Term;

std::vector<std::size_t> Registry::capacities_at(std::size_t location, TechnologyKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < capacities_.size(); ++k) {
    const auto& h = capacities_[k];
    if (h.location == location && system_.technologies[h.technology].kind == kind) out.push_back(k);
  }
  return out;
}

std::size_t Registry::location_index(std::string_view id) const {
  for (std::size_t i = 0; i < system_.locations.size(); ++i) {
    if (system_.locations[i].id == id) return i;
  }
  throw BuildError("unknown location '" + std::string(id) + "'");
}

double max_capacity(const EnergySystem& system, const TechnologySpec& tech, const TechnologySite& site) {
  double cap = site.max_cap;
  if (tech.kind == TechnologyKind::PowerFromShore) {
    const Location* loc = system.find_location(site.location);
    if (loc && loc->onshore) cap = std::min(cap, std::max(loc->onshore->pfs_cap_limit, site.hist_cap));
  }
  return cap;
}

void build_investment_block(Registry& registry) {
  const EnergySystem& sys = registry.system();
  auto& b = registry.builder();
  const double kappa = sys.time.kappa;

  for (std::size_t p = 0; p < sys.technologies.size(); ++p) {
    const auto& tech = sys.technologies[p];
    if (tech.investable && !(tech.unit_max > 0.0)) {
      throw BuildError("technology '" + tech.id + "' is investable but has unit_max <= 0");
    }
    for (std::size_t s = 0; s < tech.sites.size(); ++s) {
      const auto& site = tech.sites[s];
      const std::string tag = tech.id + "." + site.location;
      CapacityHandle h;
      h.technology = p;
      h.site = s;
      h.location = registry.location_index(site.location);
      const int max_units = tech.investable ? site.max_units : 0;
      h.installed = b.add_variable("xInst[" + tag + "]", 0.0, milp::kInfinity);
      h.units = b.add_variable("nUnits[" + tag + "]", 0.0, static_cast<double>(max_units), true);
      h.accumulated = b.add_variable("xAcc[" + tag + "]", 0.0, max_capacity(sys, tech, site));
      b.add_constraint("capAcc[" + tag + "]", {{h.accumulated, 1.0}, {h.installed, -1.0}}, Sense::Equal, site.hist_cap);
      b.add_constraint("capUnits[" + tag + "]", {{h.installed, 1.0}, {h.units, -tech.unit_max}}, Sense::LessEqual, 0.0);
      b.add_objective(h.installed, tech.unit_inv_cost);
      b.add_objective(h.units, tech.fixed_inv_cost);
      b.add_objective(h.accumulated, kappa * tech.fixed_om);
      registry.add_capacity(h);
    }
  }

  for (std::size_t l = 0; l < sys.branches.size(); ++l) {
    const auto& br = sys.branches[l];
    if (br.investable && !(br.unit_max > 0.0)) {
      throw BuildError("branch '" + br.id + "' is investable but has unit_max <= 0");
    }
    LineHandle h;
    h.branch = l;
    const int max_units = br.investable ? br.max_cables : 0;
    h.installed = b.add_variable("xLInst[" + br.id + "]", 0.0, milp::kInfinity);
    h.units = b.add_variable("nCables[" + br.id + "]", 0.0, static_cast<double>(max_units), true);
    h.accumulated = b.add_variable("xLAcc[" + br.id + "]", 0.0, br.max_cap);
    b.add_constraint("lineAcc[" + br.id + "]", {{h.accumulated, 1.0}, {h.installed, -1.0}}, Sense::Equal, br.hist_cap);
    b.add_constraint("lineUnits[" + br.id + "]", {{h.installed, 1.0}, {h.units, -br.unit_max}}, Sense::LessEqual, 0.0);
    b.add_objective(h.installed, br.unit_inv_cost * br.length_km);
    b.add_objective(h.units, br.per_km_fixed * br.length_km + br.fixed_inv);
    b.add_objective(h.accumulated, kappa * br.fixed_om * br.length_km);
    registry.add_line(h);
  }
}

void link_operational_capacities(Registry& registry) {
  auto& b = registry.builder();
  for (const auto& link : registry.links()) {
    for (std::size_t t = 0; t < link.usage.size(); ++t) {
      std::vector<Term> terms;
      terms.reserve(link.usage[t].size() + 1);
      for (auto v : link.usage[t]) terms.push_back({v, 1.0});
      terms.push_back({link.capacity, -link.factor});
      b.add_constraint(link.name + "[" + std::to_string(t) + "]", std::move(terms), Sense::LessEqual, 0.0);
    }
  }
}

}  // namespace oeh::model
