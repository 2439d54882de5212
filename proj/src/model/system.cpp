#include "oeh/model/system.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace oeh::model {

int TimeStructure::num_periods() const {
  int n = 0;
  for (const auto& s : slices) n += s.hours;
  return n;
}

int TimeStructure::slice_start(std::size_t s) const {
  int start = 0;
  for (std::size_t k = 0; k < s; ++k) start += slices[k].hours;
  return start;
}

std::size_t TimeStructure::slice_of(int t) const {
  int start = 0;
  for (std::size_t s = 0; s < slices.size(); ++s) {
    if (t < start + slices[s].hours) return s;
    start += slices[s].hours;
  }
  return slices.size() - 1;
}

int TimeStructure::previous_in_slice(int t) const {
  const std::size_t s = slice_of(t);
  const int start = slice_start(s);
  return t == start ? start + slices[s].hours - 1 : t - 1;
}

double ProcessSpec::compression_bracket() const {
  return std::pow(compression_ratio, (polytropic_exponent - 1.0) / polytropic_exponent) - 1.0;
}

const Location* EnergySystem::find_location(std::string_view id) const {
  for (const auto& l : locations) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

const TechnologySpec* EnergySystem::find_technology(std::string_view id) const {
  for (const auto& t : technologies) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::vector<std::pair<const TechnologySpec*, const TechnologySite*>> EnergySystem::sited_at(std::string_view location) const {
  std::vector<std::pair<const TechnologySpec*, const TechnologySite*>> out;
  for (const auto& t : technologies) {
    for (const auto& s : t.sites) {
      if (s.location == location) out.emplace_back(&t, &s);
    }
  }
  return out;
}

std::string_view to_string(LocationKind kind) {
  switch (kind) {
    case LocationKind::Platform: return "platform";
    case LocationKind::Hub: return "hub";
    case LocationKind::Onshore: return "onshore";
  }
  return "?";
}

std::string_view to_string(TechnologyKind kind) {
  switch (kind) {
    case TechnologyKind::Wind: return "wind";
    case TechnologyKind::Solar: return "solar";
    case TechnologyKind::Electrolyser: return "electrolyser";
    case TechnologyKind::FuelCell: return "fuel_cell";
    case TechnologyKind::HydrogenStorage: return "hydrogen_storage";
    case TechnologyKind::Battery: return "battery";
    case TechnologyKind::Boiler: return "boiler";
    case TechnologyKind::PowerFromShore: return "power_from_shore";
  }
  return "?";
}

std::string_view to_string(BranchKind kind) { return kind == BranchKind::HVAC ? "HVAC" : "HVDC"; }

std::optional<LocationKind> parse_location_kind(std::string_view s) {
  for (auto k : {LocationKind::Platform, LocationKind::Hub, LocationKind::Onshore}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<TechnologyKind> parse_technology_kind(std::string_view s) {
  for (auto k : {TechnologyKind::Wind, TechnologyKind::Solar, TechnologyKind::Electrolyser, TechnologyKind::FuelCell,
                 TechnologyKind::HydrogenStorage, TechnologyKind::Battery, TechnologyKind::Boiler,
                 TechnologyKind::PowerFromShore}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<BranchKind> parse_branch_kind(std::string_view s) {
  if (s == "HVAC") return BranchKind::HVAC;
  if (s == "HVDC") return BranchKind::HVDC;
  return std::nullopt;
}

LocationKind host_kind(TechnologyKind kind) {
  switch (kind) {
    case TechnologyKind::Battery:
    case TechnologyKind::Boiler: return LocationKind::Platform;
    case TechnologyKind::PowerFromShore: return LocationKind::Onshore;
    default: return LocationKind::Hub;
  }
}

bool is_renewable(TechnologyKind kind) { return kind == TechnologyKind::Wind || kind == TechnologyKind::Solar; }

namespace {

class Collector {
 public:
  void add(std::string code, std::string subject, std::string message) {
    out.push_back({std::move(code), std::move(subject), std::move(message)});
  }
  void nonneg(double v, const std::string& subject, const std::string& field) {
    if (!(v >= 0.0) || std::isnan(v)) add("negative-value", subject, field + " must be >= 0");
  }
  void series(const std::vector<double>& v, int periods, const std::string& subject, const std::string& name,
              double lo = 0.0, double hi = std::numeric_limits<double>::infinity()) {
    if (static_cast<int>(v.size()) != periods) {
      add("profile-length", subject,
          "profile '" + name + "' has " + std::to_string(v.size()) + " values, time structure has " + std::to_string(periods) + " periods");
      return;
    }
    for (std::size_t t = 0; t < v.size(); ++t) {
      if (!(v[t] >= lo && v[t] <= hi)) {
        add("profile-range", subject, "profile '" + name + "' value at period " + std::to_string(t) + " is out of range");
        return;
      }
    }
  }
  std::vector<Diagnostic> out;
};

}  // namespace

std::vector<Diagnostic> validate_system(const EnergySystem& system) {
  Collector c;
  const auto& time = system.time;
  const int periods = time.num_periods();

  if (time.slices.empty()) c.add("time", "time", "no time slices");
  double year = 0.0;
  for (const auto& s : time.slices) {
    if (s.hours <= 0) c.add("time", s.id, "slice hours must be positive");
    if (!(s.weight >= 0.0)) c.add("time", s.id, "slice weight must be >= 0");
    year += s.weight * s.hours * time.hour_duration;
  }
  if (!time.slices.empty() && std::abs(year - 8760.0) > 1e-9 * 8760.0) {
    c.add("time", "time", "weighted slice hours sum to " + std::to_string(year) + ", expected 8760");
  }
  if (!(time.hour_duration > 0.0)) c.add("time", "time", "hour_duration must be positive");
  if (!(time.kappa > 0.0)) c.add("time", "time", "kappa must be positive");

  std::set<std::string> ids;
  for (const auto& loc : system.locations) {
    if (!ids.insert(loc.id).second) c.add("duplicate-id", loc.id, "duplicate location id");
    if (!(std::abs(loc.lat) <= 90.0) || !(std::abs(loc.lon) <= 180.0)) c.add("coordinates", loc.id, "coordinates out of range");
    const bool p = loc.platform.has_value();
    const bool h = loc.hub.has_value();
    const bool o = loc.onshore.has_value();
    const bool ok = (loc.kind == LocationKind::Platform && p && !h && !o) || (loc.kind == LocationKind::Hub && h && !p && !o) ||
                    (loc.kind == LocationKind::Onshore && o && !p && !h);
    if (!ok) c.add("payload", loc.id, "kind-specific payload must be present exactly for " + std::string(to_string(loc.kind)));
    if (p) {
      const auto& ps = *loc.platform;
      for (const auto& g : ps.turbines) {
        const std::string who = loc.id + "/" + g.id;
        if (!(g.efficiency > 0.0 && g.efficiency <= 1.0)) c.add("turbine", who, "efficiency must be in (0, 1]");
        if (!(g.heat_recovery >= 0.0)) c.add("turbine", who, "heat_recovery must be >= 0");
        if (g.efficiency + g.heat_recovery > 1.2) c.add("turbine", who, "efficiency + heat_recovery exceeds 1.2");
        if (!(g.ramp > 0.0 && g.ramp <= 1.0)) c.add("turbine", who, "ramp must be in (0, 1]");
        c.nonneg(g.capacity, who, "capacity");
        c.nonneg(g.fuel_emission, who, "fuel_emission");
        c.nonneg(g.fuel_cost, who, "fuel_cost");
        c.nonneg(g.var_cost, who, "var_cost");
      }
      const auto& pr = ps.process;
      for (auto [v, name] : {std::pair{pr.separator_cap, "separator_cap"}, {pr.separator_heat_coeff, "separator_heat_coeff"},
                             {pr.export_compressor_cap, "export_compressor_cap"}, {pr.injection_compressor_cap, "injection_compressor_cap"},
                             {pr.head_density_coeff, "head_density_coeff"}, {pr.pump_oil_cap, "pump_oil_cap"},
                             {pr.pump_oil_coeff, "pump_oil_coeff"}, {pr.pump_water_injection_cap, "pump_water_injection_cap"},
                             {pr.pump_water_injection_coeff, "pump_water_injection_coeff"}, {pr.pump_water_lift_cap, "pump_water_lift_cap"},
                             {pr.pump_water_lift_coeff, "pump_water_lift_coeff"}}) {
        c.nonneg(v, loc.id, std::string("process.") + name);
      }
      if (!(pr.compression_ratio > 1.0)) c.add("process", loc.id, "compression_ratio must be > 1");
      if (!(pr.polytropic_exponent > 1.0)) c.add("process", loc.id, "polytropic_exponent must be > 1");
      const auto& f = ps.flows;
      c.series(f.gas_export, periods, loc.id, "gas_export");
      c.series(f.gas_injection, periods, loc.id, "gas_injection");
      c.series(f.oil, periods, loc.id, "oil");
      c.series(f.water_injection, periods, loc.id, "water_injection");
      c.series(f.water_lift, periods, loc.id, "water_lift");
      if (!f.produced_water.empty()) c.series(f.produced_water, periods, loc.id, "produced_water");
    }
    if (h) {
      if (!(loc.hub->electrolysis_storage > 0.0)) c.add("hub", loc.id, "electrolysis_storage must be positive");
      if (!(loc.hub->electrolysis_fuel_cell > 0.0)) c.add("hub", loc.id, "electrolysis_fuel_cell must be positive");
      if (!(loc.hub->energy_content > 0.0)) c.add("hub", loc.id, "energy_content must be positive");
    }
    if (o) {
      c.series(loc.onshore->price, periods, loc.id, "price", -std::numeric_limits<double>::infinity());
      c.nonneg(loc.onshore->pfs_cap_limit, loc.id, "pfs_cap_limit");
    }
  }

  std::set<std::string> tech_ids;
  for (const auto& t : system.technologies) {
    if (!tech_ids.insert(t.id).second) c.add("duplicate-id", t.id, "duplicate technology id");
    c.nonneg(t.unit_inv_cost, t.id, "unit_inv_cost");
    c.nonneg(t.fixed_om, t.id, "fixed_om");
    c.nonneg(t.fixed_inv_cost, t.id, "fixed_inv_cost");
    if (t.investable && !(t.unit_max > 0.0)) c.add("unit-max", t.id, "investable technology needs unit_max > 0");
    const bool needs_eff = t.kind == TechnologyKind::Battery || t.kind == TechnologyKind::FuelCell || t.kind == TechnologyKind::Boiler;
    if (needs_eff && !(t.efficiency && *t.efficiency > 0.0 && *t.efficiency <= 1.0)) {
      c.add("efficiency", t.id, "efficiency must be given in (0, 1]");
    }
    if (t.kind == TechnologyKind::Battery && !(t.power_ratio > 0.0)) c.add("battery", t.id, "power_ratio must be positive");
    if (t.kind == TechnologyKind::FuelCell && !(t.ramp > 0.0 && t.ramp <= 1.0)) c.add("fuel-cell", t.id, "ramp must be in (0, 1]");
    std::set<std::string> sites;
    for (const auto& s : t.sites) {
      const std::string who = t.id + "@" + s.location;
      if (!sites.insert(s.location).second) c.add("duplicate-site", who, "technology sited twice at one location");
      const Location* loc = system.find_location(s.location);
      if (!loc) {
        c.add("unknown-location", who, "site references unknown location '" + s.location + "'");
      } else if (loc->kind != host_kind(t.kind)) {
        c.add("site-kind", who, std::string(to_string(t.kind)) + " must be sited at a " + std::string(to_string(host_kind(t.kind))));
      }
      if (s.max_units < 0) c.add("negative-value", who, "max_units must be >= 0");
      c.nonneg(s.hist_cap, who, "hist_cap");
      if (!(s.hist_cap <= s.max_cap)) c.add("capacity", who, "hist_cap exceeds max_cap");
      if (is_renewable(t.kind)) c.series(s.availability, periods, who, "availability", 0.0, 1.0);
    }
  }

  std::set<std::string> branch_ids;
  for (const auto& b : system.branches) {
    if (!branch_ids.insert(b.id).second) c.add("duplicate-id", b.id, "duplicate branch id");
    if (!system.find_location(b.from)) c.add("unknown-location", b.id, "branch endpoint '" + b.from + "' is unknown");
    if (!system.find_location(b.to)) c.add("unknown-location", b.id, "branch endpoint '" + b.to + "' is unknown");
    if (b.from == b.to) c.add("branch", b.id, "branch endpoints coincide");
    if (!(b.length_km > 0.0)) c.add("branch", b.id, "length must be positive");
    if (!(b.efficiency > 0.0 && b.efficiency <= 1.0)) c.add("branch", b.id, "efficiency must be in (0, 1]");
    for (auto [v, name] : {std::pair{b.unit_inv_cost, "unit_inv_cost"}, {b.per_km_fixed, "per_km_fixed"}, {b.fixed_inv, "fixed_inv"},
                           {b.fixed_om, "fixed_om"}, {b.hist_cap, "hist_cap"}}) {
      c.nonneg(v, b.id, name);
    }
    if (!(b.hist_cap <= b.max_cap)) c.add("capacity", b.id, "hist_cap exceeds max_cap");
    if (b.max_cables < 0) c.add("negative-value", b.id, "max_cables must be >= 0");
    if (b.investable && !(b.unit_max > 0.0)) c.add("unit-max", b.id, "investable branch needs unit_max > 0");
  }

  const auto& r = system.reserve;
  if (!(r.sigma >= 0.0 && r.sigma < 1.0)) c.add("reserve", "reserve", "sigma must be in [0, 1)");
  if (r.load_shed_cost) c.nonneg(*r.load_shed_cost, "reserve", "load_shed_cost");
  if (r.heat_shed_cost) c.nonneg(*r.heat_shed_cost, "reserve", "heat_shed_cost");
  c.nonneg(r.gen_shed_cost, "reserve", "gen_shed_cost");
  if (!(r.demand_factor > 0.0)) c.add("reserve", "reserve", "demand_factor must be positive");
  c.nonneg(system.policy.co2_tax, "policy", "co2_tax");
  c.nonneg(system.policy.co2_cap, "policy", "co2_cap");

  // Connectivity over the undirected branch graph.
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& b : system.branches) {
    adj[b.from].push_back(b.to);
    adj[b.to].push_back(b.from);
  }
  for (const auto& loc : system.locations) {
    if (loc.kind == LocationKind::Hub) {
      bool has_renewable = false;
      for (const auto& [tech, site] : system.sited_at(loc.id)) has_renewable = has_renewable || (is_renewable(tech->kind) && site->max_units > 0);
      if (!has_renewable && adj[loc.id].empty()) c.add("isolated-hub", loc.id, "hub has no renewable units and no branch");
    }
    if (loc.kind != LocationKind::Platform) continue;
    std::set<std::string> seen{loc.id};
    std::deque<std::string> queue{loc.id};
    bool reached = false;
    while (!queue.empty() && !reached) {
      const std::string z = queue.front();
      queue.pop_front();
      for (const auto& nb : adj[z]) {
        if (!seen.insert(nb).second) continue;
        const Location* other = system.find_location(nb);
        if (other && other->kind != LocationKind::Platform) reached = true;
        queue.push_back(nb);
      }
    }
    if (!reached) c.add("connectivity", loc.id, "platform does not reach any hub or onshore bus");
  }
  return std::move(c.out);
}

}  // namespace oeh::model
