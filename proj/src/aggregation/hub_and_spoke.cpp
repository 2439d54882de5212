#include "oeh/aggregation/hub_and_spoke.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oeh/io/csv.hpp"
#include "oeh/kernels/kernels.hpp"

namespace oeh::aggregation {

namespace {

model::TechnologySite site(const std::string& location, int units, double unit_max) {
  model::TechnologySite s;
  s.location = location;
  s.max_units = units;
  s.max_cap = units * unit_max;
  return s;
}

model::TechnologySpec technology(const std::string& id, model::TechnologyKind kind, double inv, double om, double unit_max) {
  model::TechnologySpec t;
  t.id = id;
  t.kind = kind;
  t.unit_inv_cost = inv;
  t.fixed_om = om;
  t.unit_max = unit_max;
  return t;
}

model::Location location(const std::string& id, model::LocationKind kind, double lat, double lon) {
  model::Location l;
  l.id = id;
  l.kind = kind;
  l.lat = lat;
  l.lon = lon;
  return l;
}

model::BranchSpec branch(const std::string& id, const std::string& from, const std::string& to, model::BranchKind kind, double km) {
  model::BranchSpec b;
  b.id = id;
  b.from = from;
  b.to = to;
  b.kind = kind;
  b.length_km = km;
  return b;
}

std::vector<double> scaled(const std::vector<double>& v, double f) {
  std::vector<double> out(v);
  for (double& x : out) x *= f;
  return out;
}

}  // namespace

const std::vector<OnshoreSite>& default_onshore_sites() {
  static const std::vector<OnshoreSite> sites{
      {"farsund", 58.09, 6.80, 140.0, 400.0},   {"karsto", 59.27, 5.52, 140.0, 400.0},
      {"kollsnes", 60.55, 4.84, 140.0, 400.0},  {"mongstad", 60.81, 5.03, 140.0, 400.0},
      {"floro", 61.60, 5.03, 140.0, 400.0},     {"nyhamna", 62.85, 6.95, 140.0, 400.0},
  };
  return sites;
}

std::vector<OnshoreSite> read_onshore_sites_csv(const std::filesystem::path& path) {
  const io::Table t = io::read_csv_file(path);
  auto need = [&](const char* name) {
    auto c = t.column(name);
    if (!c) throw io::ParseError(t.source, 1, std::string("missing column '") + name + "'");
    return *c;
  };
  const auto c_id = need("id"), c_lat = need("lat"), c_lon = need("lon"), c_price = need("price"), c_cap = need("pfs_cap_limit");
  std::vector<OnshoreSite> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out.push_back({t.rows[r][c_id], t.number(r, c_lat), t.number(r, c_lon), t.number(r, c_price), t.number(r, c_cap)});
  }
  return out;
}

model::EnergySystem build_hub_and_spoke(const std::vector<FieldRecord>& fields, const ClusterResult& clusters,
                                        const std::vector<FieldProfiles>& profiles, const std::vector<OnshoreSite>& sites,
                                        const HubAndSpokeOptions& options) {
  if (sites.empty()) throw std::invalid_argument("no onshore sites");
  if (profiles.size() != fields.size()) throw std::invalid_argument("one profile set per field is required");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (profiles[i].field != fields[i].id) throw std::invalid_argument("profile order does not match field '" + fields[i].id + "'");
  }

  const SlicePlan plan = build_time_slices(options.slices, options.hours);
  model::EnergySystem sys;
  sys.name = "hub-and-spoke";
  sys.time = plan.time;
  sys.time.kappa = options.kappa;
  sys.policy.co2_tax = options.co2_tax;
  sys.reserve.sigma = 0.2;

  auto wind = technology("wind", model::TechnologyKind::Wind, 1.2e7, 4.0e4, 10.0);
  auto electrolyser = technology("electrolyser", model::TechnologyKind::Electrolyser, 4.0e6, 2.0e4, 20.0);
  auto fuel_cell = technology("fuel_cell", model::TechnologyKind::FuelCell, 5.0e6, 2.0e4, 20.0);
  fuel_cell.efficiency = 0.5;
  fuel_cell.ramp = 0.5;
  auto h2_store = technology("h2_store", model::TechnologyKind::HydrogenStorage, 400.0, 2.0, 50000.0);
  auto battery = technology("battery", model::TechnologyKind::Battery, 3.0e6, 1.0e4, 10.0);
  battery.efficiency = 0.9;
  battery.power_ratio = 0.5;
  auto boiler = technology("boiler", model::TechnologyKind::Boiler, 1.5e5, 1.0e3, 5.0);
  boiler.efficiency = 0.98;
  auto pfs = technology("pfs", model::TechnologyKind::PowerFromShore, 2.0e5, 2.0e3, 50.0);

  for (std::size_t c = 0; c < clusters.clusters.size(); ++c) {
    const Cluster& cl = clusters.clusters[c];
    const std::string n = std::to_string(c + 1);
    const std::string fid = "F" + n, hid = "H" + n, oid = "O" + n;

    std::vector<FieldRecord> members;
    for (std::size_t i : cl.members) members.push_back(fields[i]);
    const AggregatedField agg = aggregate_cluster(members, cl.lat, cl.lon, fid);

    // Member series summed hour by hour, then cut to the slices.
    std::array<std::vector<double>, kStreams> hourly;
    std::vector<double> wind_hourly(kYearHours, 0.0);
    for (auto& v : hourly) v.assign(kYearHours, 0.0);
    for (std::size_t i : cl.members) {
      for (std::size_t k = 0; k < kStreams; ++k) {
        for (int t = 0; t < kYearHours; ++t) hourly[k][static_cast<std::size_t>(t)] += profiles[i].hourly[k][static_cast<std::size_t>(t)];
      }
      for (int t = 0; t < kYearHours; ++t) wind_hourly[static_cast<std::size_t>(t)] += profiles[i].wind[static_cast<std::size_t>(t)];
    }
    for (double& w : wind_hourly) w /= static_cast<double>(cl.members.size());

    auto plat = location(fid, model::LocationKind::Platform, cl.lat, cl.lon);
    plat.cluster = "C" + n;
    model::PlatformSpec ps;
    model::GasTurbineSpec gt;
    gt.id = "GT1";
    gt.capacity = agg.field.devices.turbine_capacity;
    gt.heat_recovery = 0.35;
    gt.ramp = 0.5;
    gt.fuel_cost = 20.0;
    gt.var_cost = 5.0;
    ps.turbines.push_back(gt);
    auto& pr = ps.process;
    pr.separator_cap = agg.field.devices.separator_cap;
    pr.separator_heat_coeff = 8.0e-6;
    pr.export_compressor_cap = agg.field.devices.export_compressor_cap;
    pr.injection_compressor_cap = agg.field.devices.injection_compressor_cap;
    pr.compression_ratio = 3.0;
    pr.polytropic_exponent = 1.4;
    pr.head_density_coeff = 5.0e-5;
    pr.pump_oil_cap = agg.field.devices.pump_oil_cap;
    pr.pump_oil_coeff = 5.0e-6;
    pr.pump_water_injection_cap = agg.field.devices.pump_water_injection_cap;
    pr.pump_water_injection_coeff = 3.0e-6;
    pr.pump_water_lift_cap = agg.field.devices.pump_water_lift_cap;
    pr.pump_water_lift_coeff = 2.0e-6;
    pr.compressor_efficiency = 0.75;
    pr.separator_efficiency = 0.9;
    pr.pump_oil_efficiency = 0.8;
    pr.pump_water_injection_efficiency = 0.8;
    pr.pump_water_lift_efficiency = 0.8;
    const double dt = sys.time.hour_duration;
    ps.flows.oil = scaled(slice_series(hourly[static_cast<std::size_t>(Stream::Oil)], plan), dt);
    ps.flows.gas_export = scaled(slice_series(hourly[static_cast<std::size_t>(Stream::GasExport)], plan), dt);
    ps.flows.gas_injection = scaled(slice_series(hourly[static_cast<std::size_t>(Stream::GasInjection)], plan), dt);
    ps.flows.water_injection = scaled(slice_series(hourly[static_cast<std::size_t>(Stream::WaterInjection)], plan), dt);
    ps.flows.water_lift = scaled(slice_series(hourly[static_cast<std::size_t>(Stream::WaterLift)], plan), dt);
    ps.flows.produced_water = scaled(slice_series(hourly[static_cast<std::size_t>(Stream::ProducedWater)], plan), dt);
    plat.platform = std::move(ps);

    auto hub = location(hid, model::LocationKind::Hub, cl.lat, cl.lon);
    hub.hub = model::HubSpec{};

    const OnshoreSite* best = &sites.front();
    double best_km = kernels::haversine_km({cl.lat, cl.lon}, {best->lat, best->lon});
    for (const auto& s : sites) {
      const double d = kernels::haversine_km({cl.lat, cl.lon}, {s.lat, s.lon});
      if (d < best_km) {
        best_km = d;
        best = &s;
      }
    }
    auto on = location(oid, model::LocationKind::Onshore, best->lat, best->lon);
    model::OnshoreSpec os;
    os.pfs_cap_limit = best->pfs_cap_limit;
    for (std::size_t s = 0; s < plan.start_hour.size(); ++s) {
      for (int h = 0; h < plan.time.slices[s].hours; ++h) {
        const int hod = (plan.start_hour[s] + h) % 24;
        os.price.push_back(best->price + options.price_swing * std::sin(2.0 * std::numbers::pi * (hod - 6) / 24.0));
      }
    }
    on.onshore = std::move(os);

    auto w = site(hid, 30, wind.unit_max);
    w.availability = slice_series(wind_hourly, plan);
    wind.sites.push_back(std::move(w));
    electrolyser.sites.push_back(site(hid, 10, electrolyser.unit_max));
    fuel_cell.sites.push_back(site(hid, 10, fuel_cell.unit_max));
    h2_store.sites.push_back(site(hid, 20, h2_store.unit_max));
    battery.sites.push_back(site(fid, 4, battery.unit_max));
    const int boilers = static_cast<int>(std::ceil(agg.field.devices.separator_cap / boiler.unit_max)) + 1;
    boiler.sites.push_back(site(fid, boilers, boiler.unit_max));
    pfs.sites.push_back(site(oid, 20, pfs.unit_max));

    const double peak = agg.field.devices.turbine_capacity * 2.0;
    const int cables = std::max(2, static_cast<int>(std::ceil(peak / 60.0)));
    auto spoke = branch(hid + "-" + fid, hid, fid, model::BranchKind::HVAC, std::max(1.0, agg.spoke_km));
    spoke.unit_inv_cost = 2500.0;
    spoke.per_km_fixed = 1.5e4;
    spoke.fixed_inv = 1.0e6;
    spoke.fixed_om = 8.0;
    spoke.unit_max = 60.0;
    spoke.max_cables = cables;
    spoke.max_cap = cables * spoke.unit_max;
    spoke.efficiency = 0.98;
    sys.branches.push_back(spoke);
    auto export_cable = branch(oid + "-" + hid, oid, hid, model::BranchKind::HVDC, std::max(1.0, best_km));
    export_cable.unit_inv_cost = 3000.0;
    export_cable.per_km_fixed = 2.0e4;
    export_cable.fixed_inv = 5.0e6;
    export_cable.fixed_om = 10.0;
    export_cable.unit_max = 250.0;
    export_cable.max_cables = 4;
    export_cable.max_cap = 1000.0;
    export_cable.efficiency = 0.96;
    sys.branches.push_back(export_cable);

    sys.locations.push_back(std::move(plat));
    sys.locations.push_back(std::move(hub));
    sys.locations.push_back(std::move(on));
  }
  sys.technologies = {wind, electrolyser, fuel_cell, h2_store, battery, boiler, pfs};
  return sys;
}

}  // namespace oeh::aggregation
