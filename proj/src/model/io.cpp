#include "oeh/model/io.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oeh/io/csv.hpp"

namespace oeh::model {

using nlohmann::json;

namespace {

/// Typed access to one JSON object with a path for messages; rejects unknown keys.
class Obj {
 public:
  Obj(const json& j, std::string path, const std::string& source) : j_(j), path_(std::move(path)), source_(source) {
    if (!j_.is_object()) fail("expected an object");
  }
  Obj(const Obj&) = delete;
  Obj& operator=(const Obj&) = delete;

  ~Obj() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw io::ParseError(source_, 0, path_ + ": unknown key '" + it.key() + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw io::ParseError(source_, 0, path_ + ": " + what); }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const json& raw(const std::string& key) {
    if (!has(key)) fail("missing key '" + key + "'");
    return j_.at(key);
  }
  std::string sub(const std::string& key) const { return path_ + "." + key; }
  const std::string& source() const { return source_; }

  double num(const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!has(key)) {
      if (fallback) return *fallback;
      fail("missing number '" + key + "'");
    }
    const json& v = j_.at(key);
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "Infinity")) return std::numeric_limits<double>::infinity();
    if (!v.is_number()) fail("'" + key + "' must be a number");
    return v.get<double>();
  }
  std::optional<double> opt_num(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return num(key);
  }
  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    if (!has(key)) {
      if (fallback) return *fallback;
      fail("missing integer '" + key + "'");
    }
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
    return v.get<int>();
  }
  std::string str(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    if (!has(key)) {
      if (fallback) return *fallback;
      fail("missing string '" + key + "'");
    }
    const json& v = j_.at(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail("'" + key + "' must be true or false");
    return v.get<bool>();
  }
  const json& array(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail("'" + key + "' must be an array");
    return v;
  }

 private:
  const json& j_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> seen_;
};

class Parser {
 public:
  Parser(const ProfileSet& profiles, std::string source) : profiles_(profiles), source_(std::move(source)) {}

  EnergySystem parse(const json& doc) {
    Obj root(doc, "$", source_);
    EnergySystem sys;
    sys.name = root.str("name", std::string("system"));
    root.has("profiles");  // consumed by load_system
    {
      Obj time(root.raw("time"), root.sub("time"), source_);
      sys.time.hour_duration = time.num("hour_duration", 1.0);
      sys.time.kappa = time.num("kappa", 1.0);
      const json& slices = time.array("slices");
      for (std::size_t i = 0; i < slices.size(); ++i) {
        Obj s(slices[i], time.sub("slices") + "[" + std::to_string(i) + "]", source_);
        sys.time.slices.push_back({s.str("id"), s.integer("hours"), s.num("weight")});
      }
    }
    periods_ = static_cast<std::size_t>(std::max(0, sys.time.num_periods()));
    if (root.has("policy")) {
      Obj p(root.raw("policy"), root.sub("policy"), source_);
      sys.policy.co2_tax = p.num("co2_tax", 0.0);
      sys.policy.co2_cap = p.num("co2_cap", std::numeric_limits<double>::infinity());
    }
    if (root.has("reserve")) {
      Obj r(root.raw("reserve"), root.sub("reserve"), source_);
      sys.reserve.sigma = r.num("sigma", 0.0);
      sys.reserve.load_shed_cost = r.opt_num("load_shed_cost");
      sys.reserve.heat_shed_cost = r.opt_num("heat_shed_cost");
      sys.reserve.gen_shed_cost = r.num("gen_shed_cost", 0.0);
      sys.reserve.demand_factor = r.num("demand_factor", 1.0);
    }
    const json& locs = root.array("locations");
    for (std::size_t i = 0; i < locs.size(); ++i) sys.locations.push_back(location(locs[i], "$.locations[" + std::to_string(i) + "]"));
    if (root.has("technologies")) {
      const json& techs = root.array("technologies");
      for (std::size_t i = 0; i < techs.size(); ++i) sys.technologies.push_back(technology(techs[i], "$.technologies[" + std::to_string(i) + "]"));
    }
    if (root.has("branches")) {
      const json& brs = root.array("branches");
      for (std::size_t i = 0; i < brs.size(); ++i) sys.branches.push_back(branch(brs[i], "$.branches[" + std::to_string(i) + "]"));
    }
    return sys;
  }

 private:
  /// A series is either an inline array or the name of a profile column.
  std::vector<double> series(Obj& o, const std::string& key, const std::string& default_column, bool optional = false) {
    if (!o.has(key)) {
      auto it = profiles_.find(default_column);
      if (it != profiles_.end()) return it->second;
      if (optional) return {};
      o.fail("no series '" + key + "' and no profile column '" + default_column + "'");
    }
    const json& v = o.raw(key);
    if (v.is_string()) {
      auto it = profiles_.find(v.get<std::string>());
      if (it == profiles_.end()) o.fail("'" + key + "' references unknown profile column '" + v.get<std::string>() + "'");
      return it->second;
    }
    if (!v.is_array()) o.fail("'" + key + "' must be a column name or an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) o.fail("'" + key + "' contains a non-number");
      out.push_back(x.get<double>());
    }
    return out;
  }

  Location location(const json& j, const std::string& path) {
    Obj o(j, path, source_);
    Location loc;
    loc.id = o.str("id");
    const std::string kind = o.str("kind");
    auto k = parse_location_kind(kind);
    if (!k) o.fail("unknown location kind '" + kind + "'");
    loc.kind = *k;
    loc.cluster = o.str("cluster", std::string());
    loc.lat = o.num("lat", 0.0);
    loc.lon = o.num("lon", 0.0);
    if (loc.kind == LocationKind::Platform) {
      PlatformSpec ps;
      if (o.has("turbines")) {
        const json& ts = o.array("turbines");
        for (std::size_t i = 0; i < ts.size(); ++i) {
          Obj g(ts[i], o.sub("turbines") + "[" + std::to_string(i) + "]", source_);
          GasTurbineSpec gt;
          gt.id = g.str("id");
          gt.capacity = g.num("capacity");
          gt.efficiency = g.num("efficiency", 0.33);
          gt.heat_recovery = g.num("heat_recovery", 0.0);
          gt.ramp = g.num("ramp", 1.0);
          gt.fuel_emission = g.num("fuel_emission", 0.2);
          gt.fuel_cost = g.num("fuel_cost", 0.0);
          gt.var_cost = g.num("var_cost", 0.0);
          ps.turbines.push_back(gt);
        }
      }
      if (o.has("process")) {
        Obj p(o.raw("process"), o.sub("process"), source_);
        auto& pr = ps.process;
        pr.separator_cap = p.num("separator_cap", 0.0);
        pr.separator_heat_coeff = p.num("separator_heat_coeff", 0.0);
        pr.export_compressor_cap = p.num("export_compressor_cap", 0.0);
        pr.injection_compressor_cap = p.num("injection_compressor_cap", 0.0);
        pr.compression_ratio = p.num("compression_ratio", 2.0);
        pr.polytropic_exponent = p.num("polytropic_exponent", 1.4);
        pr.head_density_coeff = p.num("head_density_coeff", 0.0);
        pr.pump_oil_cap = p.num("pump_oil_cap", 0.0);
        pr.pump_oil_coeff = p.num("pump_oil_coeff", 0.0);
        pr.pump_water_injection_cap = p.num("pump_water_injection_cap", 0.0);
        pr.pump_water_injection_coeff = p.num("pump_water_injection_coeff", 0.0);
        pr.pump_water_lift_cap = p.num("pump_water_lift_cap", 0.0);
        pr.pump_water_lift_coeff = p.num("pump_water_lift_coeff", 0.0);
        pr.compressor_efficiency = p.opt_num("compressor_efficiency");
        pr.separator_efficiency = p.opt_num("separator_efficiency");
        pr.pump_oil_efficiency = p.opt_num("pump_oil_efficiency");
        pr.pump_water_injection_efficiency = p.opt_num("pump_water_injection_efficiency");
        pr.pump_water_lift_efficiency = p.opt_num("pump_water_lift_efficiency");
      }
      auto flows = [&](Obj& f) {
        auto& fl = ps.flows;
        fl.gas_export = series(f, "gas_export", loc.id + ".gas_export");
        fl.gas_injection = series(f, "gas_injection", loc.id + ".gas_injection");
        fl.oil = series(f, "oil", loc.id + ".oil");
        fl.water_injection = series(f, "water_injection", loc.id + ".water_injection");
        fl.water_lift = series(f, "water_lift", loc.id + ".water_lift");
        fl.produced_water = series(f, "produced_water", loc.id + ".produced_water", true);
      };
      if (o.has("flows")) {
        Obj f(o.raw("flows"), o.sub("flows"), source_);
        flows(f);
      } else {
        const json empty = json::object();
        Obj f(empty, o.sub("flows"), source_);
        flows(f);
      }
      loc.platform = std::move(ps);
    } else if (loc.kind == LocationKind::Hub) {
      HubSpec hs;
      if (o.has("hub")) {
        Obj h(o.raw("hub"), o.sub("hub"), source_);
        hs.electrolysis_storage = h.num("electrolysis_storage", hs.electrolysis_storage);
        hs.electrolysis_fuel_cell = h.num("electrolysis_fuel_cell", hs.electrolysis_fuel_cell);
        hs.energy_content = h.num("energy_content", hs.energy_content);
      }
      loc.hub = hs;
    } else {
      OnshoreSpec os;
      os.price = series(o, "price", loc.id + ".price");
      os.pfs_cap_limit = o.num("pfs_cap_limit", 0.0);
      loc.onshore = std::move(os);
    }
    return loc;
  }

  TechnologySpec technology(const json& j, const std::string& path) {
    Obj o(j, path, source_);
    TechnologySpec t;
    t.id = o.str("id");
    const std::string kind = o.str("kind");
    auto k = parse_technology_kind(kind);
    if (!k) o.fail("unknown technology kind '" + kind + "'");
    t.kind = *k;
    t.unit_inv_cost = o.num("unit_inv_cost", 0.0);
    t.fixed_om = o.num("fixed_om", 0.0);
    t.fixed_inv_cost = o.num("fixed_inv_cost", 0.0);
    t.unit_max = o.num("unit_max", 0.0);
    t.investable = o.boolean("investable", true);
    t.efficiency = o.opt_num("efficiency");
    t.power_ratio = o.num("power_ratio", 1.0);
    t.ramp = o.num("ramp", 1.0);
    const json& sites = o.array("sites");
    for (std::size_t i = 0; i < sites.size(); ++i) {
      Obj s(sites[i], o.sub("sites") + "[" + std::to_string(i) + "]", source_);
      TechnologySite site;
      site.location = s.str("location");
      site.max_units = s.integer("max_units", 0);
      site.hist_cap = s.num("hist_cap", 0.0);
      site.max_cap = s.num("max_cap", std::numeric_limits<double>::infinity());
      if (is_renewable(t.kind)) site.availability = series(s, "availability", t.id + "." + site.location);
      t.sites.push_back(std::move(site));
    }
    return t;
  }

  BranchSpec branch(const json& j, const std::string& path) {
    Obj o(j, path, source_);
    BranchSpec b;
    b.id = o.str("id");
    b.from = o.str("from");
    b.to = o.str("to");
    const std::string kind = o.str("kind", std::string("HVAC"));
    auto k = parse_branch_kind(kind);
    if (!k) o.fail("unknown branch kind '" + kind + "'");
    b.kind = *k;
    b.length_km = o.num("length_km");
    b.unit_inv_cost = o.num("unit_inv_cost", 0.0);
    b.per_km_fixed = o.num("per_km_fixed", 0.0);
    b.fixed_inv = o.num("fixed_inv", 0.0);
    b.fixed_om = o.num("fixed_om", 0.0);
    b.hist_cap = o.num("hist_cap", 0.0);
    b.max_cap = o.num("max_cap", std::numeric_limits<double>::infinity());
    b.unit_max = o.num("unit_max", 0.0);
    b.max_cables = o.integer("max_cables", 0);
    b.efficiency = o.num("efficiency", 1.0);
    b.investable = o.boolean("investable", true);
    return b;
  }

  const ProfileSet& profiles_;
  std::string source_;
  std::size_t periods_ = 0;
};

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < upto; ++i) line += text[i] == '\n';
    throw io::ParseError(source, line, std::string("invalid JSON: ") + e.what());
  }
}

json number_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace

ProfileSet load_profiles(const std::vector<std::filesystem::path>& files) {
  ProfileSet out;
  for (const auto& f : files) {
    const io::Table t = io::read_csv_file(f);
    for (std::size_t j = 0; j < t.header.size(); ++j) {
      if (out.count(t.header[j])) throw io::ParseError(t.source, 1, "profile column '" + t.header[j] + "' already defined by another file");
      out[t.header[j]] = t.numbers(j);
    }
  }
  return out;
}

EnergySystem parse_system(std::string_view json_text, const ProfileSet& profiles, const std::string& source) {
  const json doc = parse_json(json_text, source);
  return Parser(profiles, source).parse(doc);
}

EnergySystem load_system(const std::filesystem::path& json_path, const LoadOptions& options) {
  const std::string text = io::read_text_file(json_path);
  const json doc = parse_json(text, json_path.string());
  const std::filesystem::path dir = options.profiles_dir.value_or(json_path.parent_path());
  std::vector<std::filesystem::path> files;
  if (doc.is_object() && doc.contains("profiles")) {
    const json& p = doc.at("profiles");
    if (!p.is_array()) throw io::ParseError(json_path.string(), 0, "$.profiles: must be an array of CSV file names");
    for (const auto& f : p) {
      if (!f.is_string()) throw io::ParseError(json_path.string(), 0, "$.profiles: entries must be strings");
      files.push_back(dir / f.get<std::string>());
    }
  }
  return Parser(load_profiles(files), json_path.string()).parse(doc);
}

void save_system(const EnergySystem& sys, const std::filesystem::path& dir, const std::string& stem) {
  std::vector<std::pair<std::string, const std::vector<double>*>> cols;
  json doc;
  doc["name"] = sys.name;
  doc["profiles"] = json::array({stem + "_profiles.csv"});
  json slices = json::array();
  for (const auto& s : sys.time.slices) slices.push_back({{"id", s.id}, {"hours", s.hours}, {"weight", s.weight}});
  doc["time"] = {{"hour_duration", sys.time.hour_duration}, {"kappa", sys.time.kappa}, {"slices", slices}};
  doc["policy"] = {{"co2_tax", sys.policy.co2_tax}, {"co2_cap", number_or_inf(sys.policy.co2_cap)}};
  json res = {{"sigma", sys.reserve.sigma}, {"gen_shed_cost", sys.reserve.gen_shed_cost}, {"demand_factor", sys.reserve.demand_factor}};
  if (sys.reserve.load_shed_cost) res["load_shed_cost"] = *sys.reserve.load_shed_cost;
  if (sys.reserve.heat_shed_cost) res["heat_shed_cost"] = *sys.reserve.heat_shed_cost;
  doc["reserve"] = res;

  json locs = json::array();
  for (const auto& l : sys.locations) {
    json j = {{"id", l.id}, {"kind", std::string(to_string(l.kind))}, {"cluster", l.cluster}, {"lat", l.lat}, {"lon", l.lon}};
    if (l.platform) {
      json ts = json::array();
      for (const auto& g : l.platform->turbines) {
        ts.push_back({{"id", g.id}, {"capacity", g.capacity}, {"efficiency", g.efficiency}, {"heat_recovery", g.heat_recovery},
                      {"ramp", g.ramp}, {"fuel_emission", g.fuel_emission}, {"fuel_cost", g.fuel_cost}, {"var_cost", g.var_cost}});
      }
      j["turbines"] = ts;
      const auto& p = l.platform->process;
      json pj = {{"separator_cap", p.separator_cap}, {"separator_heat_coeff", p.separator_heat_coeff},
                 {"export_compressor_cap", p.export_compressor_cap}, {"injection_compressor_cap", p.injection_compressor_cap},
                 {"compression_ratio", p.compression_ratio}, {"polytropic_exponent", p.polytropic_exponent},
                 {"head_density_coeff", p.head_density_coeff}, {"pump_oil_cap", p.pump_oil_cap}, {"pump_oil_coeff", p.pump_oil_coeff},
                 {"pump_water_injection_cap", p.pump_water_injection_cap}, {"pump_water_injection_coeff", p.pump_water_injection_coeff},
                 {"pump_water_lift_cap", p.pump_water_lift_cap}, {"pump_water_lift_coeff", p.pump_water_lift_coeff}};
      auto opt = [&](const char* key, const std::optional<double>& v) {
        if (v) pj[key] = *v;
      };
      opt("compressor_efficiency", p.compressor_efficiency);
      opt("separator_efficiency", p.separator_efficiency);
      opt("pump_oil_efficiency", p.pump_oil_efficiency);
      opt("pump_water_injection_efficiency", p.pump_water_injection_efficiency);
      opt("pump_water_lift_efficiency", p.pump_water_lift_efficiency);
      j["process"] = pj;
      const auto& f = l.platform->flows;
      cols.emplace_back(l.id + ".gas_export", &f.gas_export);
      cols.emplace_back(l.id + ".gas_injection", &f.gas_injection);
      cols.emplace_back(l.id + ".oil", &f.oil);
      cols.emplace_back(l.id + ".water_injection", &f.water_injection);
      cols.emplace_back(l.id + ".water_lift", &f.water_lift);
      if (!f.produced_water.empty()) cols.emplace_back(l.id + ".produced_water", &f.produced_water);
    }
    if (l.hub) {
      j["hub"] = {{"electrolysis_storage", l.hub->electrolysis_storage},
                  {"electrolysis_fuel_cell", l.hub->electrolysis_fuel_cell},
                  {"energy_content", l.hub->energy_content}};
    }
    if (l.onshore) {
      j["pfs_cap_limit"] = l.onshore->pfs_cap_limit;
      cols.emplace_back(l.id + ".price", &l.onshore->price);
    }
    locs.push_back(j);
  }
  doc["locations"] = locs;

  json techs = json::array();
  for (const auto& t : sys.technologies) {
    json j = {{"id", t.id}, {"kind", std::string(to_string(t.kind))}, {"unit_inv_cost", t.unit_inv_cost}, {"fixed_om", t.fixed_om},
              {"fixed_inv_cost", t.fixed_inv_cost}, {"unit_max", t.unit_max}, {"investable", t.investable},
              {"power_ratio", t.power_ratio}, {"ramp", t.ramp}};
    if (t.efficiency) j["efficiency"] = *t.efficiency;
    json sites = json::array();
    for (const auto& s : t.sites) {
      sites.push_back({{"location", s.location}, {"max_units", s.max_units}, {"hist_cap", s.hist_cap}, {"max_cap", number_or_inf(s.max_cap)}});
      if (is_renewable(t.kind)) cols.emplace_back(t.id + "." + s.location, &s.availability);
    }
    j["sites"] = sites;
    techs.push_back(j);
  }
  doc["technologies"] = techs;

  json brs = json::array();
  for (const auto& b : sys.branches) {
    brs.push_back({{"id", b.id}, {"from", b.from}, {"to", b.to}, {"kind", std::string(to_string(b.kind))}, {"length_km", b.length_km},
                   {"unit_inv_cost", b.unit_inv_cost}, {"per_km_fixed", b.per_km_fixed}, {"fixed_inv", b.fixed_inv},
                   {"fixed_om", b.fixed_om}, {"hist_cap", b.hist_cap}, {"max_cap", number_or_inf(b.max_cap)},
                   {"unit_max", b.unit_max}, {"max_cables", b.max_cables}, {"efficiency", b.efficiency}, {"investable", b.investable}});
  }
  doc["branches"] = brs;

  std::ostringstream csv;
  for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c].first;
  csv << '\n';
  std::size_t rows = 0;
  for (const auto& c : cols) rows = std::max(rows, c.second->size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) csv << ',';
      const auto& v = *cols[c].second;
      csv << (r < v.size() ? io::format_number(v[r]) : "0");
    }
    csv << '\n';
  }
  io::write_text_file(dir / (stem + ".json"), doc.dump(2) + "\n");
  io::write_text_file(dir / (stem + "_profiles.csv"), csv.str());
}

}  // namespace oeh::model
