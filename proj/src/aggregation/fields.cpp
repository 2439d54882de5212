#include "oeh/aggregation/fields.hpp"

#include <cmath>
#include <sstream>

#include "oeh/io/csv.hpp"

namespace oeh::aggregation {

namespace {

struct DeviceColumn {
  const char* name;
  double FieldDevices::*member;
};

constexpr DeviceColumn kDeviceColumns[] = {
    {"turbine_capacity", &FieldDevices::turbine_capacity},
    {"separator_cap", &FieldDevices::separator_cap},
    {"export_compressor_cap", &FieldDevices::export_compressor_cap},
    {"injection_compressor_cap", &FieldDevices::injection_compressor_cap},
    {"pump_oil_cap", &FieldDevices::pump_oil_cap},
    {"pump_water_injection_cap", &FieldDevices::pump_water_injection_cap},
    {"pump_water_lift_cap", &FieldDevices::pump_water_lift_cap},
};

std::string month_column(Stream s, int m) {
  std::string out(to_string(s));
  out += m < 9 ? "_m0" : "_m";
  out += std::to_string(m + 1);
  return out;
}

}  // namespace

std::string_view to_string(Stream s) {
  switch (s) {
    case Stream::Oil: return "oil";
    case Stream::GasExport: return "gas_export";
    case Stream::GasInjection: return "gas_injection";
    case Stream::WaterInjection: return "water_injection";
    case Stream::WaterLift: return "water_lift";
    case Stream::ProducedWater: return "produced_water";
  }
  return "?";
}

const std::array<int, 12>& month_hours() {
  static const std::array<int, 12> hours{744, 672, 744, 720, 744, 720, 744, 744, 720, 744, 720, 744};
  return hours;
}

int month_start_hour(int month) {
  int h = 0;
  for (int m = 0; m < month; ++m) h += month_hours()[static_cast<std::size_t>(m)];
  return h;
}

std::vector<std::string> check_field(const FieldRecord& f) {
  std::vector<std::string> out;
  if (f.id.empty()) out.push_back("empty field id");
  if (!(f.lat >= -90.0 && f.lat <= 90.0) || !(f.lon >= -180.0 && f.lon <= 180.0)) {
    out.push_back("field '" + f.id + "': coordinates out of range");
  }
  if (!(f.lifetime_remaining >= 0.0 && f.lifetime_remaining <= 1.0)) out.push_back("field '" + f.id + "': lifetime outside [0, 1]");
  for (Stream s : kAllStreams) {
    for (double v : f.totals(s)) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        out.push_back("field '" + f.id + "': negative or non-finite " + std::string(to_string(s)) + " total");
        break;
      }
    }
  }
  for (const auto& c : kDeviceColumns) {
    if (!(f.devices.*c.member >= 0.0)) out.push_back("field '" + f.id + "': negative " + c.name);
  }
  return out;
}

std::vector<FieldRecord> parse_fields_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  const io::Table table = io::read_csv(in, source);
  auto need = [&](const std::string& name) {
    auto c = table.column(name);
    if (!c) throw io::ParseError(source, 1, "missing column '" + name + "'");
    return *c;
  };
  const std::size_t c_id = need("id");
  const std::size_t c_lat = need("lat");
  const std::size_t c_lon = need("lon");
  const std::size_t c_life = need("lifetime");
  std::vector<std::size_t> c_dev;
  for (const auto& d : kDeviceColumns) c_dev.push_back(need(d.name));
  std::array<std::array<std::size_t, 12>, kStreams> c_month{};
  for (Stream s : kAllStreams) {
    for (int m = 0; m < 12; ++m) c_month[static_cast<std::size_t>(s)][static_cast<std::size_t>(m)] = need(month_column(s, m));
  }

  std::vector<FieldRecord> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    FieldRecord f;
    f.id = table.rows[r][c_id];
    f.lat = table.number(r, c_lat);
    f.lon = table.number(r, c_lon);
    f.lifetime_remaining = table.number(r, c_life);
    for (std::size_t k = 0; k < c_dev.size(); ++k) f.devices.*kDeviceColumns[k].member = table.number(r, c_dev[k]);
    for (Stream s : kAllStreams) {
      for (std::size_t m = 0; m < 12; ++m) f.totals(s)[m] = table.number(r, c_month[static_cast<std::size_t>(s)][m]);
    }
    const auto problems = check_field(f);
    if (!problems.empty()) throw io::ParseError(source, table.line_numbers[r], problems.front());
    for (const auto& g : out) {
      if (g.id == f.id) throw io::ParseError(source, table.line_numbers[r], "duplicate field id '" + f.id + "'");
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<FieldRecord> read_fields_csv(const std::filesystem::path& path) {
  return parse_fields_csv(io::read_text_file(path), path.string());
}

std::string format_fields_csv(const std::vector<FieldRecord>& fields) {
  std::string out = "id,lat,lon,lifetime";
  for (const auto& d : kDeviceColumns) out += std::string(",") + d.name;
  for (Stream s : kAllStreams) {
    for (int m = 0; m < 12; ++m) out += "," + month_column(s, m);
  }
  out += '\n';
  for (const auto& f : fields) {
    out += f.id + "," + io::format_number(f.lat) + "," + io::format_number(f.lon) + "," + io::format_number(f.lifetime_remaining);
    for (const auto& d : kDeviceColumns) out += "," + io::format_number(f.devices.*d.member);
    for (Stream s : kAllStreams) {
      for (double v : f.totals(s)) out += "," + io::format_number(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace oeh::aggregation
