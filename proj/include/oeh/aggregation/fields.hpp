#pragma once

// Field records: location, monthly production totals per stream, remaining lifetime and
// installed device capacities. Read from and written to a flat CSV.

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace oeh::aggregation {

enum class Stream { Oil, GasExport, GasInjection, WaterInjection, WaterLift, ProducedWater };

inline constexpr std::size_t kStreams = 6;
inline constexpr std::array<Stream, kStreams> kAllStreams{Stream::Oil,           Stream::GasExport, Stream::GasInjection,
                                                          Stream::WaterInjection, Stream::WaterLift, Stream::ProducedWater};

std::string_view to_string(Stream s);

using MonthlyTotals = std::array<double, 12>;  ///< kg per calendar month

/// Installed equipment of a field, MW.
struct FieldDevices {
  double turbine_capacity = 0.0;
  double separator_cap = 0.0;
  double export_compressor_cap = 0.0;
  double injection_compressor_cap = 0.0;
  double pump_oil_cap = 0.0;
  double pump_water_injection_cap = 0.0;
  double pump_water_lift_cap = 0.0;
};

struct FieldRecord {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  std::array<MonthlyTotals, kStreams> monthly{};  ///< indexed by Stream
  double lifetime_remaining = 1.0;                ///< fraction in [0, 1]
  FieldDevices devices;

  [[nodiscard]] const MonthlyTotals& totals(Stream s) const { return monthly[static_cast<std::size_t>(s)]; }
  [[nodiscard]] MonthlyTotals& totals(Stream s) { return monthly[static_cast<std::size_t>(s)]; }
};

/// Problems with coordinates, negative totals or lifetimes outside [0, 1]; empty if valid.
std::vector<std::string> check_field(const FieldRecord& f);

/// Columns: id, lat, lon, lifetime, the device capacities, then <stream>_m01..m12 per stream.
/// Throws io::ParseError naming the line for malformed or invalid records.
std::vector<FieldRecord> read_fields_csv(const std::filesystem::path& path);
std::vector<FieldRecord> parse_fields_csv(const std::string& text, const std::string& source);
std::string format_fields_csv(const std::vector<FieldRecord>& fields);

/// Hours in each calendar month of a 365-day year.
const std::array<int, 12>& month_hours();
/// First hour of each calendar month.
int month_start_hour(int month);

}  // namespace oeh::aggregation
