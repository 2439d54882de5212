#pragma once

// Synthetic hourly profiles from monthly totals, and representative-slice time structures.
//
// The generator is a stand-in for unpublished production data: each month's total is
// spread over its hours following a template shape, tilted by the field's remaining
// lifetime and perturbed by seeded noise, then rescaled so every month sums to its input.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "oeh/aggregation/fields.hpp"
#include "oeh/model/system.hpp"

namespace oeh::aggregation {

inline constexpr int kYearHours = 8760;

struct ProfileTemplates {
  /// Shape per stream, repeated cyclically over the year; empty means flat.
  std::array<std::vector<double>, kStreams> stream;
  /// Wind capacity-factor shape in [0, 1], repeated cyclically; empty means constant 0.45.
  std::vector<double> wind;
  double noise = 0.05;       ///< half-width of the uniform multiplicative noise on flows
  double wind_noise = 0.10;  ///< same for wind
};

/// Optional columns named after the streams plus "wind"; every shape has the file's row
/// count. Throws io::ParseError for negative values or wind outside [0, 1].
ProfileTemplates read_templates_csv(const std::filesystem::path& path);

struct FieldProfiles {
  std::string field;
  std::array<std::vector<double>, kStreams> hourly;  ///< kg per hour, kYearHours values
  std::vector<double> wind;                          ///< capacity factor per hour

  [[nodiscard]] const std::vector<double>& series(Stream s) const { return hourly[static_cast<std::size_t>(s)]; }
};

/// Deterministic for a fixed seed; field i draws from its own generator stream.
std::vector<FieldProfiles> generate_profiles(const std::vector<FieldRecord>& fields, const ProfileTemplates& templates,
                                             std::uint64_t seed);

/// Calendar-month sums of an hourly year series.
MonthlyTotals monthly_sums(std::span<const double> hourly);

class SliceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SliceStrategy { CalendarMonths };

struct SlicePlan {
  model::TimeStructure time;
  std::vector<int> start_hour;  ///< first hour of the year covered by each slice
};

/// S slices of h hours. CalendarMonths starts slice s at the first hour of month
/// floor(12 s / S); weights are 8760 / (S h). Throws SliceError if S h > 8760, S > 12 or a
/// slice would run past the end of the year.
SlicePlan build_time_slices(int slices, int hours, SliceStrategy strategy = SliceStrategy::CalendarMonths);

/// The hours of `hourly` covered by the plan, slice after slice.
std::vector<double> slice_series(std::span<const double> hourly, const SlicePlan& plan);

}  // namespace oeh::aggregation
