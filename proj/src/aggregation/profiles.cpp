#include "oeh/aggregation/profiles.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "oeh/io/csv.hpp"

namespace oeh::aggregation {

namespace {

constexpr double kDefaultWind = 0.45;

/// Template value at hour t, scaled so the cyclic shape has mean 1.
double shape_at(const std::vector<double>& shape, double mean, int t) {
  if (shape.empty() || mean <= 0.0) return 1.0;
  return shape[static_cast<std::size_t>(t) % shape.size()] / mean;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

ProfileTemplates read_templates_csv(const std::filesystem::path& path) {
  const io::Table table = io::read_csv_file(path);
  ProfileTemplates out;
  for (Stream s : kAllStreams) {
    if (auto c = table.column(to_string(s))) {
      out.stream[static_cast<std::size_t>(s)] = table.numbers(*c);
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (out.stream[static_cast<std::size_t>(s)][r] < 0.0) {
          throw io::ParseError(table.source, table.line_numbers[r], "negative template value for " + std::string(to_string(s)));
        }
      }
    }
  }
  if (auto c = table.column("wind")) {
    out.wind = table.numbers(*c);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      if (out.wind[r] < 0.0 || out.wind[r] > 1.0) throw io::ParseError(table.source, table.line_numbers[r], "wind template outside [0, 1]");
    }
  }
  return out;
}

MonthlyTotals monthly_sums(std::span<const double> hourly) {
  MonthlyTotals out{};
  int t = 0;
  for (std::size_t m = 0; m < 12; ++m) {
    for (int h = 0; h < month_hours()[m] && t < static_cast<int>(hourly.size()); ++h, ++t) out[m] += hourly[static_cast<std::size_t>(t)];
  }
  return out;
}

std::vector<FieldProfiles> generate_profiles(const std::vector<FieldRecord>& fields, const ProfileTemplates& templates,
                                             std::uint64_t seed) {
  std::array<double, kStreams> means{};
  for (std::size_t k = 0; k < kStreams; ++k) means[k] = mean_of(templates.stream[k]);

  std::vector<FieldProfiles> out;
  out.reserve(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const FieldRecord& f = fields[i];
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    FieldProfiles p;
    p.field = f.id;
    const double tilt = 0.5 * (1.0 - f.lifetime_remaining);
    for (Stream s : kAllStreams) {
      const auto k = static_cast<std::size_t>(s);
      auto& v = p.hourly[k];
      v.assign(kYearHours, 0.0);
      int t = 0;
      for (std::size_t m = 0; m < 12; ++m) {
        const int hours = month_hours()[m];
        const double total = f.monthly[k][m];
        const double average = total / hours;
        double sum = 0.0;
        for (int h = 0; h < hours; ++h) {
          const double decline = 1.0 - tilt * static_cast<double>(t + h) / kYearHours;
          const double noise = 1.0 + templates.noise * unit(rng);
          const double x = average * shape_at(templates.stream[k], means[k], t + h) * decline * std::max(0.0, noise);
          v[static_cast<std::size_t>(t + h)] = x;
          sum += x;
        }
        const double scale = sum > 0.0 ? total / sum : 0.0;
        for (int h = 0; h < hours; ++h) {
          auto& x = v[static_cast<std::size_t>(t + h)];
          x = sum > 0.0 ? x * scale : average;
        }
        t += hours;
      }
    }
    p.wind.assign(kYearHours, 0.0);
    for (int t = 0; t < kYearHours; ++t) {
      const double base = templates.wind.empty() ? kDefaultWind : templates.wind[static_cast<std::size_t>(t) % templates.wind.size()];
      p.wind[static_cast<std::size_t>(t)] = std::clamp(base * (1.0 + templates.wind_noise * unit(rng)), 0.0, 1.0);
    }
    out.push_back(std::move(p));
  }
  return out;
}

SlicePlan build_time_slices(int slices, int hours, SliceStrategy strategy) {
  if (slices < 1 || hours < 1) throw SliceError("need at least one slice of at least one hour");
  if (static_cast<long long>(slices) * hours > kYearHours) {
    throw SliceError(std::to_string(slices) + " slices of " + std::to_string(hours) + " h exceed the 8760 h year");
  }
  SlicePlan plan;
  switch (strategy) {
    case SliceStrategy::CalendarMonths: {
      if (slices > 12) throw SliceError("calendar-month slices need S <= 12");
      const double weight = static_cast<double>(kYearHours) / (static_cast<double>(slices) * hours);
      for (int s = 0; s < slices; ++s) {
        const int month = 12 * s / slices;
        const int start = month_start_hour(month);
        if (start + hours > kYearHours) throw SliceError("slice starting in month " + std::to_string(month + 1) + " runs past the year end");
        plan.start_hour.push_back(start);
        static const char* names[] = {"jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
        plan.time.slices.push_back({names[month], hours, weight});
      }
      break;
    }
  }
  return plan;
}

std::vector<double> slice_series(std::span<const double> hourly, const SlicePlan& plan) {
  std::vector<double> out;
  for (std::size_t s = 0; s < plan.start_hour.size(); ++s) {
    const int start = plan.start_hour[s];
    const int len = plan.time.slices[s].hours;
    if (start + len > static_cast<int>(hourly.size())) throw SliceError("series shorter than the slice plan");
    out.insert(out.end(), hourly.begin() + start, hourly.begin() + start + len);
  }
  return out;
}

}  // namespace oeh::aggregation
