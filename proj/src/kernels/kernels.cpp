#include "oeh/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oeh::kernels {

namespace {

constexpr std::size_t kParallelThreshold = 50'000;

inline double dot_outer(CompressedView m, std::size_t k, std::span<const double> w) {
  double acc = 0.0;
  const int end = m.start[k + 1];
  for (int p = m.start[k]; p < end; ++p) acc += m.value[static_cast<std::size_t>(p)] * w[static_cast<std::size_t>(m.index[static_cast<std::size_t>(p)])];
  return acc;
}

inline void nearest_one(LatLon p, std::span<const LatLon> centers, int& best, double& best_d) {
  best = -1;
  best_d = 0.0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = haversine_km(p, centers[c]);
    if (best < 0 || d < best_d) {
      best = static_cast<int>(c);
      best_d = d;
    }
  }
}

}  // namespace

double haversine_km(LatLon a, LatLon b) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * deg;
  const double dlon = (b.lon - a.lon) * deg;
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(a.lat * deg) * std::cos(b.lat * deg) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

void column_dots_serial(CompressedView csc, std::span<const double> w, std::span<double> out) {
  const std::size_t n = csc.outer_size();
  for (std::size_t j = 0; j < n; ++j) out[j] = dot_outer(csc, j, w);
}

void column_dots_omp(CompressedView csc, std::span<const double> w, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(csc.outer_size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = dot_outer(csc, static_cast<std::size_t>(j), w);
}

void row_activity_serial(CompressedView csr, std::span<const double> x, std::span<double> out) {
  const std::size_t m = csr.outer_size();
  for (std::size_t i = 0; i < m; ++i) out[i] = dot_outer(csr, i, x);
}

void row_activity_omp(CompressedView csr, std::span<const double> x, std::span<double> out) {
  const auto m = static_cast<std::ptrdiff_t>(csr.outer_size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = dot_outer(csr, static_cast<std::size_t>(i), x);
}

void nearest_center_serial(std::span<const LatLon> points, std::span<const LatLon> centers,
                           std::span<int> assignment, std::span<double> distance_km) {
  for (std::size_t i = 0; i < points.size(); ++i) nearest_one(points[i], centers, assignment[i], distance_km[i]);
}

void nearest_center_omp(std::span<const LatLon> points, std::span<const LatLon> centers,
                        std::span<int> assignment, std::span<double> distance_km) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    nearest_one(points[k], centers, assignment[k], distance_km[k]);
  }
}

void column_dots(CompressedView csc, std::span<const double> w, std::span<double> out) {
  if (csc.value.size() >= kParallelThreshold) {
    column_dots_omp(csc, w, out);
  } else {
    column_dots_serial(csc, w, out);
  }
}

void row_activity(CompressedView csr, std::span<const double> x, std::span<double> out) {
  if (csr.value.size() >= kParallelThreshold) {
    row_activity_omp(csr, x, out);
  } else {
    row_activity_serial(csr, x, out);
  }
}

void nearest_center(std::span<const LatLon> points, std::span<const LatLon> centers,
                    std::span<int> assignment, std::span<double> distance_km) {
  if (points.size() * centers.size() >= kParallelThreshold / 10) {
    nearest_center_omp(points, centers, assignment, distance_km);
  } else {
    nearest_center_serial(points, centers, assignment, distance_km);
  }
}

}  // namespace oeh::kernels
