#pragma once

// Data-parallel inner loops shared by the solver, the validator and the clustering code.
// Each kernel has a serial reference and an OpenMP variant; both compute every output
// element with the same sequential inner loop, so their results are bitwise identical.

#include <cstddef>
#include <span>

namespace oeh::kernels {

/// Borrowed view of a compressed sparse matrix (CSC or CSR, depending on the kernel).
struct CompressedView {
  std::span<const int> start;
  std::span<const int> index;
  std::span<const double> value;

  [[nodiscard]] std::size_t outer_size() const { return start.empty() ? 0 : start.size() - 1; }
};

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

/// out[j] = sum_i a(i, j) * w[i] for every column j of a CSC matrix.
void column_dots_serial(CompressedView csc, std::span<const double> w, std::span<double> out);
void column_dots_omp(CompressedView csc, std::span<const double> w, std::span<double> out);

/// out[i] = sum_j a(i, j) * x[j] for every row i of a CSR matrix.
void row_activity_serial(CompressedView csr, std::span<const double> x, std::span<double> out);
void row_activity_omp(CompressedView csr, std::span<const double> x, std::span<double> out);

/// For every point, the index of the nearest center by great-circle distance (lowest index
/// on ties) and that distance in km.
void nearest_center_serial(std::span<const LatLon> points, std::span<const LatLon> centers,
                           std::span<int> assignment, std::span<double> distance_km);
void nearest_center_omp(std::span<const LatLon> points, std::span<const LatLon> centers,
                        std::span<int> assignment, std::span<double> distance_km);

/// Dispatchers: OpenMP above a size threshold, serial below it.
void column_dots(CompressedView csc, std::span<const double> w, std::span<double> out);
void row_activity(CompressedView csr, std::span<const double> x, std::span<double> out);
void nearest_center(std::span<const LatLon> points, std::span<const LatLon> centers,
                    std::span<int> assignment, std::span<double> distance_km);

/// Great-circle distance on a sphere of radius 6371 km.
double haversine_km(LatLon a, LatLon b);

inline constexpr double kEarthRadiusKm = 6371.0;

}  // namespace oeh::kernels
