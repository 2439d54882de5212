#pragma once

// k-means on great-circle distances with k-means++ seeding, minimum cluster sizes and the
// hub-and-spoke reduction of each cluster to one aggregated field.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "oeh/aggregation/fields.hpp"
#include "oeh/kernels/kernels.hpp"

namespace oeh::aggregation {

inline constexpr double kMaxSpokeKm = 100.0;

class ClusteringError : public std::runtime_error {
 public:
  ClusteringError(const std::string& what, std::vector<std::string> fields)
      : std::runtime_error(what), fields_(std::move(fields)) {}
  /// Fields that violate the spoke limit (empty for argument errors).
  [[nodiscard]] const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

struct Cluster {
  double lat = 0.0;  ///< hub site
  double lon = 0.0;
  std::vector<std::size_t> members;  ///< indices into the input fields, ascending
  double mean_spoke_km = 0.0;
};

struct ClusterResult {
  std::vector<Cluster> clusters;   ///< ordered by lowest member index
  std::vector<int> assignment;     ///< cluster of each field
  /// Sum of squared distances after each pass of the final Lloyd run of the kept restart.
  std::vector<double> objective_trace;
  int iterations = 0;  ///< accepted Lloyd passes over all runs
};

struct ClusterOptions {
  int k = 1;
  std::size_t min_size = 1;
  std::uint64_t seed = 0;
  int max_iterations = 100;
  int restarts = 10;  ///< independent seedings; the lowest objective wins
  double max_spoke_km = kMaxSpokeKm;
};

/// Deterministic for a fixed seed. Throws ClusteringError when k is out of range or when
/// some field ends up farther than max_spoke_km from its hub.
ClusterResult cluster_fields(const std::vector<FieldRecord>& fields, const ClusterOptions& options);

/// Normalised mean of the points' unit vectors.
kernels::LatLon spherical_centroid(const std::vector<FieldRecord>& fields, const std::vector<std::size_t>& members);

struct AggregatedField {
  FieldRecord field;      ///< flows and capacities summed, located at the hub
  double spoke_km = 0.0;  ///< mean member distance to the hub
};

/// One super-field for a non-empty cluster. Remaining lifetime is the oil-weighted mean
/// (plain mean when the cluster has no oil).
AggregatedField aggregate_cluster(const std::vector<FieldRecord>& members, double hub_lat, double hub_lon, const std::string& id);

}  // namespace oeh::aggregation
