#pragma once

// Assembles a solvable system from clustered fields: per cluster one aggregated platform,
// one hub and one onshore bus, joined radially.

#include <filesystem>
#include <string>
#include <vector>

#include "oeh/aggregation/clustering.hpp"
#include "oeh/aggregation/profiles.hpp"
#include "oeh/model/system.hpp"

namespace oeh::aggregation {

struct OnshoreSite {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  double price = 140.0;         ///< mean electricity price per MWh
  double pfs_cap_limit = 400.0;
};

/// A handful of Norwegian west-coast landing points.
const std::vector<OnshoreSite>& default_onshore_sites();

/// Columns: id, lat, lon, price, pfs_cap_limit.
std::vector<OnshoreSite> read_onshore_sites_csv(const std::filesystem::path& path);

struct HubAndSpokeOptions {
  int slices = 4;
  int hours = 24;
  double kappa = 20.0;
  double co2_tax = 55.0;
  double price_swing = 20.0;  ///< amplitude of the daily price wave
};

/// Regions: F<c> (aggregated platform), H<c> (hub) and O<c> (onshore bus at the site
/// nearest to the hub) for every cluster c = 1..k. Flows and wind availability come from
/// the member profiles cut to the slice plan. Throws std::invalid_argument for empty sites
/// or profiles that do not match the fields.
model::EnergySystem build_hub_and_spoke(const std::vector<FieldRecord>& fields, const ClusterResult& clusters,
                                        const std::vector<FieldProfiles>& profiles, const std::vector<OnshoreSite>& sites,
                                        const HubAndSpokeOptions& options = {});

}  // namespace oeh::aggregation
