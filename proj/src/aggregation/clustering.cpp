#include "oeh/aggregation/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace oeh::aggregation {

namespace {

using kernels::LatLon;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 unit_vector(LatLon p) {
  const double la = p.lat * std::numbers::pi / 180.0;
  const double lo = p.lon * std::numbers::pi / 180.0;
  return {std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la)};
}

LatLon centroid_of(const std::vector<LatLon>& pts, const std::vector<std::size_t>& members, LatLon fallback) {
  Vec3 s;
  for (std::size_t i : members) {
    const Vec3 u = unit_vector(pts[i]);
    s.x += u.x;
    s.y += u.y;
    s.z += u.z;
  }
  const double norm = std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z);
  if (members.empty() || norm < 1e-12) return fallback;
  return {std::asin(std::clamp(s.z / norm, -1.0, 1.0)) * 180.0 / std::numbers::pi, std::atan2(s.y, s.x) * 180.0 / std::numbers::pi};
}

struct Assignment {
  std::vector<int> cluster;
  std::vector<double> distance;
  double objective = 0.0;
};

Assignment assign(const std::vector<LatLon>& pts, const std::vector<LatLon>& centers) {
  Assignment a;
  a.cluster.assign(pts.size(), 0);
  a.distance.assign(pts.size(), 0.0);
  kernels::nearest_center(pts, centers, a.cluster, a.distance);
  for (double d : a.distance) a.objective += d * d;
  return a;
}

std::vector<std::vector<std::size_t>> members_of(const std::vector<int>& cluster, std::size_t k) {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < cluster.size(); ++i) out[static_cast<std::size_t>(cluster[i])].push_back(i);
  return out;
}

std::vector<LatLon> seed_centers(const std::vector<LatLon>& pts, int k, std::mt19937_64& rng) {
  std::vector<LatLon> centers;
  std::vector<char> chosen(pts.size(), 0);
  std::uniform_int_distribution<std::size_t> first(0, pts.size() - 1);
  const std::size_t f = first(rng);
  centers.push_back(pts[f]);
  chosen[f] = 1;
  std::vector<double> d2(pts.size());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = kernels::haversine_km(pts[i], centers.front());
      for (const auto& c : centers) best = std::min(best, kernels::haversine_km(pts[i], c));
      d2[i] = chosen[i] ? 0.0 : best * best;
      total += d2[i];
    }
    std::size_t pick = pts.size();
    if (total > 0.0) {
      const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      double acc = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > u) break;
      }
    } else {
      for (std::size_t i = 0; i < pts.size() && pick == pts.size(); ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    centers.push_back(pts[pick]);
    chosen[pick] = 1;
  }
  return centers;
}

/// Lloyd passes from the given centers; a pass that would raise the objective is rejected.
Assignment lloyd(const std::vector<LatLon>& pts, std::vector<LatLon>& centers, int max_iterations, ClusterResult& trace) {
  Assignment cur = assign(pts, centers);
  trace.objective_trace.assign(1, cur.objective);
  for (int it = 0; it < max_iterations; ++it) {
    const auto groups = members_of(cur.cluster, centers.size());
    std::vector<LatLon> next(centers.size());
    for (std::size_t c = 0; c < centers.size(); ++c) next[c] = centroid_of(pts, groups[c], centers[c]);
    Assignment cand = assign(pts, next);
    if (cand.objective > cur.objective) break;
    ++trace.iterations;
    const bool stable = cand.cluster == cur.cluster;
    centers = std::move(next);
    cur = std::move(cand);
    trace.objective_trace.push_back(cur.objective);
    if (stable) break;
  }
  return cur;
}

}  // namespace

LatLon spherical_centroid(const std::vector<FieldRecord>& fields, const std::vector<std::size_t>& members) {
  std::vector<LatLon> pts;
  pts.reserve(fields.size());
  for (const auto& f : fields) pts.push_back({f.lat, f.lon});
  return centroid_of(pts, members, members.empty() ? LatLon{} : pts[members.front()]);
}

ClusterResult cluster_fields(const std::vector<FieldRecord>& fields, const ClusterOptions& options) {
  if (fields.empty()) throw ClusteringError("no fields to cluster", {});
  if (options.k < 1 || static_cast<std::size_t>(options.k) > fields.size()) {
    throw ClusteringError("k = " + std::to_string(options.k) + " is outside [1, " + std::to_string(fields.size()) + "]", {});
  }
  std::vector<LatLon> pts;
  pts.reserve(fields.size());
  for (const auto& f : fields) pts.push_back({f.lat, f.lon});

  ClusterResult result;
  std::mt19937_64 rng(options.seed);
  std::vector<LatLon> centers;
  Assignment cur;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    ClusterResult trial;
    std::vector<LatLon> c = seed_centers(pts, options.k, rng);
    Assignment a = lloyd(pts, c, options.max_iterations, trial);
    if (r == 0 || a.objective < cur.objective) {
      centers = std::move(c);
      cur = std::move(a);
      result.objective_trace = std::move(trial.objective_trace);
    }
    result.iterations += trial.iterations;
  }

  while (centers.size() > 1) {
    const auto groups = members_of(cur.cluster, centers.size());
    std::size_t smallest = centers.size();
    for (std::size_t c = 0; c < groups.size(); ++c) {
      if (groups[c].size() < options.min_size && (smallest == centers.size() || groups[c].size() < groups[smallest].size())) smallest = c;
    }
    if (smallest == centers.size()) break;
    std::size_t into = centers.size();
    double best = 0.0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (c == smallest) continue;
      const double d = kernels::haversine_km(centers[smallest], centers[c]);
      if (into == centers.size() || d < best) {
        best = d;
        into = c;
      }
    }
    std::vector<std::size_t> merged = groups[into];
    merged.insert(merged.end(), groups[smallest].begin(), groups[smallest].end());
    centers[into] = centroid_of(pts, merged, centers[into]);
    centers.erase(centers.begin() + static_cast<std::ptrdiff_t>(smallest));
    cur = lloyd(pts, centers, options.max_iterations, result);
  }

  // Drop clusters left empty and number the rest by their lowest member.
  auto groups = members_of(cur.cluster, centers.size());
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (!groups[c].empty()) order.push_back(c);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return groups[a].front() < groups[b].front(); });
  result.assignment.assign(fields.size(), -1);
  std::vector<std::string> far;
  for (std::size_t n = 0; n < order.size(); ++n) {
    Cluster cl;
    cl.lat = centers[order[n]].lat;
    cl.lon = centers[order[n]].lon;
    cl.members = groups[order[n]];
    double sum = 0.0;
    for (std::size_t i : cl.members) {
      result.assignment[i] = static_cast<int>(n);
      sum += cur.distance[i];
      if (cur.distance[i] > options.max_spoke_km) far.push_back(fields[i].id);
    }
    cl.mean_spoke_km = sum / static_cast<double>(cl.members.size());
    result.clusters.push_back(std::move(cl));
  }
  if (!far.empty()) {
    std::sort(far.begin(), far.end());
    std::string msg = "fields farther than " + std::to_string(static_cast<int>(options.max_spoke_km)) + " km from their hub:";
    for (const auto& id : far) msg += " " + id;
    throw ClusteringError(msg, far);
  }
  return result;
}

AggregatedField aggregate_cluster(const std::vector<FieldRecord>& members, double hub_lat, double hub_lon, const std::string& id) {
  if (members.empty()) throw ClusteringError("cannot aggregate an empty cluster", {});
  AggregatedField out;
  FieldRecord& f = out.field;
  f.id = id;
  f.lat = hub_lat;
  f.lon = hub_lon;
  double oil = 0.0;
  double weighted_life = 0.0;
  double plain_life = 0.0;
  for (const auto& m : members) {
    for (Stream s : kAllStreams) {
      for (std::size_t k = 0; k < 12; ++k) f.totals(s)[k] += m.totals(s)[k];
    }
    f.devices.turbine_capacity += m.devices.turbine_capacity;
    f.devices.separator_cap += m.devices.separator_cap;
    f.devices.export_compressor_cap += m.devices.export_compressor_cap;
    f.devices.injection_compressor_cap += m.devices.injection_compressor_cap;
    f.devices.pump_oil_cap += m.devices.pump_oil_cap;
    f.devices.pump_water_injection_cap += m.devices.pump_water_injection_cap;
    f.devices.pump_water_lift_cap += m.devices.pump_water_lift_cap;
    double mo = 0.0;
    for (double v : m.totals(Stream::Oil)) mo += v;
    oil += mo;
    weighted_life += mo * m.lifetime_remaining;
    plain_life += m.lifetime_remaining;
    out.spoke_km += kernels::haversine_km({m.lat, m.lon}, {hub_lat, hub_lon});
  }
  const auto n = static_cast<double>(members.size());
  f.lifetime_remaining = members.size() == 1 ? members.front().lifetime_remaining : oil > 0.0 ? weighted_life / oil : plain_life / n;
  out.spoke_km /= n;
  return out;
}

}  // namespace oeh::aggregation
