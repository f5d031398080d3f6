#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meetrec/geo.hpp"

namespace meetrec {

struct ClusterPoint {
  std::string user_id;
  std::int64_t timestamp = 0;
  GeoPoint point;
};

struct DbscanParams {
  double radius_m = 20.0;  // neighborhood radius (meters)
  int min_samples = 40;    // core threshold, the point itself included
};

inline constexpr int kNoise = -1;

/// Density clustering over merged group traces with haversine neighborhoods.
/// Returns one label per input point (kNoise or a 0-based cluster index).
/// Labels are invariant under permutation of the input: points are seeded in
/// ascending (user_id, timestamp, lat, lon) order, and a border point in
/// range of several clusters goes to the one seeded first in that order.
std::vector<int> dbscan(std::span<const ClusterPoint> points, const DbscanParams& params);

struct LocationCluster {
  int cluster_id = 0;
  GeoPoint centroid;  // arithmetic mean of member coordinates
  std::size_t total_points = 0;
  std::map<std::string, std::size_t> visits_per_user;
};

struct ClusterSet {
  std::vector<LocationCluster> clusters;  // ordered by cluster_id
  std::vector<int> point_labels;          // per input point, relabelled ids
};

/// Aggregate dbscan output into clusters. Ids are assigned by descending
/// total_points, ties broken by earlier mean member timestamp, then by
/// centroid. point_labels are remapped accordingly.
ClusterSet build_clusters(std::span<const ClusterPoint> points, std::span<const int> labels);

/// Per-user share of clustered points in each cluster. All-zero when the user
/// has no clustered points.
std::vector<double> familiarity_vector(const std::string& user_id, const ClusterSet& set);

/// Closest cluster by centroid distance; ties go to the smaller cluster_id.
/// nullopt when there are no clusters.
std::optional<std::pair<int, double>> nearest_cluster(const GeoPoint& p, const ClusterSet& set);

// ---- dump format ----------------------------------------------------------

/// "group_id,cluster_id,lat,lon,total_points" rows, one block per group.
void write_cluster_summary(std::ostream& out,
                           const std::map<std::string, ClusterSet>& by_group);

/// "group_id,cluster_id,user_id,count" membership rows.
void write_cluster_membership(std::ostream& out,
                              const std::map<std::string, ClusterSet>& by_group);

}  // namespace meetrec
