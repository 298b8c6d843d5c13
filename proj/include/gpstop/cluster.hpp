#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "gpstop/series.hpp"

namespace gpstop {

/// Log returns r_t = log y_{t + delta_t} - log y_t of one price series.
struct ReturnSeries {
  std::string source_id;
  int delta_t = 1;
  Eigen::VectorXd values;
};

/// Throws std::domain_error on non-positive prices, std::invalid_argument
/// when delta_t does not leave at least one return.
ReturnSeries log_returns(const PriceSeries& series, int delta_t = 1);

/// DTW barycenter averaging: re-aligns members to the current barycenter and
/// averages the values aligned to each coordinate, until the total squared
/// DTW cost stops decreasing (relative tolerance) or max_iterations is hit.
/// Returns the best iterate. Deterministic given init.
Eigen::VectorXd dba_centroid(const std::vector<Eigen::VectorXd>& members,
                             const Eigen::Ref<const Eigen::VectorXd>& init,
                             int max_iterations = 30, double tolerance = 1e-6);

struct ReturnStats {
  double volatility = 0.0;  // population standard deviation of pooled returns
  double kurtosis = 0.0;    // pooled excess kurtosis; 0 when degenerate
  bool degenerate = false;  // set when the pooled variance is zero
};

/// Pooled volatility and excess kurtosis over all member return values.
ReturnStats return_stats(const std::vector<ReturnSeries>& member_returns);

struct Cluster {
  std::vector<std::size_t> member_indices;  // into the clustering input list
  std::vector<std::string> member_ids;
  ReturnSeries centroid_returns;
  PriceSeries centroid_prices;  // full-horizon price barycenter, filled by the harness
  ReturnStats stats;
};

/// DTW k-means on return series: assign to the nearest centroid under
/// dtw_distance, recompute centroids with dba_centroid, iterate until the
/// assignment stabilizes. Centroids are seeded from k member series sampled
/// without replacement; an emptied cluster is re-seeded from the series
/// farthest from its assigned centroid. k = 1 short-circuits to a single
/// barycenter. Deterministic given seed.
std::vector<Cluster> cluster_kmeans_dtw(const std::vector<ReturnSeries>& returns, int k,
                                        std::uint64_t seed, int max_iterations = 50,
                                        int dba_max_iterations = 30);

/// Index of the cluster whose return centroid is DTW-nearest to
/// test_returns; ties break toward the lowest index.
std::size_t assign_cluster(const ReturnSeries& test_returns,
                           const std::vector<Cluster>& clusters);

}  // namespace gpstop
