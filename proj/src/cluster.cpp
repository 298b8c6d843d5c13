#include "gpstop/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gpstop/dtw.hpp"
#include "gpstop/rng.hpp"

namespace gpstop {
namespace {

double total_squared_cost(const Eigen::VectorXd& centroid,
                          const std::vector<Eigen::VectorXd>& members) {
  double total = 0.0;
  for (const auto& m : members) {
    const double d = dtw_distance(centroid, m);
    total += d * d;
  }
  return total;
}

Eigen::VectorXd dba_update(const Eigen::VectorXd& centroid,
                           const std::vector<Eigen::VectorXd>& members) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(centroid.size());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(centroid.size());
  for (const auto& m : members) {
    for (const auto& [i, j] : dtw_path(centroid, m)) {
      sums[i] += m[j];
      counts[i] += 1.0;
    }
  }
  // A monotone path from (0,0) to (L-1, n-1) touches every centroid index.
  return sums.cwiseQuotient(counts);
}

}  // namespace

ReturnSeries log_returns(const PriceSeries& series, int delta_t) {
  if (delta_t < 1) {
    throw std::invalid_argument("delta_t must be at least 1");
  }
  if (static_cast<Eigen::Index>(delta_t) >= series.length()) {
    throw std::invalid_argument("delta_t must be smaller than the series length");
  }
  if ((series.values.array() <= 0.0).any()) {
    throw std::domain_error("log returns require strictly positive prices (series '" +
                            series.id + "')");
  }
  const Eigen::Index n = series.length() - delta_t;
  ReturnSeries out{series.id, delta_t, Eigen::VectorXd(n)};
  for (Eigen::Index t = 0; t < n; ++t) {
    out.values[t] = std::log(series.values[t + delta_t]) - std::log(series.values[t]);
  }
  return out;
}

Eigen::VectorXd dba_centroid(const std::vector<Eigen::VectorXd>& members,
                             const Eigen::Ref<const Eigen::VectorXd>& init,
                             int max_iterations, double tolerance) {
  if (members.empty()) {
    throw std::invalid_argument("dba_centroid requires at least one member");
  }
  if (init.size() == 0) {
    throw std::invalid_argument("dba_centroid requires a non-empty init");
  }
  for (const auto& m : members) {
    if (m.size() != members.front().size()) {
      throw std::invalid_argument("dba_centroid members must share one length");
    }
    if (m.size() == 0) {
      throw std::invalid_argument("dba_centroid members must be non-empty");
    }
  }

  Eigen::VectorXd centroid = init;
  Eigen::VectorXd best = centroid;
  double best_cost = total_squared_cost(centroid, members);
  double prev_cost = best_cost;
  for (int iter = 0; iter < max_iterations; ++iter) {
    centroid = dba_update(centroid, members);
    const double cost = total_squared_cost(centroid, members);
    if (cost < best_cost) {
      best = centroid;
      best_cost = cost;
    }
    if (prev_cost - cost < tolerance * std::max(prev_cost, 1e-300)) break;
    prev_cost = cost;
  }
  return best;
}

ReturnStats return_stats(const std::vector<ReturnSeries>& member_returns) {
  Eigen::Index n = 0;
  for (const auto& r : member_returns) n += r.values.size();
  if (n == 0) {
    throw std::invalid_argument("return_stats requires at least one return value");
  }
  double mean = 0.0;
  for (const auto& r : member_returns) mean += r.values.sum();
  mean /= static_cast<double>(n);

  double m2 = 0.0;
  double m4 = 0.0;
  for (const auto& r : member_returns) {
    const Eigen::ArrayXd d = r.values.array() - mean;
    m2 += (d * d).sum();
    m4 += (d * d * d * d).sum();
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);

  ReturnStats stats;
  stats.volatility = std::sqrt(m2);
  if (m2 <= 0.0) {
    stats.degenerate = true;
    stats.kurtosis = 0.0;
  } else {
    stats.kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return stats;
}

std::vector<Cluster> cluster_kmeans_dtw(const std::vector<ReturnSeries>& returns, int k,
                                        std::uint64_t seed, int max_iterations,
                                        int dba_max_iterations) {
  const std::size_t n = returns.size();
  if (n == 0) {
    throw std::invalid_argument("cluster_kmeans_dtw requires at least one series");
  }
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw std::invalid_argument("cluster count must lie in [1, number of series]");
  }
  for (const auto& r : returns) {
    if (r.values.size() != returns.front().values.size() || r.values.size() == 0) {
      throw std::invalid_argument("cluster_kmeans_dtw requires equal-length return series");
    }
  }

  auto build_cluster = [&](std::vector<std::size_t> indices, Eigen::VectorXd centroid) {
    Cluster c;
    std::sort(indices.begin(), indices.end());
    c.member_indices = std::move(indices);
    std::vector<ReturnSeries> member_returns;
    for (std::size_t i : c.member_indices) {
      c.member_ids.push_back(returns[i].source_id);
      member_returns.push_back(returns[i]);
    }
    c.centroid_returns = {"centroid", returns.front().delta_t, std::move(centroid)};
    c.stats = return_stats(member_returns);
    return c;
  };

  if (k == 1) {
    std::vector<Eigen::VectorXd> all;
    for (const auto& r : returns) all.push_back(r.values);
    Eigen::VectorXd centroid = dba_centroid(all, returns.front().values, dba_max_iterations);
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    return {build_cluster(std::move(indices), std::move(centroid))};
  }

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    std::swap(order[i], order[i + rng.index(n - i)]);
  }
  std::vector<Eigen::VectorXd> centroids;
  for (int c = 0; c < k; ++c) centroids.push_back(returns[order[c]].values);

  std::vector<int> assignment(n, -1);
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::vector<int> next(n, 0);
    std::vector<double> dist(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double d_best = std::numeric_limits<double>::infinity();
      int c_best = 0;
      for (int c = 0; c < k; ++c) {
        const double d = dtw_distance(returns[i].values, centroids[c]);
        if (d < d_best) {
          d_best = d;
          c_best = c;
        }
      }
      next[i] = c_best;
      dist[i] = d_best;
    }

    std::vector<std::size_t> counts(k, 0);
    for (int c : next) ++counts[c];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t farthest = 0;
      double d_max = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[next[i]] > 1 && dist[i] > d_max) {
          d_max = dist[i];
          farthest = i;
        }
      }
      --counts[next[farthest]];
      next[farthest] = c;
      ++counts[c];
      dist[farthest] = 0.0;
      centroids[c] = returns[farthest].values;
    }

    if (next == assignment) break;
    assignment = next;

    for (int c = 0; c < k; ++c) {
      std::vector<Eigen::VectorXd> members;
      for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i] == c) members.push_back(returns[i].values);
      }
      centroids[c] = dba_centroid(members, centroids[c], dba_max_iterations);
    }
  }

  std::vector<Cluster> clusters;
  for (int c = 0; c < k; ++c) {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < n; ++i) {
      if (assignment[i] == c) indices.push_back(i);
    }
    clusters.push_back(build_cluster(std::move(indices), std::move(centroids[c])));
  }
  return clusters;
}

std::size_t assign_cluster(const ReturnSeries& test_returns,
                           const std::vector<Cluster>& clusters) {
  if (clusters.empty()) {
    throw std::invalid_argument("assign_cluster requires at least one cluster");
  }
  std::size_t best = 0;
  double d_best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const double d = dtw_distance(test_returns.values, clusters[c].centroid_returns.values);
    if (d < d_best) {
      d_best = d;
      best = c;
    }
  }
  return best;
}

}  // namespace gpstop
