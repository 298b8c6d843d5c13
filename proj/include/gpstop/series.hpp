#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gpstop {

/// One asset-price path over a discrete time grid; position p holds the
/// price at time index p + 1.
struct PriceSeries {
  std::string id;
  std::string asset;
  Eigen::VectorXd values;

  Eigen::Index length() const { return values.size(); }
};

/// Divides every value by the first one. Idempotent; throws
/// std::domain_error when the first value is zero.
PriceSeries normalize(const PriceSeries& series);

/// Prefix of the series covering the warm-start window {1..warm_end}.
PriceSeries warm_window(const PriceSeries& series, Eigen::Index warm_end);

/// Seeded shuffle, then the first ceil(split * N) series go to train and the
/// rest to test. Disjoint and exhaustive.
std::pair<std::vector<PriceSeries>, std::vector<PriceSeries>> split_train_test(
    std::vector<PriceSeries> series, double split, std::uint64_t seed);

}  // namespace gpstop
