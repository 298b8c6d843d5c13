#pragma once

#include <Eigen/Core>

#include "gpstop/gp.hpp"

namespace gpstop {

/// M equal-width half-open price bins [edge_i, edge_{i+1}) covering
/// (lo, hi); bin indices are 0-based.
struct BinGrid {
  int num_bins = 0;
  double lo = 0.0;
  double hi = 0.0;
  Eigen::VectorXd edges;    // num_bins + 1, ascending
  Eigen::VectorXd centers;  // num_bins, midpoints

  double width() const { return (hi - lo) / num_bins; }
};

/// Grid over (0.8 * min(prices), 1.2 * max(prices)). Prices must be
/// strictly positive and non-empty.
BinGrid make_bin_grid(const Eigen::Ref<const Eigen::VectorXd>& prices, int num_bins);

/// Grid over an explicit range; lo < hi required.
BinGrid make_bin_grid_range(double lo, double hi, int num_bins);

/// The same grid reflected about zero, for stopping on negated prices.
BinGrid mirrored(const BinGrid& grid);

struct BinLocation {
  int index = 0;
  bool clamped = false;  // price fell outside [lo, hi) and was clamped to an edge bin
};

BinLocation bin_locate(const BinGrid& grid, double price);
int bin_index(const BinGrid& grid, double price);

/// Standard normal CDF.
double normal_cdf(double z);

/// Per-bin mass of the predictive Normal: p_j = Phi((edge_{j+1} - mu)/sigma)
/// - Phi((edge_j - mu)/sigma). Mass outside the grid is dropped, so the
/// entries sum to at most 1.
Eigen::VectorXd transition_probs(const PredictiveMarginal& marginal, const BinGrid& grid);

}  // namespace gpstop
