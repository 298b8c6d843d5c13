#include "gpstop/bins.hpp"

#include <cmath>
#include <stdexcept>

namespace gpstop {

BinGrid make_bin_grid_range(double lo, double hi, int num_bins) {
  if (num_bins < 1) {
    throw std::invalid_argument("bin grid needs at least one bin");
  }
  if (!(lo < hi)) {
    throw std::invalid_argument("bin grid range is empty");
  }
  BinGrid grid;
  grid.num_bins = num_bins;
  grid.lo = lo;
  grid.hi = hi;
  grid.edges.resize(num_bins + 1);
  grid.centers.resize(num_bins);
  const double width = (hi - lo) / num_bins;
  for (int i = 0; i <= num_bins; ++i) grid.edges[i] = lo + i * width;
  grid.edges[num_bins] = hi;
  for (int i = 0; i < num_bins; ++i) grid.centers[i] = 0.5 * (grid.edges[i] + grid.edges[i + 1]);
  return grid;
}

BinGrid make_bin_grid(const Eigen::Ref<const Eigen::VectorXd>& prices, int num_bins) {
  if (prices.size() == 0) {
    throw std::invalid_argument("bin grid needs at least one price");
  }
  const double lo = prices.minCoeff();
  const double hi = prices.maxCoeff();
  if (!(lo > 0.0)) {
    throw std::domain_error("bin grid requires strictly positive prices");
  }
  return make_bin_grid_range(0.8 * lo, 1.2 * hi, num_bins);
}

BinGrid mirrored(const BinGrid& grid) {
  BinGrid out;
  out.num_bins = grid.num_bins;
  out.lo = -grid.hi;
  out.hi = -grid.lo;
  out.edges = -grid.edges.reverse();
  out.centers = -grid.centers.reverse();
  return out;
}

BinLocation bin_locate(const BinGrid& grid, double price) {
  if (price < grid.lo) return {0, true};
  if (price >= grid.hi) return {grid.num_bins - 1, true};
  int i = static_cast<int>(std::floor((price - grid.lo) / grid.width()));
  if (i < 0) i = 0;
  if (i >= grid.num_bins) i = grid.num_bins - 1;
  return {i, false};
}

int bin_index(const BinGrid& grid, double price) { return bin_locate(grid, price).index; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

Eigen::VectorXd transition_probs(const PredictiveMarginal& marginal, const BinGrid& grid) {
  if (!(marginal.variance > 0.0)) {
    throw std::domain_error("transition_probs requires positive predictive variance");
  }
  const double sigma = std::sqrt(marginal.variance);
  Eigen::VectorXd cdf(grid.num_bins + 1);
  for (int i = 0; i <= grid.num_bins; ++i) {
    cdf[i] = normal_cdf((grid.edges[i] - marginal.mean) / sigma);
  }
  return cdf.tail(grid.num_bins) - cdf.head(grid.num_bins);
}

}  // namespace gpstop
