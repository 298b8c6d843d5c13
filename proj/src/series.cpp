#include "gpstop/series.hpp"

#include <cmath>
#include <stdexcept>

#include "gpstop/rng.hpp"

namespace gpstop {

PriceSeries normalize(const PriceSeries& series) {
  if (series.length() == 0) {
    throw std::invalid_argument("cannot normalize an empty series");
  }
  const double first = series.values[0];
  if (first == 0.0) {
    throw std::domain_error("cannot normalize series '" + series.id +
                            "': first value is zero");
  }
  PriceSeries out = series;
  out.values /= first;
  return out;
}

PriceSeries warm_window(const PriceSeries& series, Eigen::Index warm_end) {
  if (warm_end < 1 || warm_end > series.length()) {
    throw std::invalid_argument("warm window must lie within the series");
  }
  return {series.id, series.asset, series.values.head(warm_end)};
}

std::pair<std::vector<PriceSeries>, std::vector<PriceSeries>> split_train_test(
    std::vector<PriceSeries> series, double split, std::uint64_t seed) {
  if (series.size() < 2) {
    throw std::invalid_argument("split_train_test requires at least 2 series");
  }
  if (!(split > 0.0 && split < 1.0)) {
    throw std::invalid_argument("train split must lie in (0, 1)");
  }
  Rng rng(seed);
  rng.shuffle(series);
  const auto n_train = static_cast<std::size_t>(
      std::ceil(split * static_cast<double>(series.size())));
  std::vector<PriceSeries> train(series.begin(), series.begin() + static_cast<long>(n_train));
  std::vector<PriceSeries> test(series.begin() + static_cast<long>(n_train), series.end());
  return {std::move(train), std::move(test)};
}

}  // namespace gpstop
