#include "gpstop/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpstop {
namespace {

int stop_threshold(const Eigen::VectorXd& centers, double continuation) {
  const double* begin = centers.data();
  const double* end = begin + centers.size();
  return static_cast<int>(std::lower_bound(begin, end, continuation) - begin);
}

}  // namespace

ValueTable backward_induction_probs(const BinGrid& grid,
                                    const std::vector<Eigen::VectorXd>& probs_into,
                                    int first_time) {
  const auto rows = static_cast<Eigen::Index>(probs_into.size()) + 1;
  const Eigen::Index m = grid.num_bins;
  for (const auto& p : probs_into) {
    if (p.size() != m) {
      throw std::invalid_argument("transition vector length does not match the grid");
    }
  }

  ValueTable table;
  table.first_time = first_time;
  table.horizon = first_time + static_cast<int>(rows) - 1;
  table.values.resize(rows, m);
  table.continuation.resize(rows);
  table.values.row(rows - 1) = grid.centers.transpose();
  table.continuation[rows - 1] = -std::numeric_limits<double>::infinity();
  for (Eigen::Index r = rows - 2; r >= 0; --r) {
    const double cont = table.values.row(r + 1).dot(probs_into[r]);
    table.continuation[r] = cont;
    table.values.row(r) = grid.centers.array().max(cont).transpose();
  }
  return table;
}

ValueTable backward_induction(const std::vector<PredictiveMarginal>& marginals,
                              const BinGrid& grid) {
  if (marginals.empty()) {
    throw std::invalid_argument("backward induction needs at least one time step");
  }
  for (std::size_t i = 1; i < marginals.size(); ++i) {
    if (marginals[i].time != marginals[i - 1].time + 1.0) {
      throw std::invalid_argument("predictive marginals must cover consecutive times");
    }
  }
  std::vector<Eigen::VectorXd> probs_into;
  probs_into.reserve(marginals.size() - 1);
  for (std::size_t i = 1; i < marginals.size(); ++i) {
    probs_into.push_back(transition_probs(marginals[i], grid));
  }
  return backward_induction_probs(grid, probs_into, static_cast<int>(marginals.front().time));
}

StoppingPolicy extract_policy(const ValueTable& table, const BinGrid& grid) {
  StoppingPolicy policy;
  policy.first_time = table.first_time;
  policy.num_bins = grid.num_bins;
  policy.thresholds.resize(static_cast<std::size_t>(table.rows()));
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    policy.thresholds[static_cast<std::size_t>(r)] =
        stop_threshold(grid.centers, table.continuation[r]);
  }
  return policy;
}

double ValuePMF::total_mass() const {
  double m = atom_mass;
  for (const auto& [value, mass] : upper_support) m += mass;
  return m;
}

double ValuePMF::mean() const {
  double m = atom_value * atom_mass;
  for (const auto& [value, mass] : upper_support) m += value * mass;
  return m;
}

ValuePMF value_pmf(const ValueTable& table, const BinGrid& grid,
                   const Eigen::Ref<const Eigen::VectorXd>& bin_probs, int time) {
  if (time >= table.horizon || time < table.first_time) {
    throw std::invalid_argument("value_pmf requires a decision time before the horizon");
  }
  if (bin_probs.size() != grid.num_bins) {
    throw std::invalid_argument("bin probability vector does not match the grid");
  }
  ValuePMF pmf;
  pmf.time = time;
  pmf.atom_value = table.continuation[table.row_for_time(time)];
  for (Eigen::Index i = 0; i < grid.num_bins; ++i) {
    if (grid.centers[i] <= pmf.atom_value) {
      pmf.atom_mass += bin_probs[i];
    } else {
      pmf.upper_support.emplace_back(grid.centers[i], bin_probs[i]);
    }
  }
  return pmf;
}

Eigen::VectorXd sos_values(const std::vector<PriceSeries>& training) {
  if (training.empty()) {
    throw std::invalid_argument("sos_values requires at least one training series");
  }
  const Eigen::Index horizon = training.front().length();
  for (const auto& s : training) {
    if (s.length() != horizon) {
      throw std::invalid_argument("sos_values requires a shared horizon");
    }
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(horizon);
  for (const auto& s : training) {
    double running = -std::numeric_limits<double>::infinity();
    for (Eigen::Index t = horizon - 1; t >= 0; --t) {
      running = std::max(running, s.values[t]);
      values[t] += running;
    }
  }
  return values / static_cast<double>(training.size());
}

StoppingPolicy sos_policy(const Eigen::Ref<const Eigen::VectorXd>& values, const BinGrid& grid,
                          int first_time) {
  if (values.size() == 0) {
    throw std::invalid_argument("sos_policy requires at least one value");
  }
  StoppingPolicy policy;
  policy.first_time = first_time;
  policy.num_bins = grid.num_bins;
  policy.thresholds.resize(static_cast<std::size_t>(values.size()));
  for (Eigen::Index r = 0; r < values.size(); ++r) {
    policy.thresholds[static_cast<std::size_t>(r)] = stop_threshold(grid.centers, values[r]);
  }
  policy.thresholds.back() = 0;  // must stop at the horizon
  return policy;
}

}  // namespace gpstop
