#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "gpstop/bins.hpp"
#include "gpstop/series.hpp"

namespace gpstop {

/// Backward-induction values over (time, bin). Row r holds time
/// first_time + r; the final row is the horizon and equals the bin centers.
/// continuation[r] is the expected next-step value at that row's time; the
/// final row has no continuation and stores -infinity.
struct ValueTable {
  int first_time = 0;  // first decision time, W + 1
  int horizon = 0;     // T
  Eigen::MatrixXd values;
  Eigen::VectorXd continuation;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index row_for_time(int time) const { return time - first_time; }
};

/// Binary stop/continue decisions over (time, bin), stored as the smallest
/// stopping bin per row; num_bins means the row never stops.
struct StoppingPolicy {
  int first_time = 0;
  int num_bins = 0;
  std::vector<int> thresholds;

  Eigen::Index rows() const { return static_cast<Eigen::Index>(thresholds.size()); }
  bool stop(int time, int bin) const {
    return bin >= thresholds[static_cast<std::size_t>(time - first_time)];
  }
};

/// Value recursion from transition probabilities alone: at the horizon the
/// value is the bin center, and at earlier times the maximum of the bin
/// center and the (bin-independent) continuation value
/// sum_j V[t+1, j] * probs_into[t+1][j].
///
/// probs_into[r] carries the transition probabilities into time
/// first_time + 1 + r, so it has rows - 1 entries.
ValueTable backward_induction_probs(const BinGrid& grid,
                                    const std::vector<Eigen::VectorXd>& probs_into,
                                    int first_time);

/// Value recursion driven by GP predictive marginals at the consecutive
/// times {first..T}; transitions are Gaussian bin masses.
ValueTable backward_induction(const std::vector<PredictiveMarginal>& marginals,
                              const BinGrid& grid);

/// Stop exactly where stopping is optimal: bin centers at or above the
/// continuation value (ties stop). The horizon row is all ones.
StoppingPolicy extract_policy(const ValueTable& table, const BinGrid& grid);

/// PMF of the value at one time: bin masses below or at the continuation
/// value fold into a single atom there, the rest stay on their bin centers.
struct ValuePMF {
  int time = 0;
  double atom_value = 0.0;
  double atom_mass = 0.0;
  std::vector<std::pair<double, double>> upper_support;  // (center, mass), ascending

  double total_mass() const;
  double mean() const;
};

/// bin_probs is the binned price distribution at `time` (from
/// transition_probs); requires time < horizon.
ValuePMF value_pmf(const ValueTable& table, const BinGrid& grid,
                   const Eigen::Ref<const Eigen::VectorXd>& bin_probs, int time);

/// Sample-based value estimate: per series the running forward maximum,
/// averaged across series. Covers the full horizon {1..T}.
Eigen::VectorXd sos_values(const std::vector<PriceSeries>& training);

/// Threshold policy from sampled values over the decision window
/// {first_time..T}: stop when the bin center reaches the sampled value. The
/// final row is forced to all ones so the policy always terminates.
StoppingPolicy sos_policy(const Eigen::Ref<const Eigen::VectorXd>& values, const BinGrid& grid,
                          int first_time);

}  // namespace gpstop
