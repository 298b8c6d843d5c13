#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpstop/cluster.hpp"
#include "gpstop/config.hpp"
#include "gpstop/fit.hpp"
#include "gpstop/stopping.hpp"

namespace gpstop {

/// Per-cluster training artifacts. The grid, GP, value table and policies
/// live in the machinery domain: prices as-is when selling, negated when
/// buying (with the grid mirrored), so that stopping always maximizes.
struct TrainedCluster {
  Cluster cluster;
  BinGrid grid;
  std::optional<GPModel> gp;        // absent when trained without GP policies
  ValueTable table;                 // empty when gp is absent
  StoppingPolicy policy;            // GP-based policy
  Eigen::VectorXd sos_values_full;  // sampled values over {1..T}
  StoppingPolicy sos;               // sample-based policy over the decision window
};

struct TrainedModel {
  ExperimentConfig config;
  int horizon = 0;   // T
  int warm_end = 0;  // W
  std::vector<TrainedCluster> clusters;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;  // bookkeeping for persisted splits

  const TrainedCluster& cluster(std::size_t k) const { return clusters.at(k); }
};

/// One backtested test series. Prices are reported in the walked (input)
/// domain; true_max is the best attainable price over the configured
/// suboptimality window (maximum when selling, minimum when buying).
struct BacktestResult {
  std::string series_id;
  std::string asset;
  Algorithm algorithm = Algorithm::Gpos;
  int cluster = 0;
  int stop_time = 0;  // in {W+1..T}
  double stop_price = 0.0;
  double true_max = 0.0;
  double sub_dollar = 0.0;
  double sub_bps = 0.0;
  bool clamped = false;  // a visited price fell outside the bin grid
};

struct Suboptimality {
  double sub_dollar = 0.0;
  double sub_bps = 0.0;
  double true_max = 0.0;
};

/// W = floor(warm_fraction * horizon); validated against the horizon and
/// the return timescale.
int warm_end_for(int horizon, const ExperimentConfig& config);

/// Best attainable price over the configured window minus the stopped
/// price (sign-adjusted when buying); bps divide by the mean series price
/// times 1e-4.
Suboptimality suboptimality(const PriceSeries& series, int stop_time, int warm_end,
                            const ExperimentConfig& config);

/// Normalizes every series by its first value when enabled in the config.
std::vector<PriceSeries> prepare_series(std::vector<PriceSeries> series,
                                        const ExperimentConfig& config);

/// Full training pass: warm-window return clustering, full-horizon price
/// centroids, per-cluster bin grids, GP fits on the centroid conditioning
/// series, backward induction and policy extraction, plus the sampled
/// baseline values and policy.
TrainedModel run_gpos_training(const std::vector<PriceSeries>& train,
                               const ExperimentConfig& config);

/// Same preprocessing without GP fits; supports only the sampled baseline.
TrainedModel run_sos_training(const std::vector<PriceSeries>& train,
                              const ExperimentConfig& config);

/// Assigns a cluster on warm-window returns, walks the decision window and
/// stops at the first firing rule (forced stop at the horizon).
BacktestResult run_gpos_test(const TrainedModel& model, const PriceSeries& test);

/// Adaptive variant: re-fits the GP per test series to the warm prefix of
/// the test series extended by the cluster centroid (or to the prefix alone
/// under warm conditioning), recomputes the policy for t > W, then walks.
BacktestResult run_agpos(const TrainedModel& model, const PriceSeries& test);

BacktestResult run_sos_test(const TrainedModel& model, const PriceSeries& test);

/// Sampled baseline end-to-end: cluster, build sampled policies, walk every
/// test series.
std::vector<BacktestResult> run_sos(const std::vector<PriceSeries>& train,
                                    const std::vector<PriceSeries>& test,
                                    const ExperimentConfig& config);

/// Runs one algorithm over every test series, optionally across threads;
/// results keep the test order regardless of thread count.
std::vector<BacktestResult> run_backtests(const TrainedModel& model,
                                          const std::vector<PriceSeries>& test,
                                          Algorithm algorithm, int threads = 1);

}  // namespace gpstop
