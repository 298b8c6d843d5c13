#include "gpstop/harness.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "gpstop/dtw.hpp"
#include "gpstop/rng.hpp"

namespace gpstop {
namespace {

double direction_sign(Direction direction) {
  return direction == Direction::Sell ? 1.0 : -1.0;
}

void check_horizon(const TrainedModel& model, const PriceSeries& test) {
  if (test.length() != model.horizon) {
    throw std::invalid_argument("test series '" + test.id + "' has length " +
                                std::to_string(test.length()) + ", model horizon is " +
                                std::to_string(model.horizon));
  }
}

ReturnSeries warm_returns(const PriceSeries& series, int warm_end, int delta_t) {
  return log_returns(warm_window(series, warm_end), delta_t);
}

std::size_t assign_trained_cluster(const TrainedModel& model, const ReturnSeries& returns) {
  std::size_t best = 0;
  double d_best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < model.clusters.size(); ++c) {
    const double d =
        dtw_distance(returns.values, model.clusters[c].cluster.centroid_returns.values);
    if (d < d_best) {
      d_best = d;
      best = c;
    }
  }
  return best;
}

struct Walk {
  int stop_time = 0;
  bool clamped = false;
};

Walk walk_policy(const PriceSeries& test, const BinGrid& grid, const StoppingPolicy& policy,
                 int warm_end, int horizon, double sign) {
  Walk walk;
  for (int t = warm_end + 1; t <= horizon; ++t) {
    const BinLocation loc = bin_locate(grid, sign * test.values[t - 1]);
    walk.clamped = walk.clamped || loc.clamped;
    if (policy.stop(t, loc.index)) {
      walk.stop_time = t;
      return walk;
    }
  }
  walk.stop_time = horizon;  // forced stop
  return walk;
}

BacktestResult finish_result(const TrainedModel& model, const PriceSeries& test,
                             Algorithm algorithm, std::size_t cluster, const Walk& walk) {
  BacktestResult result;
  result.series_id = test.id;
  result.asset = test.asset;
  result.algorithm = algorithm;
  result.cluster = static_cast<int>(cluster);
  result.stop_time = walk.stop_time;
  result.stop_price = test.values[walk.stop_time - 1];
  result.clamped = walk.clamped;
  const Suboptimality sub = suboptimality(test, walk.stop_time, model.warm_end, model.config);
  result.true_max = sub.true_max;
  result.sub_dollar = sub.sub_dollar;
  result.sub_bps = sub.sub_bps;
  return result;
}

FitConfig cluster_fit_config(const ExperimentConfig& config, std::size_t cluster) {
  FitConfig fit;
  fit.num_starts = config.fit_starts;
  fit.max_iterations = config.fit_max_iterations;
  fit.seed = mix_seed(config.seed, cluster);
  return fit;
}

Eigen::VectorXd time_grid(int first, int last) {
  Eigen::VectorXd times(last - first + 1);
  for (int t = first; t <= last; ++t) times[t - first] = t;
  return times;
}

/// Fits the GP to a machinery-domain conditioning series and derives the
/// value table and policy over the decision window.
void fit_cluster_policy(TrainedCluster& tc, const Eigen::VectorXd& conditioning_values,
                        int warm_end, int horizon, const ExperimentConfig& config,
                        const FitConfig& fit) {
  const Eigen::VectorXd times = time_grid(1, static_cast<int>(conditioning_values.size()));
  tc.gp = fit_hyperparams(times, conditioning_values, config.kernel_family, fit);
  const std::vector<PredictiveMarginal> marginals =
      tc.gp->posterior_marginals(time_grid(warm_end + 1, horizon));
  tc.table = backward_induction(marginals, tc.grid);
  tc.policy = extract_policy(tc.table, tc.grid);
}

TrainedModel build_trained(const std::vector<PriceSeries>& train,
                           const ExperimentConfig& config, bool fit_gp) {
  validate(config);
  if (train.empty()) {
    throw std::invalid_argument("training set is empty");
  }
  const Eigen::Index horizon = train.front().length();
  for (const auto& s : train) {
    if (s.length() != horizon) {
      throw std::invalid_argument("training series must share one horizon (series '" + s.id +
                                  "')");
    }
  }
  TrainedModel model;
  model.config = config;
  model.horizon = static_cast<int>(horizon);
  model.warm_end = warm_end_for(model.horizon, config);
  for (const auto& s : train) model.train_ids.push_back(s.id);

  std::vector<ReturnSeries> returns;
  returns.reserve(train.size());
  for (const auto& s : train) {
    returns.push_back(warm_returns(s, model.warm_end, config.delta_t));
  }
  std::vector<Cluster> clusters =
      cluster_kmeans_dtw(returns, config.clusters, config.seed, config.kmeans_max_iterations,
                         config.dba_max_iterations);

  const double sign = direction_sign(config.direction);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    TrainedCluster tc;
    tc.cluster = std::move(clusters[k]);

    std::vector<Eigen::VectorXd> member_values;
    std::vector<PriceSeries> member_series_flipped;
    Eigen::Index pooled_size = 0;
    for (std::size_t i : tc.cluster.member_indices) pooled_size += train[i].length();
    Eigen::VectorXd pooled(pooled_size);
    Eigen::Index at = 0;
    for (std::size_t i : tc.cluster.member_indices) {
      member_values.push_back(train[i].values);
      member_series_flipped.push_back({train[i].id, train[i].asset, sign * train[i].values});
      pooled.segment(at, train[i].length()) = train[i].values;
      at += train[i].length();
    }

    tc.cluster.centroid_prices.id = "cluster_" + std::to_string(k) + "_centroid";
    tc.cluster.centroid_prices.values =
        dba_centroid(member_values, member_values.front(), config.dba_max_iterations);

    const BinGrid grid = make_bin_grid(pooled, config.bins);
    tc.grid = config.direction == Direction::Sell ? grid : mirrored(grid);

    tc.sos_values_full = sos_values(member_series_flipped);
    tc.sos = sos_policy(
        tc.sos_values_full.segment(model.warm_end, model.horizon - model.warm_end), tc.grid,
        model.warm_end + 1);

    if (fit_gp) {
      const Eigen::VectorXd conditioning =
          config.conditioning == Conditioning::Full
              ? (sign * tc.cluster.centroid_prices.values).eval()
              : (sign * tc.cluster.centroid_prices.values.head(model.warm_end)).eval();
      fit_cluster_policy(tc, conditioning, model.warm_end, model.horizon, config,
                         cluster_fit_config(config, k));
    }
    model.clusters.push_back(std::move(tc));
  }
  return model;
}

}  // namespace

int warm_end_for(int horizon, const ExperimentConfig& config) {
  const int warm_end = static_cast<int>(std::floor(config.warm_fraction * horizon));
  if (warm_end < 2 || warm_end >= horizon) {
    throw std::invalid_argument("warm window must cover at least 2 and at most horizon - 1 "
                                "steps; got W = " +
                                std::to_string(warm_end) + " for T = " +
                                std::to_string(horizon));
  }
  if (config.delta_t >= warm_end) {
    throw std::invalid_argument("delta_t must be smaller than the warm window");
  }
  return warm_end;
}

Suboptimality suboptimality(const PriceSeries& series, int stop_time, int warm_end,
                            const ExperimentConfig& config) {
  const Eigen::Index horizon = series.length();
  if (stop_time <= warm_end || stop_time > horizon) {
    throw std::invalid_argument("stop time must lie in the decision window");
  }
  const Eigen::Index begin =
      config.subopt_window == SuboptWindow::FullHorizon ? 0 : warm_end;
  const auto window = series.values.segment(begin, horizon - begin);
  const double stop_price = series.values[stop_time - 1];

  Suboptimality out;
  if (config.direction == Direction::Sell) {
    out.true_max = window.maxCoeff();
    out.sub_dollar = out.true_max - stop_price;
  } else {
    out.true_max = window.minCoeff();
    out.sub_dollar = stop_price - out.true_max;
  }
  out.sub_bps = 1e4 * out.sub_dollar / series.values.mean();
  return out;
}

std::vector<PriceSeries> prepare_series(std::vector<PriceSeries> series,
                                        const ExperimentConfig& config) {
  if (!config.normalize_prices) return series;
  for (auto& s : series) s = normalize(s);
  return series;
}

TrainedModel run_gpos_training(const std::vector<PriceSeries>& train,
                               const ExperimentConfig& config) {
  return build_trained(train, config, true);
}

TrainedModel run_sos_training(const std::vector<PriceSeries>& train,
                              const ExperimentConfig& config) {
  return build_trained(train, config, false);
}

BacktestResult run_gpos_test(const TrainedModel& model, const PriceSeries& test) {
  check_horizon(model, test);
  const ReturnSeries returns = warm_returns(test, model.warm_end, model.config.delta_t);
  const std::size_t k = assign_trained_cluster(model, returns);
  const TrainedCluster& tc = model.cluster(k);
  if (!tc.gp.has_value()) {
    throw std::invalid_argument("model was trained without GP policies");
  }
  const Walk walk = walk_policy(test, tc.grid, tc.policy, model.warm_end, model.horizon,
                                direction_sign(model.config.direction));
  return finish_result(model, test, Algorithm::Gpos, k, walk);
}

BacktestResult run_agpos(const TrainedModel& model, const PriceSeries& test) {
  check_horizon(model, test);
  const ExperimentConfig& config = model.config;
  const ReturnSeries returns = warm_returns(test, model.warm_end, config.delta_t);
  const std::size_t k = assign_trained_cluster(model, returns);
  const TrainedCluster& tc = model.cluster(k);
  const double sign = direction_sign(config.direction);

  Eigen::VectorXd hybrid;
  if (config.conditioning == Conditioning::Full) {
    hybrid.resize(model.horizon);
    hybrid.head(model.warm_end) = test.values.head(model.warm_end);
    hybrid.tail(model.horizon - model.warm_end) =
        tc.cluster.centroid_prices.values.tail(model.horizon - model.warm_end);
  } else {
    hybrid = test.values.head(model.warm_end);
  }

  TrainedCluster adapted;
  adapted.grid = tc.grid;
  fit_cluster_policy(adapted, (sign * hybrid).eval(), model.warm_end, model.horizon, config,
                     cluster_fit_config(config, k));
  const Walk walk =
      walk_policy(test, adapted.grid, adapted.policy, model.warm_end, model.horizon, sign);
  return finish_result(model, test, Algorithm::Agpos, k, walk);
}

BacktestResult run_sos_test(const TrainedModel& model, const PriceSeries& test) {
  check_horizon(model, test);
  const ReturnSeries returns = warm_returns(test, model.warm_end, model.config.delta_t);
  const std::size_t k = assign_trained_cluster(model, returns);
  const TrainedCluster& tc = model.cluster(k);
  const Walk walk = walk_policy(test, tc.grid, tc.sos, model.warm_end, model.horizon,
                                direction_sign(model.config.direction));
  return finish_result(model, test, Algorithm::Sos, k, walk);
}

std::vector<BacktestResult> run_sos(const std::vector<PriceSeries>& train,
                                    const std::vector<PriceSeries>& test,
                                    const ExperimentConfig& config) {
  const TrainedModel model = run_sos_training(train, config);
  return run_backtests(model, test, Algorithm::Sos, config.threads);
}

std::vector<BacktestResult> run_backtests(const TrainedModel& model,
                                          const std::vector<PriceSeries>& test,
                                          Algorithm algorithm, int threads) {
  std::vector<BacktestResult> results(test.size());
  auto run_one = [&](std::size_t i) {
    switch (algorithm) {
      case Algorithm::Gpos: results[i] = run_gpos_test(model, test[i]); break;
      case Algorithm::Agpos: results[i] = run_agpos(model, test[i]); break;
      case Algorithm::Sos: results[i] = run_sos_test(model, test[i]); break;
    }
  };

  if (threads <= 1 || test.size() <= 1) {
    for (std::size_t i = 0; i < test.size(); ++i) run_one(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= test.size()) return;
      try {
        run_one(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), test.size());
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace gpstop
