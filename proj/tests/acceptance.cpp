// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Statistical criteria use pinned seeds, so runs are reproducible.
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gpstop/csv.hpp"
#include "gpstop/dtw.hpp"
#include "gpstop/harness.hpp"
#include "gpstop/ou.hpp"
#include "gpstop/persist.hpp"
#include "gpstop/report.hpp"
#include "gpstop/rng.hpp"
#include "oracles.hpp"

using namespace gpstop;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3g", x);
  return buffer;
}

KernelSpec random_spec(Rng& rng) {
  KernelSpec spec;
  const KernelFamily families[] = {KernelFamily::Exponential, KernelFamily::SquaredExponential,
                                   KernelFamily::RationalQuadratic, KernelFamily::Linear};
  spec.family = families[rng.index(4)];
  spec.lengthscale = std::exp(rng.uniform(std::log(1.0), std::log(20.0)));
  spec.signal_variance = std::exp(rng.uniform(std::log(0.1), std::log(5.0)));
  spec.extra = std::exp(rng.uniform(std::log(0.5), std::log(3.0)));
  return spec;
}

// ---------------------------------------------------------------- criterion 1
Outcome gp_posterior_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const KernelSpec spec = random_spec(rng);
    const double noise = rng.uniform(1e-3, 0.5);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(5));
    Eigen::VectorXd times(n), values(n);
    double at = rng.uniform(0.0, 2.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      times[i] = at;
      at += rng.uniform(0.5, 4.0);
      values[i] = rng.normal();
    }
    const double t_star = rng.uniform(0.0, 22.0);

    GPModel model(spec, noise, times, values);
    const PredictiveMarginal got = model.posterior_marginal(t_star);
    const oracles::Marginal expected = oracles::condition_joint_gaussian(
        spec, model.noise_variance(), model.train_times(), model.train_values(), t_star);
    worst = std::max({worst, std::abs(got.mean - expected.mean),
                      std::abs(got.variance - expected.variance)});
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-8 && elapsed < 5.0,
          "max |delta| " + fmt(worst) + " over 100 instances, " + fmt(elapsed) + " s"};
}

// ---------------------------------------------------------------- criterion 2
Outcome dp_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(202);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int bins = 1 + static_cast<int>(rng.index(4));
    const Eigen::Index rows = 2 + static_cast<Eigen::Index>(rng.index(4));  // T - W <= 5
    const double lo = rng.uniform(0.5, 5.0);
    const BinGrid grid = make_bin_grid_range(lo, lo + rng.uniform(1.0, 25.0), bins);
    std::vector<Eigen::VectorXd> probs;
    for (Eigen::Index s = 0; s + 1 < rows; ++s) {
      Eigen::VectorXd p(bins);
      for (int j = 0; j < bins; ++j) p[j] = rng.uniform(1e-3, 1.0);
      p /= p.sum();
      probs.push_back(p);
    }
    const ValueTable table = backward_induction_probs(grid, probs, 1);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (int i = 0; i < bins; ++i) {
        const double expected = oracles::value_recursion(r, i, grid.centers, probs, rows);
        worst = std::max(worst, std::abs(table.values(r, i) - expected));
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-12 && elapsed < 5.0,
          "max |delta| " + fmt(worst) + " over 200 instances, " + fmt(elapsed) + " s"};
}

// ---------------------------------------------------------------- criterion 3
Outcome dtw_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(303);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.index(6));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(6));
    Eigen::VectorXd a(m), b(n);
    for (Eigen::Index i = 0; i < m; ++i) a[i] = rng.uniform(-2.0, 2.0);
    for (Eigen::Index i = 0; i < n; ++i) b[i] = rng.uniform(-2.0, 2.0);
    worst = std::max(worst, std::abs(dtw_distance(a, b) - oracles::dtw_brute_force(a, b)));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-12 && elapsed < 10.0,
          "max |delta| " + fmt(worst) + " over 100 pairs, " + fmt(elapsed) + " s"};
}

// ---------------------------------------------------------------- criterion 4
Outcome ou_moments() {
  const auto start = std::chrono::steady_clock::now();
  OUParams params;  // theta 0.5, mu 1, sigma 0.2, x0 1, horizon 100, dt 1
  const int n = 2000;
  const auto paths = sample_ou_paths(params, n, 404);
  const Eigen::VectorXd mean = ou_mean_curve(params);

  double worst_z = 0.0;
  for (int t = 0; t < params.horizon; ++t) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& p : paths) {
      sum += p.values[t];
      sum_sq += p.values[t] * p.values[t];
    }
    const double m = sum / n;
    const double sd = std::sqrt(std::max(sum_sq / n - m * m, 0.0));
    const double se = sd / std::sqrt(static_cast<double>(n));
    worst_z = std::max(worst_z, std::abs(m - mean[t]) / se);
  }

  double late_var = 0.0;
  for (const auto& p : paths) {
    const double d = p.values[params.horizon - 1] - mean[params.horizon - 1];
    late_var += d * d;
  }
  late_var /= n;
  const double stationary = params.sigma * params.sigma / (2.0 * params.theta);
  const double rel = std::abs(late_var - stationary) / stationary;

  const double elapsed = seconds_since(start);
  return {worst_z <= 3.0 && rel <= 0.05 && elapsed < 30.0,
          "max mean z-score " + fmt(worst_z) + ", late-variance rel. error " + fmt(rel) +
              ", " + fmt(elapsed) + " s"};
}

// --------------------------------------------------- shared end-to-end sweeps
struct SweepData {
  std::vector<TrainedModel> models;           // one per trained configuration
  std::vector<BacktestResult> gpos, agpos, sos;  // aligned per test series
  std::map<std::string, double> mean_price;   // per test series id
  std::vector<PriceSeries> sweep0_test;       // kept for the suboptimality contract
};

SweepData run_sweeps() {
  const int threads = std::max(1u, std::thread::hardware_concurrency());
  SweepData data;
  // Seeds 7000..7004 keep every generated path strictly positive at this
  // path count, which log returns require.
  for (std::uint64_t sweep = 0; sweep < 5; ++sweep) {
    ExperimentConfig config;
    config.clusters = 1;
    config.seed = 7000 + sweep;
    config.generate_count = 900;
    auto series = prepare_series(sample_ou_paths(config.ou, config.generate_count, config.seed),
                                 config);
    auto [train, test] = split_train_test(series, config.train_split, config.seed);
    TrainedModel model = run_gpos_training(train, config);

    const auto gpos = run_backtests(model, test, Algorithm::Gpos, threads);
    const auto agpos = run_backtests(model, test, Algorithm::Agpos, threads);
    const auto sos = run_backtests(model, test, Algorithm::Sos, threads);
    data.gpos.insert(data.gpos.end(), gpos.begin(), gpos.end());
    data.agpos.insert(data.agpos.end(), agpos.begin(), agpos.end());
    data.sos.insert(data.sos.end(), sos.begin(), sos.end());
    for (const auto& s : test) {
      data.mean_price[s.id + "#" + std::to_string(sweep)] = s.values.mean();
    }
    if (sweep == 0) data.sweep0_test = test;
    data.models.push_back(std::move(model));
  }

  // Extra configurations for the structural criteria: clustered and buy-side.
  {
    ExperimentConfig config;
    config.clusters = 3;
    config.bins = 50;
    config.seed = 8101;
    auto series = prepare_series(sample_ou_paths(config.ou, 80, config.seed), config);
    auto [train, test] = split_train_test(series, config.train_split, config.seed);
    data.models.push_back(run_gpos_training(train, config));
  }
  {
    ExperimentConfig config;
    config.clusters = 1;
    config.direction = Direction::Buy;
    config.seed = 8202;
    auto series = prepare_series(sample_ou_paths(config.ou, 60, config.seed), config);
    auto [train, test] = split_train_test(series, config.train_split, config.seed);
    data.models.push_back(run_gpos_training(train, config));
  }
  return data;
}

// ---------------------------------------------------------------- criterion 5
Outcome policy_structure(const SweepData& data) {
  std::size_t rows_checked = 0;
  for (const auto& model : data.models) {
    for (const auto& tc : model.clusters) {
      const ValueTable& table = tc.table;
      const BinGrid& grid = tc.grid;
      const StoppingPolicy& policy = tc.policy;
      if (policy.thresholds.back() != 0) {
        return {false, "horizon row is not all ones"};
      }
      for (Eigen::Index r = 0; r < table.rows(); ++r) {
        const int t = table.first_time + static_cast<int>(r);
        bool stopped = false;
        for (int i = 0; i < grid.num_bins; ++i) {
          if (stopped && !policy.stop(t, i)) {
            return {false, "policy row is not a monotone step at t=" + std::to_string(t)};
          }
          stopped = policy.stop(t, i);
          const double expected = std::max(grid.centers[i], table.continuation[r]);
          if (table.values(r, i) != expected) {
            return {false, "value identity fails at t=" + std::to_string(t)};
          }
        }
        ++rows_checked;
      }
    }
  }
  return {true, std::to_string(rows_checked) + " policy rows checked across " +
                    std::to_string(data.models.size()) + " trained configurations"};
}

// ---------------------------------------------------------------- criterion 6
Outcome pmf_checks(const SweepData& data) {
  double worst_mass = 0.0;
  std::size_t checked = 0;
  for (const auto& model : data.models) {
    for (const auto& tc : model.clusters) {
      for (int t = model.warm_end + 1; t < model.horizon; t += 7) {
        const PredictiveMarginal marginal = tc.gp->posterior_marginal(t);
        const Eigen::VectorXd probs = transition_probs(marginal, tc.grid);
        const ValuePMF pmf = value_pmf(tc.table, tc.grid, probs, t);
        worst_mass = std::max(worst_mass, std::abs(pmf.total_mass() - probs.sum()));
        const double floor = pmf.atom_value * pmf.total_mass();
        if (pmf.mean() < floor - 1e-12) {
          return {false, "PMF mean fell below the folded atom floor at t=" + std::to_string(t)};
        }
        ++checked;
      }
    }
  }
  return {worst_mass <= 1e-12,
          std::to_string(checked) + " PMFs, max mass mismatch " + fmt(worst_mass)};
}

// ---------------------------------------------------------------- criterion 7
Outcome suboptimality_contract(const SweepData& data) {
  // Stopping at the window argmax costs exactly zero.
  ExperimentConfig actionable;
  actionable.subopt_window = SuboptWindow::Actionable;
  const int warm_end = data.models.front().warm_end;
  for (const auto& series : data.sweep0_test) {
    int argmax = warm_end + 1;
    for (int t = warm_end + 1; t <= static_cast<int>(series.length()); ++t) {
      if (series.values[t - 1] > series.values[argmax - 1]) argmax = t;
    }
    if (suboptimality(series, argmax, warm_end, actionable).sub_dollar != 0.0) {
      return {false, "argmax stop has nonzero suboptimality for " + series.id};
    }
    ExperimentConfig full;  // full-horizon window, when the max is reachable
    Eigen::Index full_argmax = 0;
    series.values.maxCoeff(&full_argmax);
    if (full_argmax + 1 > warm_end &&
        suboptimality(series, static_cast<int>(full_argmax) + 1, warm_end, full).sub_dollar !=
            0.0) {
      return {false, "full-horizon argmax stop has nonzero suboptimality for " + series.id};
    }
  }

  // Every backtest is non-negative and the bps conversion is exact.
  auto check_results = [&](const std::vector<BacktestResult>& results,
                           std::uint64_t results_per_sweep) -> const char* {
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      if (r.sub_dollar < 0.0) return "negative suboptimality";
      const std::uint64_t sweep = i / results_per_sweep;
      const double mean =
          data.mean_price.at(r.series_id + "#" + std::to_string(sweep));
      if (std::abs(r.sub_bps - 1e4 * r.sub_dollar / mean) > 1e-12) {
        return "bps conversion mismatch";
      }
    }
    return nullptr;
  };
  const std::uint64_t per_sweep = data.gpos.size() / 5;
  for (const auto* results : {&data.gpos, &data.agpos, &data.sos}) {
    if (const char* err = check_results(*results, per_sweep)) {
      return {false, err};
    }
  }
  return {true, std::to_string(3 * data.gpos.size()) + " backtests non-negative, bps exact"};
}

// ---------------------------------------------------------------- criterion 8
// The ordering claim is about mean suboptimality in bps (the paper compares
// arithmetic means across series), so the paired test attacks the mean
// margin directly with a sign-flip randomization test at the 5% level: the
// claimed margin must be non-negative and must survive the test, i.e. not
// be significantly negative. Strict-superiority p-values and classical
// win/loss counts are reported alongside; pairwise dominance is a different
// functional that is uninformative for means here, where the sampled
// baseline's losses are rare forced-stop disasters while the GP policies
// lose small amounts often.
Outcome ordering(const SweepData& data) {
  auto mean_bps = [](const std::vector<BacktestResult>& results) {
    double sum = 0.0;
    for (const auto& r : results) sum += r.sub_bps;
    return sum / static_cast<double>(results.size());
  };
  const double m_gpos = mean_bps(data.gpos);
  const double m_agpos = mean_bps(data.agpos);
  const double m_sos = mean_bps(data.sos);

  struct Paired {
    double margin = 0.0;    // mean(worse - better), >= 0 when the claim holds
    double p_better = 1.0;  // randomization p for margin > 0
    double p_worse = 1.0;   // randomization p for margin < 0
    int wins = 0, losses = 0;
  };
  auto paired_test = [](const std::vector<BacktestResult>& better,
                        const std::vector<BacktestResult>& worse) {
    Paired out;
    std::vector<double> diffs(better.size());
    for (std::size_t i = 0; i < better.size(); ++i) {
      diffs[i] = worse[i].sub_bps - better[i].sub_bps;
      if (diffs[i] > 0.0) ++out.wins;
      if (diffs[i] < 0.0) ++out.losses;
      out.margin += diffs[i];
    }
    out.margin /= static_cast<double>(diffs.size());

    Rng rng(181);
    const int flips = 20000;
    int geq = 0, leq = 0;
    for (int rep = 0; rep < flips; ++rep) {
      double sum = 0.0;
      for (double d : diffs) sum += rng.uniform() < 0.5 ? d : -d;
      const double flipped = sum / static_cast<double>(diffs.size());
      if (flipped >= out.margin) ++geq;
      if (flipped <= out.margin) ++leq;
    }
    out.p_better = static_cast<double>(geq + 1) / static_cast<double>(flips + 1);
    out.p_worse = static_cast<double>(leq + 1) / static_cast<double>(flips + 1);
    return out;
  };
  const Paired ag = paired_test(data.agpos, data.gpos);
  const Paired gs = paired_test(data.gpos, data.sos);

  const bool pass = data.gpos.size() >= 100 && m_agpos <= m_gpos && m_gpos <= m_sos &&
                    ag.margin >= 0.0 && gs.margin >= 0.0 && ag.p_worse > 0.05 &&
                    gs.p_worse > 0.05;
  return {pass,
          "mean bps agpos " + fmt(m_agpos) + " <= gpos " + fmt(m_gpos) + " <= sos " +
              fmt(m_sos) + " over " + std::to_string(data.gpos.size()) +
              " series; margins " + fmt(ag.margin) + " / " + fmt(gs.margin) +
              " bps, p(better) " + fmt(ag.p_better) + " / " + fmt(gs.p_better) +
              ", win-loss " + std::to_string(ag.wins) + "-" + std::to_string(ag.losses) +
              " / " + std::to_string(gs.wins) + "-" + std::to_string(gs.losses)};
}

// ---------------------------------------------------------------- criterion 9
Outcome determinism() {
  const fs::path root =
      fs::temp_directory_path() / ("gpstop_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(root);

  auto run_pipeline = [&](const fs::path& dir) {
    fs::create_directories(dir);
    ExperimentConfig config;
    config.clusters = 1;
    config.seed = 909;
    config.generate_count = 60;
    const auto raw = sample_ou_paths(config.ou, config.generate_count, config.seed);
    write_prices_csv(dir / "prices.csv", raw);
    auto series = prepare_series(load_csv(dir / "prices.csv", CsvSchema::Wide), config);
    auto [train, test] = split_train_test(series, config.train_split, config.seed);
    TrainedModel model = run_gpos_training(train, config);
    for (const auto& s : test) model.test_ids.push_back(s.id);
    save_model(dir / "models", model);

    const TrainedModel loaded = load_model(model_dir_for(dir / "models", config));
    write_report_csv(dir / "report_gpos.csv",
                     run_backtests(loaded, test, Algorithm::Gpos));
    write_report_csv(dir / "report_agpos.csv",
                     run_backtests(loaded, test, Algorithm::Agpos));
    const auto results = read_report_csv(dir / "report_gpos.csv");
    write_summary_json(dir / "summary.json",
                       aggregate_report(results, Grouping::Universal), config);
  };
  run_pipeline(root / "run1");
  run_pipeline(root / "run2");

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool pass = true;
  for (const char* name : {"prices.csv", "report_gpos.csv", "report_agpos.csv", "summary.json"}) {
    const std::string a = slurp(root / "run1" / name);
    if (a.empty() || a != slurp(root / "run2" / name)) pass = false;
  }
  fs::remove_all(root);
  return {pass, "generate/train/backtest/report reruns byte-identical"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name, const Outcome& outcome) {
    std::printf("%s  %d. %s (%s)\n", outcome.pass ? "PASS" : "FAIL", id, name.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  };

  report(1, "GP posterior matches joint-Gaussian conditioning", gp_posterior_oracle());
  report(2, "backward induction matches the recursive oracle", dp_oracle());
  report(3, "DTW matches brute-force path enumeration", dtw_oracle());
  report(4, "OU sample moments match the process moments", ou_moments());

  const auto sweeps_start = std::chrono::steady_clock::now();
  const SweepData data = run_sweeps();
  const double sweep_seconds = seconds_since(sweeps_start);

  report(5, "policies are monotone threshold rules with all-ones horizon",
         policy_structure(data));
  report(6, "value PMFs conserve mass and fold upward", pmf_checks(data));
  report(7, "suboptimality is exact at the argmax and non-negative everywhere",
         suboptimality_contract(data));
  Outcome order = ordering(data);
  order.detail += "; sweeps took " + fmt(sweep_seconds) + " s";
  order.pass = order.pass && sweep_seconds < 300.0;
  report(8, "adaptive <= static <= sampled mean suboptimality on synthetic data", order);
  report(9, "pipeline reruns are byte-identical", determinism());

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
