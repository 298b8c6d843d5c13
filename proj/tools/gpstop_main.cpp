// Batch front end for the optimal-stopping pipeline:
//   generate -> cluster -> train -> backtest -> report
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "gpstop/csv.hpp"
#include "gpstop/errors.hpp"
#include "gpstop/harness.hpp"
#include "gpstop/ou.hpp"
#include "gpstop/persist.hpp"
#include "gpstop/report.hpp"
#include "gpstop/svg.hpp"

namespace fs = std::filesystem;
using namespace gpstop;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
  std::string input_path;
  std::string schema = "wide";
  std::string seed;
  std::string threads;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_input) {
  cmd->add_option("--config,-c", args.config_path, "Configuration file (key = value lines)");
  cmd->add_option("--set", args.overrides, "Override a config key, e.g. --set clusters=3");
  cmd->add_option("--output-dir,-o", args.output_dir, "Output directory");
  cmd->add_option("--seed", args.seed, "Shorthand for --set seed=<value>");
  cmd->add_option("--threads", args.threads, "Shorthand for --set threads=<value>");
  if (needs_input) {
    cmd->add_option("--input,-i", args.input_path, "Input CSV path")->required();
    cmd->add_option("--schema", args.schema, "Input schema: wide or long")
        ->check(CLI::IsMember({"wide", "long"}));
  }
}

ExperimentConfig resolve_config(const CommonArgs& args) {
  ExperimentConfig config;
  if (!args.config_path.empty()) config = parse_config_file(args.config_path);
  for (const auto& kv : args.overrides) apply_override(config, kv);
  if (!args.seed.empty()) apply_override(config, "seed", args.seed);
  if (!args.threads.empty()) apply_override(config, "threads", args.threads);
  validate(config);
  return config;
}

fs::path resolve_output_dir(const CommonArgs& args) {
  if (!args.output_dir.empty()) return args.output_dir;
  const char* root = std::getenv("GPSTOP_OUTPUT_ROOT");
  return root != nullptr ? fs::path(root) / "out" : fs::path("out");
}

fs::path prepare_output_dir(const CommonArgs& args, const ExperimentConfig& config) {
  const fs::path dir = resolve_output_dir(args);
  fs::create_directories(dir);
  std::ofstream cfg(dir / "resolved_config.cfg");
  if (!cfg) throw DataError("cannot write file: " + (dir / "resolved_config.cfg").string());
  cfg << serialize_config(config);
  return dir;
}

std::vector<PriceSeries> load_input(const CommonArgs& args) {
  return load_csv(args.input_path, csv_schema_from_string(args.schema));
}

int cmd_generate(const CommonArgs& args) {
  const ExperimentConfig config = resolve_config(args);
  const fs::path dir = prepare_output_dir(args, config);
  const auto paths = sample_ou_paths(config.ou, config.generate_count, config.seed);
  write_prices_csv(dir / "prices.csv", paths);
  std::cout << "wrote " << paths.size() << " series to " << (dir / "prices.csv").string()
            << "\n";
  return 0;
}

int cmd_cluster(const CommonArgs& args) {
  const ExperimentConfig config = resolve_config(args);
  const fs::path dir = prepare_output_dir(args, config);
  const auto series = prepare_series(load_input(args), config);
  const TrainedModel model = run_sos_training(series, config);

  {
    std::ofstream out(dir / "assignments.csv");
    if (!out) throw DataError("cannot write file: " + (dir / "assignments.csv").string());
    out << "series_id,cluster\n";
    for (std::size_t k = 0; k < model.clusters.size(); ++k) {
      for (const auto& id : model.clusters[k].cluster.member_ids) {
        out << id << ',' << k << "\n";
      }
    }
  }
  {
    std::ofstream out(dir / "cluster_stats.csv");
    if (!out) throw DataError("cannot write file: " + (dir / "cluster_stats.csv").string());
    out << "cluster,size,volatility,kurtosis,degenerate\n";
    for (std::size_t k = 0; k < model.clusters.size(); ++k) {
      const auto& c = model.clusters[k].cluster;
      out << k << ',' << c.member_ids.size() << ',' << format_double(c.stats.volatility) << ','
          << format_double(c.stats.kurtosis) << ',' << (c.stats.degenerate ? "true" : "false")
          << "\n";
    }
  }
  std::vector<PriceSeries> price_centroids;
  std::vector<PriceSeries> return_centroids;
  for (std::size_t k = 0; k < model.clusters.size(); ++k) {
    const auto& c = model.clusters[k].cluster;
    price_centroids.push_back(c.centroid_prices);
    return_centroids.push_back(
        {"cluster_" + std::to_string(k) + "_returns", "", c.centroid_returns.values});
  }
  write_prices_csv(dir / "centroids_prices.csv", price_centroids);
  write_prices_csv(dir / "centroids_returns.csv", return_centroids);
  std::cout << "clustered " << series.size() << " series into " << model.clusters.size()
            << " clusters under " << dir.string() << "\n";
  return 0;
}

int cmd_train(const CommonArgs& args) {
  const ExperimentConfig config = resolve_config(args);
  const fs::path dir = prepare_output_dir(args, config);
  const auto series = prepare_series(load_input(args), config);
  auto [train, test] = split_train_test(series, config.train_split, config.seed);
  if (test.empty()) {
    throw DataError("train split leaves no test series; lower train_split");
  }
  TrainedModel model = run_gpos_training(train, config);
  for (const auto& s : test) model.test_ids.push_back(s.id);
  const fs::path model_dir = save_model(dir / "models", model);
  std::cout << "trained " << model.clusters.size() << " cluster(s) on " << train.size()
            << " series; model at " << model_dir.string() << "\n";
  return 0;
}

int cmd_backtest(const CommonArgs& args, const std::string& algorithm_name,
                 const std::string& models_dir) {
  const ExperimentConfig config = resolve_config(args);
  const Algorithm algorithm = algorithm_from_string(algorithm_name);
  const fs::path dir = prepare_output_dir(args, config);
  const fs::path model_dir =
      models_dir.empty() ? model_dir_for(dir / "models", config) : fs::path(models_dir);
  const TrainedModel model = load_model(model_dir);

  const auto series = prepare_series(load_input(args), config);
  std::map<std::string, const PriceSeries*> by_id;
  for (const auto& s : series) by_id[s.id] = &s;
  std::vector<PriceSeries> test;
  for (const auto& id : model.test_ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw DataError("test series '" + id + "' from the manifest is missing from the input");
    }
    test.push_back(*it->second);
  }
  if (test.empty()) throw DataError("model manifest lists no test series");

  const auto results = run_backtests(model, test, algorithm, config.threads);
  const fs::path report_path = dir / ("report_" + to_string(algorithm) + ".csv");
  write_report_csv(report_path, results);

  std::size_t clamped = 0;
  for (const auto& r : results) clamped += r.clamped ? 1 : 0;
  if (clamped > 0) {
    std::cerr << "note: " << clamped << " of " << results.size()
              << " series had prices outside the bin grid (clamped to edge bins)\n";
  }
  std::cout << "backtested " << results.size() << " series with " << to_string(algorithm)
            << "; report at " << report_path.string() << "\n";
  return 0;
}

void write_charts(const fs::path& dir, const TrainedModel& model) {
  for (std::size_t k = 0; k < model.clusters.size(); ++k) {
    const TrainedCluster& tc = model.clusters[k];
    const std::string stem = "cluster_" + std::to_string(k);

    SvgSeries sos_line{"sampled value", "firebrick", {}, true};
    for (Eigen::Index t = 0; t < tc.sos_values_full.size(); ++t) {
      sos_line.points.emplace_back(static_cast<double>(t + 1), tc.sos_values_full[t]);
    }
    std::vector<SvgSeries> value_series{sos_line};
    if (tc.gp.has_value()) {
      SvgSeries cont{"continuation value", "steelblue", {}, false};
      for (Eigen::Index r = 0; r + 1 < tc.table.rows(); ++r) {
        cont.points.emplace_back(static_cast<double>(model.warm_end + 1 + r),
                                 tc.table.continuation[r]);
      }
      value_series.push_back(cont);
    }
    write_line_chart_svg(dir / (stem + "_value_function.svg"),
                         "Value function, cluster " + std::to_string(k), "time step",
                         "value", value_series);

    std::vector<SvgSeries> policy_series;
    auto threshold_line = [&](const StoppingPolicy& policy, const std::string& label,
                              const std::string& color) {
      SvgSeries line{label, color, {}, true};
      for (std::size_t r = 0; r < policy.thresholds.size(); ++r) {
        const int th = policy.thresholds[r];
        if (th >= tc.grid.num_bins) continue;  // row never stops
        line.points.emplace_back(static_cast<double>(policy.first_time + static_cast<int>(r)),
                                 tc.grid.centers[th]);
      }
      policy_series.push_back(std::move(line));
    };
    if (tc.gp.has_value()) threshold_line(tc.policy, "stop at/above", "steelblue");
    threshold_line(tc.sos, "sampled stop at/above", "firebrick");
    write_line_chart_svg(dir / (stem + "_policy.svg"),
                         "Stopping thresholds, cluster " + std::to_string(k), "time step",
                         "price", policy_series);

    if (tc.gp.has_value()) {
      const int t = model.warm_end + 1;
      const PredictiveMarginal marginal = tc.gp->posterior_marginal(t);
      const Eigen::VectorXd probs = transition_probs(marginal, tc.grid);
      const ValuePMF pmf = value_pmf(tc.table, tc.grid, probs, t);
      std::vector<std::pair<double, double>> stems;
      stems.emplace_back(pmf.atom_value, pmf.atom_mass);
      for (const auto& [v, p] : pmf.upper_support) stems.emplace_back(v, p);
      write_stem_chart_svg(dir / (stem + "_value_pmf.svg"),
                           "Value PMF at t = " + std::to_string(t) + ", cluster " +
                               std::to_string(k),
                           "value", "probability", stems);
    }
  }
}

int cmd_report(const CommonArgs& args, const std::string& grouping_name, bool charts,
               const std::string& models_dir) {
  const ExperimentConfig config = resolve_config(args);
  const fs::path dir = prepare_output_dir(args, config);
  const auto results = read_report_csv(args.input_path);
  const ReportSummary summary = aggregate_report(results, grouping_from_string(grouping_name));
  write_summary_json(dir / "summary.json", summary, config);

  {
    std::ofstream out(dir / "summary_groups.csv");
    if (!out) throw DataError("cannot write file: " + (dir / "summary_groups.csv").string());
    out << "group,count,mean_bps,median_bps,std_bps,mean_dollar\n";
    auto line = [&](const GroupStats& g) {
      out << g.group << ',' << g.count << ',' << format_double(g.mean_bps) << ','
          << format_double(g.median_bps) << ',' << format_double(g.std_bps) << ','
          << format_double(g.mean_dollar) << "\n";
    };
    for (const auto& g : summary.groups) line(g);
    line(summary.overall);
  }

  if (charts) {
    if (models_dir.empty()) {
      throw std::invalid_argument("--charts requires --models <model directory>");
    }
    write_charts(dir, load_model(models_dir));
  }
  std::cout << "summary over " << results.size() << " results: mean "
            << format_double(summary.overall.mean_bps) << " bps, median "
            << format_double(summary.overall.median_bps) << " bps\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate optimal stopping for financial time series"};
  app.require_subcommand(1);

  CommonArgs generate_args, cluster_args, train_args, backtest_args, report_args;
  std::string algorithm = "gpos";
  std::string backtest_models;
  std::string grouping = "universal";
  std::string report_models;
  bool charts = false;

  add_common(app.add_subcommand("generate", "Sample synthetic mean-reverting price paths"),
             generate_args, false);
  add_common(app.add_subcommand("cluster", "Cluster series and write centroids and stats"),
             cluster_args, true);
  add_common(app.add_subcommand("train", "Fit per-cluster models and stopping policies"),
             train_args, true);
  CLI::App* backtest =
      app.add_subcommand("backtest", "Walk test series under a trained policy");
  add_common(backtest, backtest_args, true);
  backtest->add_option("--algorithm,-a", algorithm, "gpos, agpos or sos")
      ->check(CLI::IsMember({"gpos", "agpos", "sos"}));
  backtest->add_option("--models", backtest_models,
                       "Model directory (default: <output-dir>/models/<config hash>)");
  CLI::App* report = app.add_subcommand("report", "Aggregate a report CSV into summaries");
  add_common(report, report_args, true);
  report->add_option("--grouping", grouping, "universal or per-asset")
      ->check(CLI::IsMember({"universal", "per-asset"}));
  report->add_flag("--charts", charts, "Also write SVG charts (needs --models)");
  report->add_option("--models", report_models, "Model directory for chart data");

  std::string stage = "parse";
  try {
    app.parse(argc, argv);
    if (app.got_subcommand("generate")) {
      stage = "generate";
      return cmd_generate(generate_args);
    }
    if (app.got_subcommand("cluster")) {
      stage = "cluster";
      return cmd_cluster(cluster_args);
    }
    if (app.got_subcommand("train")) {
      stage = "train";
      return cmd_train(train_args);
    }
    if (app.got_subcommand("backtest")) {
      stage = "backtest";
      return cmd_backtest(backtest_args, algorithm, backtest_models);
    }
    stage = "report";
    return cmd_report(report_args, grouping, charts, report_models);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "gpstop " << stage << ": " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "gpstop " << stage << ": " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "gpstop " << stage << ": " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "gpstop " << stage << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gpstop " << stage << ": " << e.what() << "\n";
    return 3;
  }
}
