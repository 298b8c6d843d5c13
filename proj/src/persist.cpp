#include "gpstop/persist.hpp"

#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "gpstop/errors.hpp"

namespace gpstop {
namespace {

using nlohmann::json;

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << j.dump(2) << "\n";
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void check_format(const json& j, const std::string& expected, const std::filesystem::path& path) {
  if (!j.contains("format") || j["format"] != expected) {
    throw DataError("file " + path.string() + " is not a " + expected + " document");
  }
}

std::vector<int> thresholds_from(const json& j) {
  std::vector<int> t;
  for (const auto& x : j) t.push_back(x.get<int>());
  return t;
}

}  // namespace

std::filesystem::path model_dir_for(const std::filesystem::path& root,
                                    const ExperimentConfig& config) {
  return root / config_hash(config);
}

std::filesystem::path save_model(const std::filesystem::path& root, const TrainedModel& model) {
  const std::filesystem::path dir = model_dir_for(root, model.config);
  std::filesystem::create_directories(dir);

  {
    std::ofstream cfg(dir / "resolved_config.cfg");
    if (!cfg) throw DataError("cannot write file: " + (dir / "resolved_config.cfg").string());
    cfg << serialize_config(model.config);
  }

  json manifest;
  manifest["format"] = "gpstop.manifest/1";
  manifest["config_hash"] = config_hash(model.config);
  manifest["horizon"] = model.horizon;
  manifest["warm_end"] = model.warm_end;
  manifest["clusters"] = model.clusters.size();
  manifest["train_ids"] = model.train_ids;
  manifest["test_ids"] = model.test_ids;
  write_json(dir / "manifest.json", manifest);

  for (std::size_t k = 0; k < model.clusters.size(); ++k) {
    const TrainedCluster& tc = model.clusters[k];
    const std::string stem = "cluster_" + std::to_string(k);

    json grid;
    grid["format"] = "gpstop.grid/1";
    grid["bins"] = tc.grid.num_bins;
    grid["lo"] = tc.grid.lo;
    grid["hi"] = tc.grid.hi;
    write_json(dir / (stem + ".grid"), grid);

    json m;
    m["format"] = "gpstop.model/1";
    m["cluster"] = k;
    m["member_ids"] = tc.cluster.member_ids;
    m["centroid_prices"] = to_json(tc.cluster.centroid_prices.values);
    m["centroid_returns"] = to_json(tc.cluster.centroid_returns.values);
    m["delta_t"] = tc.cluster.centroid_returns.delta_t;
    m["volatility"] = tc.cluster.stats.volatility;
    m["kurtosis"] = tc.cluster.stats.kurtosis;
    m["degenerate_returns"] = tc.cluster.stats.degenerate;
    m["sos_values"] = to_json(tc.sos_values_full);
    if (tc.gp.has_value()) {
      json gp;
      gp["kernel_family"] = to_string(tc.gp->kernel().family);
      gp["lengthscale"] = tc.gp->kernel().lengthscale;
      gp["signal_variance"] = tc.gp->kernel().signal_variance;
      gp["extra"] = tc.gp->kernel().extra;
      gp["noise_variance"] = tc.gp->noise_variance();
      gp["train_times"] = to_json(tc.gp->train_times());
      gp["train_values"] = to_json(tc.gp->train_values());
      m["gp"] = gp;
    } else {
      m["gp"] = nullptr;
    }
    write_json(dir / (stem + ".model"), m);

    json p;
    p["format"] = "gpstop.policy/1";
    p["first_time"] = model.warm_end + 1;
    p["horizon"] = model.horizon;
    p["num_bins"] = tc.grid.num_bins;
    p["sos_thresholds"] = tc.sos.thresholds;
    if (tc.gp.has_value()) {
      json cont = json::array();
      for (Eigen::Index r = 0; r + 1 < tc.table.rows(); ++r) {
        cont.push_back(tc.table.continuation[r]);
      }
      p["continuation"] = cont;
      p["gpos_thresholds"] = tc.policy.thresholds;
    } else {
      p["continuation"] = nullptr;
      p["gpos_thresholds"] = nullptr;
    }
    write_json(dir / (stem + ".policy"), p);
  }
  return dir;
}

TrainedModel load_model(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "manifest.json")) {
    throw DataError("missing model directory: " + dir.string());
  }
  const json manifest = read_json(dir / "manifest.json");
  check_format(manifest, "gpstop.manifest/1", dir / "manifest.json");

  TrainedModel model;
  model.config = parse_config_file(dir / "resolved_config.cfg");
  model.horizon = manifest["horizon"].get<int>();
  model.warm_end = manifest["warm_end"].get<int>();
  model.train_ids = manifest["train_ids"].get<std::vector<std::string>>();
  model.test_ids = manifest["test_ids"].get<std::vector<std::string>>();

  const auto n_clusters = manifest["clusters"].get<std::size_t>();
  for (std::size_t k = 0; k < n_clusters; ++k) {
    const std::string stem = "cluster_" + std::to_string(k);
    const json g = read_json(dir / (stem + ".grid"));
    check_format(g, "gpstop.grid/1", dir / (stem + ".grid"));
    const json m = read_json(dir / (stem + ".model"));
    check_format(m, "gpstop.model/1", dir / (stem + ".model"));
    const json p = read_json(dir / (stem + ".policy"));
    check_format(p, "gpstop.policy/1", dir / (stem + ".policy"));

    TrainedCluster tc;
    tc.grid = make_bin_grid_range(g["lo"].get<double>(), g["hi"].get<double>(),
                                  g["bins"].get<int>());
    tc.cluster.member_ids = m["member_ids"].get<std::vector<std::string>>();
    tc.cluster.centroid_prices.id = "cluster_" + std::to_string(k) + "_centroid";
    tc.cluster.centroid_prices.values = vector_from(m["centroid_prices"]);
    tc.cluster.centroid_returns =
        ReturnSeries{"centroid", m["delta_t"].get<int>(), vector_from(m["centroid_returns"])};
    tc.cluster.stats.volatility = m["volatility"].get<double>();
    tc.cluster.stats.kurtosis = m["kurtosis"].get<double>();
    tc.cluster.stats.degenerate = m["degenerate_returns"].get<bool>();
    tc.sos_values_full = vector_from(m["sos_values"]);

    const int first_time = p["first_time"].get<int>();
    tc.sos = StoppingPolicy{first_time, tc.grid.num_bins, thresholds_from(p["sos_thresholds"])};

    if (!m["gp"].is_null()) {
      const json& gp = m["gp"];
      KernelSpec spec;
      spec.family = kernel_family_from_string(gp["kernel_family"].get<std::string>());
      spec.lengthscale = gp["lengthscale"].get<double>();
      spec.signal_variance = gp["signal_variance"].get<double>();
      spec.extra = gp["extra"].get<double>();
      tc.gp.emplace(spec, gp["noise_variance"].get<double>(), vector_from(gp["train_times"]),
                    vector_from(gp["train_values"]));

      const Eigen::VectorXd cont = vector_from(p["continuation"]);
      tc.table.first_time = first_time;
      tc.table.horizon = model.horizon;
      const Eigen::Index rows = cont.size() + 1;
      tc.table.values.resize(rows, tc.grid.num_bins);
      tc.table.continuation.resize(rows);
      tc.table.continuation.head(cont.size()) = cont;
      tc.table.continuation[rows - 1] = -std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < rows; ++r) {
        tc.table.values.row(r) =
            tc.grid.centers.array().max(tc.table.continuation[r]).transpose();
      }
      tc.policy =
          StoppingPolicy{first_time, tc.grid.num_bins, thresholds_from(p["gpos_thresholds"])};
    }
    model.clusters.push_back(std::move(tc));
  }
  return model;
}

}  // namespace gpstop
