#include "gpstop/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "gpstop/csv.hpp"
#include "gpstop/errors.hpp"

namespace gpstop {
namespace {

GroupStats stats_for(const std::string& name, const std::vector<const BacktestResult*>& rows) {
  GroupStats s;
  s.group = name;
  s.count = rows.size();
  std::vector<double> bps;
  bps.reserve(rows.size());
  for (const auto* r : rows) {
    bps.push_back(r->sub_bps);
    s.mean_bps += r->sub_bps;
    s.mean_dollar += r->sub_dollar;
  }
  const auto n = static_cast<double>(rows.size());
  s.mean_bps /= n;
  s.mean_dollar /= n;
  std::sort(bps.begin(), bps.end());
  const std::size_t mid = bps.size() / 2;
  s.median_bps = bps.size() % 2 == 1 ? bps[mid] : 0.5 * (bps[mid - 1] + bps[mid]);
  double var = 0.0;
  for (double b : bps) var += (b - s.mean_bps) * (b - s.mean_bps);
  s.std_bps = std::sqrt(var / n);
  return s;
}

nlohmann::json to_json(const GroupStats& s) {
  nlohmann::json j;
  j["group"] = s.group;
  j["count"] = s.count;
  j["mean_bps"] = s.mean_bps;
  j["median_bps"] = s.median_bps;
  j["std_bps"] = s.std_bps;
  j["mean_dollar"] = s.mean_dollar;
  return j;
}

}  // namespace

Grouping grouping_from_string(std::string_view name) {
  if (name == "universal") return Grouping::Universal;
  if (name == "per-asset" || name == "per_asset") return Grouping::PerAsset;
  throw std::invalid_argument("unknown grouping: " + std::string(name));
}

std::string to_string(Grouping grouping) {
  return grouping == Grouping::Universal ? "universal" : "per-asset";
}

std::string asset_group(const BacktestResult& result) {
  if (!result.asset.empty()) return result.asset;
  const std::size_t underscore = result.series_id.rfind('_');
  if (underscore != std::string::npos && underscore > 0) {
    return result.series_id.substr(0, underscore);
  }
  return result.series_id;
}

ReportSummary aggregate_report(const std::vector<BacktestResult>& results, Grouping grouping) {
  if (results.empty()) {
    throw std::invalid_argument("aggregate_report requires at least one result");
  }
  ReportSummary summary;
  summary.grouping = grouping;

  std::vector<const BacktestResult*> all;
  all.reserve(results.size());
  for (const auto& r : results) all.push_back(&r);
  summary.overall = stats_for("overall", all);

  if (grouping == Grouping::PerAsset) {
    std::map<std::string, std::vector<const BacktestResult*>> groups;
    for (const auto& r : results) groups[asset_group(r)].push_back(&r);
    for (const auto& [name, rows] : groups) summary.groups.push_back(stats_for(name, rows));
  } else {
    summary.groups.push_back(summary.overall);
    summary.groups.back().group = "all";
  }
  return summary;
}

void write_report_csv(const std::filesystem::path& path,
                      const std::vector<BacktestResult>& results) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "series_id,algorithm,cluster,stop_time,stop_price,true_max,sub_dollar,sub_bps\n";
  for (const auto& r : results) {
    out << r.series_id << ',' << to_string(r.algorithm) << ',' << r.cluster << ','
        << r.stop_time << ',' << format_double(r.stop_price) << ','
        << format_double(r.true_max) << ',' << format_double(r.sub_dollar) << ','
        << format_double(r.sub_bps) << "\n";
  }
}

std::vector<BacktestResult> read_report_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw DataError("empty report CSV: " + path.string());
  const std::string expected =
      "series_id,algorithm,cluster,stop_time,stop_price,true_max,sub_dollar,sub_bps";
  if (lines.front() != expected) {
    throw DataError("unexpected report header in " + path.string());
  }
  std::vector<BacktestResult> results;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv_line(lines[r]);
    if (cells.size() != 8) {
      throw DataError("ragged row " + std::to_string(r + 1) + ": has " +
                      std::to_string(cells.size()) + " cells, expected 8");
    }
    BacktestResult result;
    result.series_id = cells[0];
    result.algorithm = algorithm_from_string(cells[1]);
    result.cluster = static_cast<int>(parse_csv_double(cells[2], r + 1, 3));
    result.stop_time = static_cast<int>(parse_csv_double(cells[3], r + 1, 4));
    result.stop_price = parse_csv_double(cells[4], r + 1, 5);
    result.true_max = parse_csv_double(cells[5], r + 1, 6);
    result.sub_dollar = parse_csv_double(cells[6], r + 1, 7);
    result.sub_bps = parse_csv_double(cells[7], r + 1, 8);
    results.push_back(std::move(result));
  }
  if (results.empty()) throw DataError("no data rows in " + path.string());
  return results;
}

void write_summary_json(const std::filesystem::path& path, const ReportSummary& summary,
                        const ExperimentConfig& config) {
  nlohmann::json j;
  j["format"] = "gpstop.summary/1";
  j["grouping"] = to_string(summary.grouping);
  j["overall"] = to_json(summary.overall);
  j["groups"] = nlohmann::json::array();
  for (const auto& g : summary.groups) j["groups"].push_back(to_json(g));

  nlohmann::json cfg;
  std::istringstream lines(serialize_config(config));
  std::string line;
  while (std::getline(lines, line)) {
    const std::size_t eq = line.find(" = ");
    if (eq != std::string::npos) cfg[line.substr(0, eq)] = line.substr(eq + 3);
  }
  j["config"] = cfg;

  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace gpstop
