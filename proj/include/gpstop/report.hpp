#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gpstop/harness.hpp"

namespace gpstop {

enum class Grouping { Universal, PerAsset };

Grouping grouping_from_string(std::string_view name);
std::string to_string(Grouping grouping);

struct GroupStats {
  std::string group;
  std::size_t count = 0;
  double mean_bps = 0.0;
  double median_bps = 0.0;
  double std_bps = 0.0;  // population standard deviation
  double mean_dollar = 0.0;
};

struct ReportSummary {
  Grouping grouping = Grouping::Universal;
  std::vector<GroupStats> groups;  // sorted by group name
  GroupStats overall;
};

/// Group label of a result: the asset when set, otherwise the series id up
/// to its last underscore (ids like AAPL_3 group as AAPL), otherwise the id.
std::string asset_group(const BacktestResult& result);

ReportSummary aggregate_report(const std::vector<BacktestResult>& results, Grouping grouping);

/// Columns: series_id,algorithm,cluster,stop_time,stop_price,true_max,
/// sub_dollar,sub_bps.
void write_report_csv(const std::filesystem::path& path,
                      const std::vector<BacktestResult>& results);
std::vector<BacktestResult> read_report_csv(const std::filesystem::path& path);

/// Machine-readable summary: per-group and overall statistics plus the full
/// resolved configuration.
void write_summary_json(const std::filesystem::path& path, const ReportSummary& summary,
                        const ExperimentConfig& config);

}  // namespace gpstop
