#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "gpstop/kernel.hpp"
#include "gpstop/ou.hpp"

namespace gpstop {

enum class Direction { Sell, Buy };
enum class SuboptWindow { FullHorizon, Actionable };
enum class Conditioning { Full, Warm };
enum class Algorithm { Gpos, Agpos, Sos };

Direction direction_from_string(std::string_view name);
SuboptWindow subopt_window_from_string(std::string_view name);
Conditioning conditioning_from_string(std::string_view name);
Algorithm algorithm_from_string(std::string_view name);
std::string to_string(Direction direction);
std::string to_string(SuboptWindow window);
std::string to_string(Conditioning conditioning);
std::string to_string(Algorithm algorithm);

/// Everything a pipeline run depends on. Defaults follow the experimental
/// protocol: 70-30 split, warm start over the first third of the horizon,
/// exponential kernel, unit return timescale.
struct ExperimentConfig {
  int clusters = 1;                  // K
  int bins = 100;                    // M
  double warm_fraction = 1.0 / 3.0;  // W = floor(warm_fraction * T)
  double train_split = 0.7;
  KernelFamily kernel_family = KernelFamily::Exponential;
  int delta_t = 1;
  std::uint64_t seed = 0;
  Direction direction = Direction::Sell;
  SuboptWindow subopt_window = SuboptWindow::FullHorizon;
  Conditioning conditioning = Conditioning::Full;
  bool normalize_prices = true;
  int fit_starts = 8;
  int fit_max_iterations = 200;
  int dba_max_iterations = 30;
  int kmeans_max_iterations = 50;
  int threads = 1;
  OUParams ou;              // `generate` source process
  int generate_count = 160; // paths written by `generate`
};

void validate(const ExperimentConfig& config);

/// Flat `key = value` text, full-line or trailing `#` comments. Unknown
/// keys are rejected.
ExperimentConfig parse_config_file(const std::filesystem::path& path);

void apply_override(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Applies a single `key=value` override as given on the command line.
void apply_override(ExperimentConfig& config, std::string_view key_value);

/// Canonical text form: every key, fixed order, shortest number formatting.
/// Parsing it back reproduces the config exactly.
std::string serialize_config(const ExperimentConfig& config);

/// 16-hex-digit FNV-1a hash of the canonical serialization, excluding
/// execution-only keys (threads); identifies a model directory.
std::string config_hash(const ExperimentConfig& config);

}  // namespace gpstop
