#include "gpstop/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gpstop/csv.hpp"
#include "gpstop/errors.hpp"
#include "gpstop/rng.hpp"

namespace gpstop {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    throw std::invalid_argument("config key '" + std::string(key) +
                                "' needs a finite number, got '" + value + "'");
  }
  return out;
}

long long parse_int(std::string_view key, const std::string& value) {
  long long out = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("config key '" + std::string(key) +
                                "' needs an integer, got '" + value + "'");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, const std::string& value) {
  std::uint64_t out = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("config key '" + std::string(key) +
                                "' needs a non-negative integer, got '" + value + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw std::invalid_argument("config key '" + std::string(key) +
                              "' needs true or false, got '" + value + "'");
}

}  // namespace

Direction direction_from_string(std::string_view name) {
  if (name == "sell") return Direction::Sell;
  if (name == "buy") return Direction::Buy;
  throw std::invalid_argument("unknown direction: " + std::string(name));
}

SuboptWindow subopt_window_from_string(std::string_view name) {
  if (name == "full_horizon") return SuboptWindow::FullHorizon;
  if (name == "actionable") return SuboptWindow::Actionable;
  throw std::invalid_argument("unknown suboptimality window: " + std::string(name));
}

Conditioning conditioning_from_string(std::string_view name) {
  if (name == "full") return Conditioning::Full;
  if (name == "warm") return Conditioning::Warm;
  throw std::invalid_argument("unknown conditioning mode: " + std::string(name));
}

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "gpos") return Algorithm::Gpos;
  if (name == "agpos") return Algorithm::Agpos;
  if (name == "sos") return Algorithm::Sos;
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

std::string to_string(Direction direction) {
  return direction == Direction::Sell ? "sell" : "buy";
}
std::string to_string(SuboptWindow window) {
  return window == SuboptWindow::FullHorizon ? "full_horizon" : "actionable";
}
std::string to_string(Conditioning conditioning) {
  return conditioning == Conditioning::Full ? "full" : "warm";
}
std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Gpos: return "gpos";
    case Algorithm::Agpos: return "agpos";
    case Algorithm::Sos: return "sos";
  }
  return "unknown";
}

void validate(const ExperimentConfig& config) {
  if (config.clusters < 1) throw std::invalid_argument("clusters must be at least 1");
  if (config.bins < 1) throw std::invalid_argument("bins must be at least 1");
  if (!(config.warm_fraction > 0.0 && config.warm_fraction < 1.0)) {
    throw std::invalid_argument("warm_fraction must lie in (0, 1)");
  }
  if (!(config.train_split > 0.0 && config.train_split < 1.0)) {
    throw std::invalid_argument("train_split must lie in (0, 1)");
  }
  if (config.delta_t < 1) throw std::invalid_argument("delta_t must be at least 1");
  if (config.fit_starts < 1) throw std::invalid_argument("fit_starts must be at least 1");
  if (config.fit_max_iterations < 1 || config.dba_max_iterations < 1 ||
      config.kmeans_max_iterations < 1) {
    throw std::invalid_argument("iteration limits must be at least 1");
  }
  if (config.threads < 1) throw std::invalid_argument("threads must be at least 1");
  if (config.generate_count < 1) throw std::invalid_argument("generate_count must be at least 1");
  validate(config.ou);
}

void apply_override(ExperimentConfig& config, std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  if (key == "clusters") config.clusters = static_cast<int>(parse_int(key, value));
  else if (key == "bins") config.bins = static_cast<int>(parse_int(key, value));
  else if (key == "warm_fraction") config.warm_fraction = parse_double(key, value);
  else if (key == "train_split") config.train_split = parse_double(key, value);
  else if (key == "kernel") config.kernel_family = kernel_family_from_string(value);
  else if (key == "delta_t") config.delta_t = static_cast<int>(parse_int(key, value));
  else if (key == "seed") config.seed = parse_u64(key, value);
  else if (key == "direction") config.direction = direction_from_string(value);
  else if (key == "subopt_window") config.subopt_window = subopt_window_from_string(value);
  else if (key == "conditioning") config.conditioning = conditioning_from_string(value);
  else if (key == "normalize") config.normalize_prices = parse_bool(key, value);
  else if (key == "fit_starts") config.fit_starts = static_cast<int>(parse_int(key, value));
  else if (key == "fit_max_iterations")
    config.fit_max_iterations = static_cast<int>(parse_int(key, value));
  else if (key == "dba_max_iterations")
    config.dba_max_iterations = static_cast<int>(parse_int(key, value));
  else if (key == "kmeans_max_iterations")
    config.kmeans_max_iterations = static_cast<int>(parse_int(key, value));
  else if (key == "threads") config.threads = static_cast<int>(parse_int(key, value));
  else if (key == "ou_theta") config.ou.theta = parse_double(key, value);
  else if (key == "ou_mu") config.ou.mu = parse_double(key, value);
  else if (key == "ou_sigma") config.ou.sigma = parse_double(key, value);
  else if (key == "ou_x0") config.ou.x0 = parse_double(key, value);
  else if (key == "ou_horizon") config.ou.horizon = static_cast<int>(parse_int(key, value));
  else if (key == "ou_dt") config.ou.dt = parse_double(key, value);
  else if (key == "generate_count")
    config.generate_count = static_cast<int>(parse_int(key, value));
  else throw std::invalid_argument("unknown config key: " + std::string(key));
}

void apply_override(ExperimentConfig& config, std::string_view key_value) {
  const std::size_t eq = key_value.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("override must look like key=value, got '" +
                                std::string(key_value) + "'");
  }
  apply_override(config, trim(key_value.substr(0, eq)), key_value.substr(eq + 1));
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open config file: " + path.string());
  }
  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  " is not key = value: '" + stripped + "'");
    }
    apply_override(config, trim(stripped.substr(0, eq)), stripped.substr(eq + 1));
  }
  return config;
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "clusters = " << config.clusters << "\n";
  out << "bins = " << config.bins << "\n";
  out << "warm_fraction = " << format_double(config.warm_fraction) << "\n";
  out << "train_split = " << format_double(config.train_split) << "\n";
  out << "kernel = " << to_string(config.kernel_family) << "\n";
  out << "delta_t = " << config.delta_t << "\n";
  out << "seed = " << config.seed << "\n";
  out << "direction = " << to_string(config.direction) << "\n";
  out << "subopt_window = " << to_string(config.subopt_window) << "\n";
  out << "conditioning = " << to_string(config.conditioning) << "\n";
  out << "normalize = " << (config.normalize_prices ? "true" : "false") << "\n";
  out << "fit_starts = " << config.fit_starts << "\n";
  out << "fit_max_iterations = " << config.fit_max_iterations << "\n";
  out << "dba_max_iterations = " << config.dba_max_iterations << "\n";
  out << "kmeans_max_iterations = " << config.kmeans_max_iterations << "\n";
  out << "threads = " << config.threads << "\n";
  out << "ou_theta = " << format_double(config.ou.theta) << "\n";
  out << "ou_mu = " << format_double(config.ou.mu) << "\n";
  out << "ou_sigma = " << format_double(config.ou.sigma) << "\n";
  out << "ou_x0 = " << format_double(config.ou.x0) << "\n";
  out << "ou_horizon = " << config.ou.horizon << "\n";
  out << "ou_dt = " << format_double(config.ou.dt) << "\n";
  out << "generate_count = " << config.generate_count << "\n";
  return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
  ExperimentConfig canonical = config;
  canonical.threads = 1;  // execution-only, must not change the model identity
  const std::uint64_t h = fnv1a64(serialize_config(canonical));
  std::ostringstream out;
  out << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4) out << ((h >> shift) & 0xf);
  return out.str();
}

}  // namespace gpstop
