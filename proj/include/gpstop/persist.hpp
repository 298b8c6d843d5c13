#pragma once

#include <filesystem>

#include "gpstop/harness.hpp"

namespace gpstop {

/// Writes `<root>/<config_hash>/` containing manifest.json,
/// resolved_config.cfg and, per cluster k, cluster_<k>.model /
/// cluster_<k>.policy / cluster_<k>.grid as self-describing JSON documents.
/// Returns the model directory.
std::filesystem::path save_model(const std::filesystem::path& root, const TrainedModel& model);

/// Directory a model with this config would be saved to.
std::filesystem::path model_dir_for(const std::filesystem::path& root,
                                    const ExperimentConfig& config);

/// Reloads a persisted model; the GP factorization is recomputed from the
/// stored conditioning data, which is deterministic. Throws DataError when
/// the directory is missing or malformed.
TrainedModel load_model(const std::filesystem::path& dir);

}  // namespace gpstop
