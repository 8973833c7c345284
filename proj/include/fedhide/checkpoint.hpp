#pragma once

#include <filesystem>
#include <span>

#include <json.hpp>

#include "fedhide/federation.hpp"

namespace fedhide {

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RoundMetrics& m);
RoundMetrics round_metrics_from_json(const nlohmann::json& j);

// Round, flattened global parameters, proxy table, selection cursor and
// every client's prototype and RNG states: enough to resume bit-exactly.
nlohmann::json checkpoint_json(const Federation& federation);
Federation federation_from_checkpoint(const nlohmann::json& j, std::span<const ClientDataset> datasets);

void save_checkpoint(const std::filesystem::path& path, const Federation& federation);
Federation load_checkpoint(const std::filesystem::path& path, std::span<const ClientDataset> datasets);

}  // namespace fedhide
