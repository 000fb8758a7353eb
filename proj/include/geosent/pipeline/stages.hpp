#pragma once

#include "geosent/pipeline/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace geosent::pipeline {

inline constexpr std::string_view kManifestFile = "manifest.json";

/// Stage names in execution order.
const std::vector<std::string>& stage_names();

/// Runs one stage against the configured run directory. Each stage reads
/// upstream artifacts, writes its own and records them in manifest.json.
/// Throws StageOrderError when an upstream artifact is missing.
void run_stage(std::string_view stage, const Config& config, std::ostream& log);

/// Every stage in order; train is skipped for the external backend.
void run_all(const Config& config, std::ostream& log);

/// Fetches posts into the configured corpus path.
void run_fetch(const Config& config, std::ostream& log);

/// Digest of the canonical effective configuration.
std::string config_hash(const Config& config);

nlohmann::ordered_json read_manifest(const std::filesystem::path& run_dir);

}  // namespace geosent::pipeline
