#pragma once

#include "geosent/core/timestamp.hpp"
#include "geosent/ingest/fetch_client.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace geosent::pipeline {

enum class Backend { baseline, external };

/// Pipeline configuration. Relative paths are resolved against the directory
/// of the config file.
struct Config {
    std::filesystem::path run_dir;

    std::filesystem::path corpus;
    std::filesystem::path gazetteer;
    std::optional<std::filesystem::path> regions;
    std::filesystem::path stopwords;
    std::filesystem::path keywords;
    std::optional<std::filesystem::path> annotations;
    std::optional<std::filesystem::path> survey;

    std::uint64_t seed = 20221001;

    std::optional<Timestamp> window_start;
    std::optional<Timestamp> window_end;

    Backend backend = Backend::baseline;
    std::string adapter;  ///< "exec:..." or "tcp:host:port"
    std::chrono::milliseconds adapter_timeout{30000};
    std::size_t adapter_batch_size = 64;
    unsigned hash_bits = 16;
    double l2 = 1e-3;
    double validation_fraction = 0.2;

    std::size_t min_chars = 5;
    std::size_t min_prefix = 20;

    double resolution = 1.0;
    std::size_t min_community_size = 5;
    bool shuffle_louvain = false;

    std::size_t sample_size = 50;
    std::string sample_mode = "lowest_margin";

    ingest::FetchConfig fetch;

    /// The effective configuration as JSON; its digest identifies the run.
    nlohmann::ordered_json to_json() const;
};

/// Throws ConfigError on unknown keys, wrong types or missing required paths.
Config load_config(const std::filesystem::path& path);
Config config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

}  // namespace geosent::pipeline
