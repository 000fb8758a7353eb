#pragma once

#include "geosent/ingest/post_record.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace geosent::ingest {

/// The keyword query used for the wind-power corpus.
std::string default_search_query();

/// Search endpoint client for a platform archive API. Disabled unless
/// configured; nothing in the pipeline depends on it.
struct FetchConfig {
    bool enabled = false;
    std::string base_url;  ///< e.g. "http://127.0.0.1:8080"
    std::string path = "/2/tweets/search/all";
    std::string bearer_token;
    std::string query = default_search_query();
    std::optional<std::string> start_time;  ///< RFC 3339
    std::optional<std::string> end_time;
    int max_results = 100;
    std::size_t max_pages = 1000;
    int timeout_seconds = 30;
};

struct FetchPage {
    std::vector<PostRecord> records;
    std::optional<std::string> next_token;
    std::vector<std::string> skipped;  ///< ids that could not be mapped, with reason
};

/// Maps one search response ({"data": [...], "includes": {"users", "places"},
/// "meta": {"next_token"}}) onto post records.
FetchPage map_search_response(const nlohmann::json& response);

/// Follows next_token until exhausted or max_pages. Throws ConfigError when
/// disabled and InputError on transport or HTTP failures.
std::vector<PostRecord> fetch_posts(const FetchConfig& config);

}  // namespace geosent::ingest
