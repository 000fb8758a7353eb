#pragma once

#include "geosent/core/timestamp.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace geosent::ingest {

enum class PostKind { original, retweet, quote };

std::string_view to_string(PostKind kind);
std::optional<PostKind> parse_post_kind(std::string_view text);

inline constexpr std::size_t kMaxHandleLength = 15;

struct PostRecord {
    std::string id;
    std::string author_id;
    std::string author_handle;
    Timestamp created_at{};
    std::string text;
    std::uint64_t like_count = 0;
    std::uint64_t retweet_count = 0;
    std::optional<std::string> post_geo;
    std::optional<std::string> user_location;
    PostKind kind = PostKind::original;

    friend bool operator==(const PostRecord&, const PostRecord&) = default;
};

/// Stable corpus order: (created_at, id).
bool chronological_less(const PostRecord& a, const PostRecord& b);

bool is_valid_handle(std::string_view handle);

nlohmann::ordered_json to_json(const PostRecord& record);

/// Validates every field; throws std::invalid_argument naming the problem.
PostRecord post_from_json(const nlohmann::json& object);

}  // namespace geosent::ingest
