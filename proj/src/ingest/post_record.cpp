#include "geosent/ingest/post_record.hpp"

#include "geosent/ingest/retweet.hpp"

#include <stdexcept>
#include <tuple>

namespace geosent::ingest {

std::string_view to_string(PostKind kind) {
    switch (kind) {
        case PostKind::original: return "original";
        case PostKind::retweet: return "retweet";
        case PostKind::quote: return "quote";
    }
    return "original";
}

std::optional<PostKind> parse_post_kind(std::string_view text) {
    if (text == "original") return PostKind::original;
    if (text == "retweet") return PostKind::retweet;
    if (text == "quote") return PostKind::quote;
    return std::nullopt;
}

bool chronological_less(const PostRecord& a, const PostRecord& b) {
    return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
}

bool is_valid_handle(std::string_view handle) {
    if (handle.empty() || handle.size() > kMaxHandleLength) return false;
    for (char c : handle) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

nlohmann::ordered_json to_json(const PostRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["author_id"] = r.author_id;
    j["author_handle"] = r.author_handle;
    j["created_at"] = format_rfc3339(r.created_at);
    j["text"] = r.text;
    j["like_count"] = r.like_count;
    j["retweet_count"] = r.retweet_count;
    j["post_geo"] = r.post_geo ? nlohmann::ordered_json(*r.post_geo) : nlohmann::ordered_json(nullptr);
    j["user_location"] = r.user_location ? nlohmann::ordered_json(*r.user_location) : nlohmann::ordered_json(nullptr);
    j["kind"] = std::string(to_string(r.kind));
    return j;
}

namespace {

const nlohmann::json& require(const nlohmann::json& object, const char* key) {
    const auto it = object.find(key);
    if (it == object.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const nlohmann::json& object, const char* key) {
    const auto& v = require(object, key);
    if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t require_count(const nlohmann::json& object, const char* key) {
    const auto& v = require(object, key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw std::invalid_argument(std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::optional<std::string> optional_string(const nlohmann::json& object, const char* key) {
    const auto it = object.find(key);
    if (it == object.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string or null");
    return it->get<std::string>();
}

}  // namespace

PostRecord post_from_json(const nlohmann::json& object) {
    if (!object.is_object()) throw std::invalid_argument("record is not an object");

    PostRecord r;
    r.id = require_string(object, "id");
    if (r.id.empty()) throw std::invalid_argument("empty id");
    r.author_id = require_string(object, "author_id");
    if (r.author_id.empty()) throw std::invalid_argument("empty author_id");
    r.author_handle = require_string(object, "author_handle");
    if (!is_valid_handle(r.author_handle)) {
        throw std::invalid_argument("author_handle '" + r.author_handle + "' is not a valid handle");
    }
    r.created_at = parse_rfc3339(require_string(object, "created_at"));
    if (utc_year(r.created_at) < 2006) throw std::invalid_argument("created_at predates 2006");
    r.text = require_string(object, "text");
    r.like_count = require_count(object, "like_count");
    r.retweet_count = require_count(object, "retweet_count");
    r.post_geo = optional_string(object, "post_geo");
    r.user_location = optional_string(object, "user_location");
    const auto kind = parse_post_kind(require_string(object, "kind"));
    if (!kind) throw std::invalid_argument("unknown kind '" + require_string(object, "kind") + "'");
    r.kind = *kind;
    if (r.kind == PostKind::retweet && !parse_retweet_marker(r.text)) {
        throw std::invalid_argument("retweet text does not start with a retweet marker");
    }
    return r;
}

}  // namespace geosent::ingest
