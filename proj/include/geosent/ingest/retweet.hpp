#pragma once

#include "geosent/ingest/post_record.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geosent::ingest {

/// Which spelling of the retweet marker a text used.
enum class MarkerForm {
    handle_colon,  ///< "RT @handle: body"
    colon_at,      ///< "RT : @handle body"
};

struct RetweetMarker {
    std::string handle;
    MarkerForm form = MarkerForm::handle_colon;
    /// Byte offset where the retweeted body starts.
    std::size_t body_offset = 0;
};

/// Recognizes "RT", an optional ':' and then "@handle" with a handle of
/// 1-15 handle characters. A longer handle is not a marker.
std::optional<RetweetMarker> parse_retweet_marker(std::string_view text);

/// True iff the text carries a retweet marker and ends with "..." or U+2026.
/// Depends on the text alone.
bool detect_truncated_retweet(std::string_view text);
bool detect_truncated_retweet(const PostRecord& record);

/// Retweeted body with the marker and truncation suffix removed and trailing
/// whitespace trimmed. Empty when the text is not a truncated retweet.
std::string truncated_stem(std::string_view text);

struct RepairOptions {
    /// Minimum common-prefix length, in code points, between a truncated body
    /// and a candidate original. Stems shorter than this must match in full.
    std::size_t min_prefix = 20;
};

struct AmbiguousMatch {
    std::string retweet_id;
    std::string chosen_id;
    std::vector<std::string> tied_ids;
};

struct RepairResult {
    /// Retained records ordered by (created_at, id).
    std::vector<PostRecord> records;
    std::size_t repaired = 0;
    std::vector<std::string> dropped_ids;
    std::vector<AmbiguousMatch> ambiguities;
    std::size_t handle_colon_markers = 0;
    std::size_t colon_at_markers = 0;
};

/// Replaces the body of every truncated retweet with the full text of its
/// original when the original is in the corpus; drops the retweet otherwise.
/// The retweeting author is kept. Quote posts are never treated as retweets.
RepairResult repair_retweets(std::vector<PostRecord> corpus, const RepairOptions& options = {});

}  // namespace geosent::ingest
