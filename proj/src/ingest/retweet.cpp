#include "geosent/ingest/retweet.hpp"

#include <algorithm>
#include <map>

namespace geosent::ingest {

namespace {

constexpr std::string_view kEllipsis = "\xE2\x80\xA6";  // U+2026

bool is_handle_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::size_t skip_spaces(std::string_view text, std::size_t pos) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    return pos;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

/// Common prefix of two UTF-8 strings, measured in code points and cut at a
/// code point boundary.
std::size_t common_prefix_code_points(std::string_view a, std::string_view b) {
    const auto mismatch = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
    std::size_t bytes = static_cast<std::size_t>(mismatch.first - a.begin());
    // Back off a partially shared multi-byte sequence.
    if (bytes < a.size() || bytes < b.size()) {
        while (bytes > 0 && ((bytes < a.size() && is_continuation(static_cast<unsigned char>(a[bytes]))) ||
                             (bytes < b.size() && is_continuation(static_cast<unsigned char>(b[bytes]))))) {
            --bytes;
        }
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < bytes; ++i) {
        if (!is_continuation(static_cast<unsigned char>(a[i]))) ++count;
    }
    return count;
}

std::size_t code_points(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return !is_continuation(static_cast<unsigned char>(c)); }));
}

}  // namespace

std::optional<RetweetMarker> parse_retweet_marker(std::string_view text) {
    if (!text.starts_with("RT")) return std::nullopt;
    std::size_t pos = skip_spaces(text, 2);
    RetweetMarker marker;
    if (pos < text.size() && text[pos] == ':') {
        marker.form = MarkerForm::colon_at;
        pos = skip_spaces(text, pos + 1);
    } else if (pos == 2) {
        return std::nullopt;  // "RTfoo"
    }
    if (pos >= text.size() || text[pos] != '@') return std::nullopt;
    ++pos;
    const std::size_t handle_start = pos;
    while (pos < text.size() && is_handle_char(text[pos])) ++pos;
    const std::size_t handle_len = pos - handle_start;
    if (handle_len == 0 || handle_len > kMaxHandleLength) return std::nullopt;
    marker.handle = std::string(text.substr(handle_start, handle_len));

    if (pos < text.size() && text[pos] == ':') {
        ++pos;
    } else if (marker.form == MarkerForm::handle_colon) {
        return std::nullopt;  // "RT @handle" must be followed by ':'
    }
    marker.body_offset = skip_spaces(text, pos);
    return marker;
}

bool detect_truncated_retweet(std::string_view text) {
    if (!parse_retweet_marker(text)) return false;
    return text.ends_with("...") || text.ends_with(kEllipsis);
}

bool detect_truncated_retweet(const PostRecord& record) { return detect_truncated_retweet(record.text); }

std::string truncated_stem(std::string_view text) {
    const auto marker = parse_retweet_marker(text);
    if (!marker || !detect_truncated_retweet(text)) return {};
    std::string_view body = text.substr(marker->body_offset);
    if (body.ends_with(kEllipsis)) {
        body.remove_suffix(kEllipsis.size());
    } else {
        body.remove_suffix(3);
    }
    while (!body.empty() && is_space(body.back())) body.remove_suffix(1);
    return std::string(body);
}

RepairResult repair_retweets(std::vector<PostRecord> corpus, const RepairOptions& options) {
    RepairResult result;
    std::sort(corpus.begin(), corpus.end(), chronological_less);

    // Candidate originals by lower-cased author handle, in corpus order. Posts
    // that are themselves retweets, marked or not, cannot be originals.
    std::map<std::string, std::vector<std::size_t>> by_handle;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus[i].kind == PostKind::retweet || parse_retweet_marker(corpus[i].text)) continue;
        by_handle[lower_ascii(corpus[i].author_handle)].push_back(i);
    }

    std::vector<bool> keep(corpus.size(), true);
    std::vector<std::string> replacement(corpus.size());
    std::vector<bool> replaced(corpus.size(), false);

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const PostRecord& post = corpus[i];
        if (post.kind == PostKind::quote || !detect_truncated_retweet(post.text)) continue;

        const auto marker = parse_retweet_marker(post.text);
        if (marker->form == MarkerForm::handle_colon) {
            ++result.handle_colon_markers;
        } else {
            ++result.colon_at_markers;
        }
        const std::string stem = truncated_stem(post.text);
        const std::size_t required = std::min(options.min_prefix, code_points(stem));

        std::size_t best_len = 0;
        std::vector<std::size_t> best;
        if (const auto it = by_handle.find(lower_ascii(marker->handle)); it != by_handle.end()) {
            for (std::size_t candidate : it->second) {
                if (candidate == i) continue;
                const std::size_t len = common_prefix_code_points(stem, corpus[candidate].text);
                if (len < required || len == 0) continue;
                if (len > best_len) {
                    best_len = len;
                    best.assign(1, candidate);
                } else if (len == best_len) {
                    best.push_back(candidate);
                }
            }
        }

        if (best.empty()) {
            keep[i] = false;
            result.dropped_ids.push_back(post.id);
            continue;
        }
        // Candidates are in (created_at, id) order, so the first is the earliest.
        const std::size_t chosen = best.front();
        if (best.size() > 1) {
            AmbiguousMatch note{post.id, corpus[chosen].id, {}};
            for (std::size_t c : best) note.tied_ids.push_back(corpus[c].id);
            result.ambiguities.push_back(std::move(note));
        }
        std::string repaired = post.text.substr(0, marker->body_offset) + corpus[chosen].text;
        if (repaired != post.text) {
            replacement[i] = std::move(repaired);
            replaced[i] = true;
            ++result.repaired;
        }
    }

    result.records.reserve(corpus.size() - result.dropped_ids.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!keep[i]) continue;
        if (replaced[i]) corpus[i].text = std::move(replacement[i]);
        result.records.push_back(std::move(corpus[i]));
    }
    return result;
}

}  // namespace geosent::ingest
