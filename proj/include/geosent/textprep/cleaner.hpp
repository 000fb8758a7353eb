#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace geosent::textprep {

struct CleanedDocument {
    std::string post_id;
    std::vector<std::string> tokens;
    std::size_t raw_length = 0;    ///< code points in the input text
    std::size_t clean_length = 0;  ///< code points in tokens joined by single spaces

    /// Code points across tokens, separators excluded.
    std::size_t content_length() const;
    std::string joined() const;

    friend bool operator==(const CleanedDocument&, const CleanedDocument&) = default;
};

/// A post whose cleaned text fell below the minimum length.
struct Dropped {
    CleanedDocument residue;
};

using CleanOutcome = std::variant<CleanedDocument, Dropped>;

/// Folded (NFC + case-folded) term set.
class TermSet {
public:
    TermSet() = default;
    explicit TermSet(const std::vector<std::string>& terms);

    /// One term per line, UTF-8; blank lines are skipped.
    static TermSet load(const std::filesystem::path& path);

    bool contains(std::string_view folded_token) const;
    std::size_t size() const noexcept { return terms_.size(); }
    const std::set<std::string, std::less<>>& terms() const noexcept { return terms_; }

private:
    std::set<std::string, std::less<>> terms_;
};

struct CleanerConfig {
    TermSet stopwords;
    TermSet keywords;
    std::size_t min_chars = 5;
};

/// True for a chunk that is a URL with a scheme, a "www." address or a bare
/// domain such as "nrk.no/nyheter".
bool looks_like_url(std::string_view chunk);

/// Removes URLs, @-mentions, emoji, a leading retweet marker, stop words and
/// search keywords, then lower-cases and segments into words. Drops the post
/// when fewer than `min_chars` code points (separators excluded) remain.
CleanOutcome clean(std::string_view post_id, std::string_view text, const CleanerConfig& config);

}  // namespace geosent::textprep
