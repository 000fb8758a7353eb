#include "geosent/textprep/cleaner.hpp"

#include "geosent/ingest/retweet.hpp"
#include "geosent/textprep/unicode.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>

namespace geosent::textprep {

namespace {

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || (c >= '0' && c <= '9'); }
bool is_handle_char(char c) { return is_ascii_alnum(c) || c == '_'; }

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool istarts_with(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (lower(s[i]) != prefix[i]) return false;
    }
    return true;
}

constexpr std::array<std::string_view, 24> kDomainSuffixes = {
    "com", "net", "org", "no", "se", "dk", "fi", "de", "uk", "eu", "io", "co",
    "info", "ly", "gl", "me", "tv", "be", "nu", "is", "app", "ai", "news", "gov",
};

std::string_view trim_punct(std::string_view s) {
    constexpr std::string_view punct = "()[]{}<>\"'.,;:!?";
    while (!s.empty() && punct.find(s.front()) != std::string_view::npos) s.remove_prefix(1);
    while (!s.empty() && punct.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
    return s;
}

/// Position of a "scheme://" start inside the chunk, or npos.
std::size_t find_scheme(std::string_view chunk) {
    for (std::size_t sep = chunk.find("://"); sep != std::string_view::npos; sep = chunk.find("://", sep + 1)) {
        std::size_t start = sep;
        while (start > 0 && (is_ascii_alnum(chunk[start - 1]) || chunk[start - 1] == '+' ||
                             chunk[start - 1] == '-' || chunk[start - 1] == '.')) {
            --start;
        }
        // Scheme must begin with a letter.
        while (start < sep && !is_ascii_alpha(chunk[start])) ++start;
        if (start < sep) return start;
    }
    return std::string_view::npos;
}

std::size_t find_www(std::string_view chunk) {
    for (std::size_t i = 0; i + 4 <= chunk.size(); ++i) {
        if ((i == 0 || !is_ascii_alnum(chunk[i - 1])) && istarts_with(chunk.substr(i), "www.")) return i;
    }
    return std::string_view::npos;
}

bool is_bare_domain(std::string_view s) {
    s = trim_punct(s);
    const std::string_view host = s.substr(0, s.find('/'));
    if (host.empty() || host.find('.') == std::string_view::npos) return false;
    std::size_t labels = 0;
    std::string_view last;
    std::size_t start = 0;
    while (start <= host.size()) {
        std::size_t end = host.find('.', start);
        if (end == std::string_view::npos) end = host.size();
        const std::string_view label = host.substr(start, end - start);
        if (label.empty()) return false;
        for (char c : label) {
            if (!is_ascii_alnum(c) && c != '-') return false;
        }
        ++labels;
        last = label;
        start = end + 1;
    }
    if (labels < 2) return false;
    std::string suffix(last);
    std::transform(suffix.begin(), suffix.end(), suffix.begin(), lower);
    return std::find(kDomainSuffixes.begin(), kDomainSuffixes.end(), suffix) != kDomainSuffixes.end();
}

/// Drops "@handle" where '@' starts the chunk or follows a non-handle char.
std::string remove_mentions(std::string_view chunk) {
    std::string out;
    out.reserve(chunk.size());
    for (std::size_t i = 0; i < chunk.size();) {
        if (chunk[i] == '@' && (i == 0 || !is_handle_char(chunk[i - 1])) && i + 1 < chunk.size() &&
            is_handle_char(chunk[i + 1])) {
            std::size_t j = i + 1;
            while (j < chunk.size() && is_handle_char(chunk[j])) ++j;
            out.push_back(' ');
            i = j;
            continue;
        }
        out.push_back(chunk[i++]);
    }
    return out;
}

std::string scrub_chunk(std::string_view chunk) {
    if (const std::size_t pos = find_scheme(chunk); pos != std::string_view::npos) chunk = chunk.substr(0, pos);
    if (const std::size_t pos = find_www(chunk); pos != std::string_view::npos) chunk = chunk.substr(0, pos);
    if (is_bare_domain(chunk)) return {};
    return remove_mentions(chunk);
}

}  // namespace

std::size_t CleanedDocument::content_length() const {
    std::size_t n = 0;
    for (const auto& t : tokens) n += code_point_count(t);
    return n;
}

std::string CleanedDocument::joined() const {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

TermSet::TermSet(const std::vector<std::string>& terms) {
    for (const auto& term : terms) {
        std::string folded = fold(term);
        const auto first = folded.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        const auto last = folded.find_last_not_of(" \t\r\n");
        terms_.insert(folded.substr(first, last - first + 1));
    }
}

TermSet TermSet::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read term file " + path.string());
    std::vector<std::string> terms;
    std::string line;
    while (std::getline(in, line)) terms.push_back(line);
    return TermSet(terms);
}

bool TermSet::contains(std::string_view folded_token) const { return terms_.find(folded_token) != terms_.end(); }

bool looks_like_url(std::string_view chunk) {
    return find_scheme(chunk) != std::string_view::npos || find_www(chunk) != std::string_view::npos ||
           is_bare_domain(chunk);
}

CleanOutcome clean(std::string_view post_id, std::string_view text, const CleanerConfig& config) {
    CleanedDocument doc;
    doc.post_id = std::string(post_id);
    doc.raw_length = code_point_count(text);

    std::string_view body = text;
    if (const auto marker = ingest::parse_retweet_marker(body)) body.remove_prefix(marker->body_offset);

    const std::string without_emoji = strip_emoji(body);
    const std::string_view rest = without_emoji;
    std::string scrubbed;
    for (std::size_t i = 0; i < rest.size();) {
        while (i < rest.size() && is_ascii_space(rest[i])) ++i;
        std::size_t j = i;
        while (j < rest.size() && !is_ascii_space(rest[j])) ++j;
        if (j > i) {
            const std::string piece = scrub_chunk(rest.substr(i, j - i));
            if (!piece.empty()) {
                scrubbed += piece;
                scrubbed.push_back(' ');
            }
        }
        i = j;
    }

    for (auto& token : word_tokens(fold(scrubbed))) {
        if (looks_like_url(token)) continue;
        if (config.stopwords.contains(token) || config.keywords.contains(token)) continue;
        doc.tokens.push_back(std::move(token));
    }
    doc.clean_length = doc.content_length() + (doc.tokens.empty() ? 0 : doc.tokens.size() - 1);

    if (doc.content_length() < config.min_chars) return Dropped{std::move(doc)};
    return doc;
}

}  // namespace geosent::textprep
