#include "geosent/geocode/resolver.hpp"

#include "geosent/core/error.hpp"
#include "geosent/textprep/unicode.hpp"

#include <set>
#include <tuple>

namespace geosent::geocode {

std::string_view to_string(ResolutionSource source) {
    switch (source) {
        case ResolutionSource::post_geo: return "post_geo";
        case ResolutionSource::user_location: return "user_location";
        case ResolutionSource::unresolved: return "unresolved";
    }
    return "unresolved";
}

std::optional<ResolutionSource> parse_resolution_source(std::string_view text) {
    if (text == "post_geo") return ResolutionSource::post_geo;
    if (text == "user_location") return ResolutionSource::user_location;
    if (text == "unresolved") return ResolutionSource::unresolved;
    return std::nullopt;
}

namespace {

bool better(const GazetteerEntry& a, const GazetteerEntry& b) {
    const auto len_a = textprep::code_point_count(a.place_name);
    const auto len_b = textprep::code_point_count(b.place_name);
    if (len_a != len_b) return len_a > len_b;
    if (a.population != b.population) return a.population > b.population;
    return a.place_name < b.place_name;
}

bool blank(const std::optional<std::string>& s) { return !s || normalize_place(*s).empty(); }

}  // namespace

const GazetteerEntry* find_place(std::string_view text, const Gazetteer& gazetteer) {
    const auto tokens = textprep::word_tokens(normalize_place(text));
    const GazetteerEntry* best = nullptr;
    for (std::size_t start = 0; start < tokens.size(); ++start) {
        const auto* candidates = gazetteer.starting_with(tokens[start]);
        if (!candidates) continue;
        for (std::size_t index : *candidates) {
            const auto& entry = gazetteer.entries()[index];
            if (start + entry.tokens.size() > tokens.size()) continue;
            if (!std::equal(entry.tokens.begin(), entry.tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(start))) {
                continue;
            }
            if (!best || better(entry, *best)) best = &entry;
        }
    }
    return best;
}

GeoResolution resolve(const ingest::PostRecord& record, const Gazetteer& gazetteer) {
    if (record.post_geo) {
        if (const auto* entry = find_place(*record.post_geo, gazetteer)) {
            return {entry->region, ResolutionSource::post_geo, entry->place_name};
        }
    }
    if (record.user_location) {
        if (const auto* entry = find_place(*record.user_location, gazetteer)) {
            return {entry->region, ResolutionSource::user_location, entry->place_name};
        }
    }
    return {};
}

bool has_geodata(const ingest::PostRecord& record) {
    return !blank(record.post_geo) || !blank(record.user_location);
}

std::map<std::string, RegionCount> regional_counts(std::span<const LocatedPost> posts, const RegionTable& regions) {
    std::map<std::string, RegionCount> counts;
    std::map<std::string, std::set<std::string>> authors;
    for (const auto& post : posts) {
        if (regions.find(post.region) == regions.end()) {
            throw InputError("unknown region code '" + post.region + "' in located corpus");
        }
        ++counts[post.region].posts;
        authors[post.region].insert(post.author_id);
    }
    for (auto& [region, count] : counts) {
        count.users = authors[region].size();
        count.share = static_cast<double>(count.posts) / static_cast<double>(posts.size());
        count.population = regions.find(region)->second.population;
    }
    return counts;
}

}  // namespace geosent::geocode
