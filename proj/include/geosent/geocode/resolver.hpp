#pragma once

#include "geosent/geocode/gazetteer.hpp"
#include "geosent/ingest/post_record.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace geosent::geocode {

enum class ResolutionSource { post_geo, user_location, unresolved };

std::string_view to_string(ResolutionSource source);
std::optional<ResolutionSource> parse_resolution_source(std::string_view text);

/// region is present iff source != unresolved.
struct GeoResolution {
    std::optional<std::string> region;
    ResolutionSource source = ResolutionSource::unresolved;
    std::optional<std::string> matched_name;

    friend bool operator==(const GeoResolution&, const GeoResolution&) = default;
};

/// Best gazetteer entry occurring in `text` as a whole token sequence:
/// longest name, then largest population, then lexicographically smallest.
const GazetteerEntry* find_place(std::string_view text, const Gazetteer& gazetteer);

/// Post geodata first, then the free-text user location.
GeoResolution resolve(const ingest::PostRecord& record, const Gazetteer& gazetteer);

/// False when neither post_geo nor user_location carries any text.
bool has_geodata(const ingest::PostRecord& record);

struct LocatedPost {
    std::string author_id;
    std::string region;
};

struct RegionCount {
    std::size_t posts = 0;
    std::size_t users = 0;
    double share = 0.0;  ///< posts / all located posts
    std::optional<std::uint64_t> population;
};

/// Throws InputError for a region code the table does not know.
std::map<std::string, RegionCount> regional_counts(std::span<const LocatedPost> posts, const RegionTable& regions);

}  // namespace geosent::geocode
