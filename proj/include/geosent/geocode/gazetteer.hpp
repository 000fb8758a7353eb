#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geosent::geocode {

struct Region {
    std::string code;  ///< NUTS3
    std::string display_name;
    std::optional<std::uint64_t> population;
};

using RegionTable = std::map<std::string, Region, std::less<>>;

/// The eleven Norwegian counties (2020 boundaries) keyed by NUTS3 code.
RegionTable default_regions();

/// Columns nuts3_code, display_name, population (population may be empty).
RegionTable load_regions(const std::filesystem::path& path);

struct GazetteerEntry {
    std::string place_name;           ///< normalized
    std::vector<std::string> tokens;  ///< word segments of place_name
    std::string region;
    std::uint64_t population = 0;
};

/// Case-folds, NFC-normalizes, strips surrounding punctuation and whitespace
/// and collapses internal whitespace runs to one space.
std::string normalize_place(std::string_view raw);

class Gazetteer {
public:
    /// Throws std::invalid_argument on a duplicate normalized name, an empty
    /// name or a region missing from `regions`.
    Gazetteer(std::vector<GazetteerEntry> entries, RegionTable regions);

    /// Columns place_name, nuts3_code, population; header row required.
    static Gazetteer load(const std::filesystem::path& path, RegionTable regions = default_regions());

    static GazetteerEntry make_entry(std::string_view place_name, std::string region, std::uint64_t population);

    const std::vector<GazetteerEntry>& entries() const noexcept { return entries_; }
    const RegionTable& regions() const noexcept { return regions_; }
    bool knows_region(std::string_view code) const { return regions_.find(code) != regions_.end(); }

    /// Indices of entries whose first token equals `token`.
    const std::vector<std::size_t>* starting_with(std::string_view token) const;

private:
    std::vector<GazetteerEntry> entries_;
    RegionTable regions_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> by_first_token_;
};

}  // namespace geosent::geocode
