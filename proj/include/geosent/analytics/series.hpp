#pragma once

#include "geosent/classify/labels.hpp"
#include "geosent/core/timestamp.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace geosent::analytics {

inline constexpr std::string_view kAllRegions = "ALL";

enum class Granularity { year, month };

struct Period {
    int year = 0;
    unsigned month = 0;  ///< 1-12, or 0 for a whole year

    static Period of(Timestamp t, Granularity g);
    Period next() const;
    std::string to_string() const;  ///< "2020" or "2020-06"

    friend auto operator<=>(const Period&, const Period&) = default;
};

struct SentimentPost {
    std::string post_id;
    std::string author_id;
    Timestamp created_at{};
    std::string region;
    classify::Polarity polarity = classify::Polarity::non_negative;
};

struct RegionTimeSeries {
    std::string region;  ///< NUTS3 code or "ALL"
    Period period;
    std::size_t negative_count = 0;
    std::size_t non_negative_count = 0;
    std::optional<double> share_negative;  ///< null when the period is empty

    std::size_t total() const noexcept { return negative_count + non_negative_count; }
};

/// Gap-free periods from the first to the last post of the whole corpus,
/// for "ALL" and every region present (or only `regions` when given; "ALL"
/// may be listed there). Rows ordered by region, then period.
std::vector<RegionTimeSeries> sentiment_series(std::span<const SentimentPost> posts, Granularity granularity,
                                               const std::optional<std::set<std::string>>& regions = std::nullopt);

struct NormalizedPoint {
    std::string region;
    Period period;
    std::optional<double> share_of_region_total;
};

struct NormalizedTrends {
    std::vector<NormalizedPoint> points;
    std::vector<std::string> warnings;
};

/// Each region's per-period volume divided by its total volume over the
/// window. Zero-volume regions come out all null with a warning. Throws
/// ContractViolation when no region has volume.
NormalizedTrends normalized_regional_trends(std::span<const RegionTimeSeries> series);

/// Columns: region, period, negative_count, non_negative_count, share_negative.
void write_series(std::ostream& out, std::span<const RegionTimeSeries> rows);

/// Plot-ready long format: region, period, category, count, share.
void write_series_long(std::ostream& out, std::span<const RegionTimeSeries> rows);

void write_normalized(std::ostream& out, const NormalizedTrends& trends);

}  // namespace geosent::analytics
