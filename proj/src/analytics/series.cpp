#include "geosent/analytics/series.hpp"

#include "geosent/core/csv.hpp"
#include "geosent/core/error.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace geosent::analytics {

Period Period::of(Timestamp t, Granularity g) {
    return Period{utc_year(t), g == Granularity::month ? utc_month(t) : 0u};
}

Period Period::next() const {
    if (month == 0) return Period{year + 1, 0};
    if (month == 12) return Period{year + 1, 1};
    return Period{year, month + 1};
}

std::string Period::to_string() const {
    char buf[16];
    if (month == 0) {
        std::snprintf(buf, sizeof buf, "%04d", year);
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u", year, month);
    }
    return buf;
}

std::vector<RegionTimeSeries> sentiment_series(std::span<const SentimentPost> posts, Granularity granularity,
                                               const std::optional<std::set<std::string>>& regions) {
    std::vector<RegionTimeSeries> rows;
    if (posts.empty()) return rows;

    Period first = Period::of(posts.front().created_at, granularity);
    Period last = first;
    // (region, period) -> (negative, non-negative)
    std::map<std::pair<std::string, Period>, std::pair<std::size_t, std::size_t>> counts;
    std::set<std::string> present{std::string(kAllRegions)};
    for (const auto& p : posts) {
        const Period period = Period::of(p.created_at, granularity);
        first = std::min(first, period);
        last = std::max(last, period);
        present.insert(p.region);
        for (const std::string& key : {std::string(kAllRegions), p.region}) {
            auto& cell = counts[{key, period}];
            (p.polarity == classify::Polarity::negative ? cell.first : cell.second) += 1;
        }
    }

    const std::set<std::string>& wanted = regions ? *regions : present;
    for (const auto& region : wanted) {
        for (Period period = first; period <= last; period = period.next()) {
            RegionTimeSeries row{region, period, 0, 0, std::nullopt};
            if (const auto it = counts.find({region, period}); it != counts.end()) {
                row.negative_count = it->second.first;
                row.non_negative_count = it->second.second;
            }
            if (row.total() > 0) {
                row.share_negative = static_cast<double>(row.negative_count) / static_cast<double>(row.total());
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

NormalizedTrends normalized_regional_trends(std::span<const RegionTimeSeries> series) {
    std::map<std::string, std::size_t> totals;
    for (const auto& row : series) totals[row.region] += row.total();
    if (std::none_of(totals.begin(), totals.end(), [](const auto& kv) { return kv.second > 0; })) {
        throw ContractViolation("no region has any volume");
    }
    NormalizedTrends trends;
    for (const auto& [region, total] : totals) {
        if (total == 0) trends.warnings.push_back("region " + region + " has zero volume; emitted as null");
    }
    for (const auto& row : series) {
        const std::size_t total = totals[row.region];
        NormalizedPoint point{row.region, row.period, std::nullopt};
        if (total > 0) point.share_of_region_total = static_cast<double>(row.total()) / static_cast<double>(total);
        trends.points.push_back(std::move(point));
    }
    return trends;
}

namespace {

std::string optional_real(const std::optional<double>& v) { return v ? csv::format_real(*v) : std::string(); }

}  // namespace

void write_series(std::ostream& out, std::span<const RegionTimeSeries> rows) {
    csv::write_row(out, {"region", "period", "negative_count", "non_negative_count", "share_negative"});
    for (const auto& r : rows) {
        csv::write_row(out, {r.region, r.period.to_string(), std::to_string(r.negative_count),
                             std::to_string(r.non_negative_count), optional_real(r.share_negative)});
    }
}

void write_series_long(std::ostream& out, std::span<const RegionTimeSeries> rows) {
    csv::write_row(out, {"region", "period", "category", "count", "share"});
    for (const auto& r : rows) {
        std::optional<double> non_negative_share;
        if (r.total() > 0) {
            non_negative_share = static_cast<double>(r.non_negative_count) / static_cast<double>(r.total());
        }
        csv::write_row(out, {r.region, r.period.to_string(), "negative", std::to_string(r.negative_count),
                             optional_real(r.share_negative)});
        csv::write_row(out, {r.region, r.period.to_string(), "non_negative", std::to_string(r.non_negative_count),
                             optional_real(non_negative_share)});
    }
}

void write_normalized(std::ostream& out, const NormalizedTrends& trends) {
    csv::write_row(out, {"region", "period", "share_of_region_total"});
    for (const auto& p : trends.points) {
        csv::write_row(out, {p.region, p.period.to_string(), optional_real(p.share_of_region_total)});
    }
}

}  // namespace geosent::analytics
