#include "geosent/analytics/survey.hpp"

#include "geosent/core/csv.hpp"
#include "geosent/core/error.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>

namespace geosent::analytics {

std::vector<SurveyRow> read_survey(std::istream& in) {
    std::vector<SurveyRow> rows;
    std::set<std::pair<std::string, int>> keys;
    try {
        csv::Table table(in, {"region", "year", "share_negative", "source"});
        while (auto row = table.next()) {
            const std::string where = "survey row " + std::to_string(table.line());
            SurveyRow r;
            r.region = table.field(*row, "region");
            if (r.region.empty()) throw InputError(where + ": empty region");
            const auto& year_text = table.field(*row, "year");
            const auto [yp, yec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), r.year);
            if (yec != std::errc{} || yp != year_text.data() + year_text.size()) {
                throw InputError(where + ": bad year '" + year_text + "'");
            }
            const auto& share_text = table.field(*row, "share_negative");
            const auto [sp, sec] =
                std::from_chars(share_text.data(), share_text.data() + share_text.size(), r.share_negative);
            if (sec != std::errc{} || sp != share_text.data() + share_text.size() || !(r.share_negative >= 0.0) ||
                r.share_negative > 1.0) {
                throw InputError(where + ": share_negative '" + share_text + "' is not in [0, 1]");
            }
            r.source = table.field(*row, "source");
            if (!keys.emplace(r.region, r.year).second) {
                throw InputError(where + ": duplicate (region, year) " + r.region + " " + year_text);
            }
            rows.push_back(std::move(r));
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(std::string("survey file: ") + e.what());
    }
    return rows;
}

std::vector<SurveyRow> read_survey(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read survey file " + path.string());
    return read_survey(in);
}

SurveyDelta survey_delta(std::span<const RegionTimeSeries> yearly, std::span<const SurveyRow> survey) {
    std::map<std::pair<std::string, int>, double> twitter;
    for (const auto& row : yearly) {
        if (row.period.month != 0) throw ContractViolation("survey comparison needs yearly series");
        if (row.share_negative) twitter[{row.region, row.period.year}] = *row.share_negative;
    }
    std::map<std::pair<std::string, int>, const SurveyRow*> surveyed;
    for (const auto& s : survey) surveyed[{s.region, s.year}] = &s;

    SurveyDelta result;
    for (const auto& [key, s] : surveyed) {
        const auto it = twitter.find(key);
        if (it == twitter.end()) {
            result.coverage.push_back({key.first, key.second, "survey"});
            continue;
        }
        result.comparisons.push_back(
            {key.first, key.second, it->second, s->share_negative, it->second - s->share_negative, s->source});
    }
    for (const auto& [key, share] : twitter) {
        if (!surveyed.count(key)) result.coverage.push_back({key.first, key.second, "twitter"});
    }
    return result;
}

void write_survey_comparison(std::ostream& out, std::span<const SurveyComparison> rows) {
    csv::write_row(out, {"region", "year", "twitter_share_negative", "survey_share_negative", "delta", "source"});
    for (const auto& r : rows) {
        csv::write_row(out, {r.region, std::to_string(r.year), csv::format_real(r.twitter_share_negative),
                             csv::format_real(r.survey_share_negative), csv::format_real(r.delta), r.source});
    }
}

void write_survey_coverage(std::ostream& out, std::span<const CoverageEntry> rows) {
    csv::write_row(out, {"region", "year", "only_in"});
    for (const auto& r : rows) csv::write_row(out, {r.region, std::to_string(r.year), r.only_in});
}

}  // namespace geosent::analytics
