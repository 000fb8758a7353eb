#pragma once

#include "geosent/analytics/series.hpp"

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace geosent::analytics {

struct SurveyRow {
    std::string region;  ///< NUTS3 code or "ALL"
    int year = 0;
    double share_negative = 0.0;
    std::string source;
};

/// Columns region, year, share_negative, source. Throws InputError with the
/// row number for a malformed row or a share outside [0, 1].
std::vector<SurveyRow> read_survey(std::istream& in);
std::vector<SurveyRow> read_survey(const std::filesystem::path& path);

struct SurveyComparison {
    std::string region;
    int year = 0;
    double twitter_share_negative = 0.0;
    double survey_share_negative = 0.0;
    double delta = 0.0;  ///< twitter - survey
    std::string source;
};

struct CoverageEntry {
    std::string region;
    int year = 0;
    std::string only_in;  ///< "survey" or "twitter"
};

struct SurveyDelta {
    std::vector<SurveyComparison> comparisons;
    std::vector<CoverageEntry> coverage;
};

/// Inner join of yearly series with the survey on (region, year). Periods
/// with no posts count as missing on the twitter side.
SurveyDelta survey_delta(std::span<const RegionTimeSeries> yearly, std::span<const SurveyRow> survey);

void write_survey_comparison(std::ostream& out, std::span<const SurveyComparison> rows);
void write_survey_coverage(std::ostream& out, std::span<const CoverageEntry> rows);

}  // namespace geosent::analytics
