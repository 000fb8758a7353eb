#pragma once

#include "geosent/geocode/resolver.hpp"
#include "geosent/ingest/ledger.hpp"
#include "geosent/ingest/retweet.hpp"
#include "geosent/textprep/cleaner.hpp"

#include <vector>

namespace geosent::pipeline {

struct LocatedRecord {
    ingest::PostRecord post;
    geocode::GeoResolution geo;
};

struct GeocodeStageResult {
    std::vector<LocatedRecord> retained;
    std::size_t no_geodata = 0;
    std::size_t illegible = 0;
};

/// Splits posts into located ones and the two exclusion kinds. Order kept.
GeocodeStageResult geocode_posts(std::vector<ingest::PostRecord> posts, const geocode::Gazetteer& gazetteer);

struct CleanStageResult {
    std::vector<LocatedRecord> retained;
    std::vector<textprep::CleanedDocument> documents;  ///< aligned with retained
    std::size_t too_short = 0;
};

CleanStageResult clean_posts(std::vector<LocatedRecord> located, const textprep::CleanerConfig& cleaner);

struct FiltrationResult {
    std::vector<LocatedRecord> retained;
    std::vector<textprep::CleanedDocument> documents;
    ingest::FiltrationLedger ledger;
};

/// Retweet repair over the whole corpus, then geocoding, then cleaning.
/// Output is ordered by (created_at, id), so it does not depend on input order.
FiltrationResult run_filtration(std::vector<ingest::PostRecord> corpus, const geocode::Gazetteer& gazetteer,
                                const textprep::CleanerConfig& cleaner, const ingest::RepairOptions& repair = {});

}  // namespace geosent::pipeline
