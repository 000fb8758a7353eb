#include "geosent/pipeline/filtration.hpp"

namespace geosent::pipeline {

GeocodeStageResult geocode_posts(std::vector<ingest::PostRecord> posts, const geocode::Gazetteer& gazetteer) {
    GeocodeStageResult result;
    for (auto& post : posts) {
        if (!geocode::has_geodata(post)) {
            ++result.no_geodata;
            continue;
        }
        auto geo = geocode::resolve(post, gazetteer);
        if (geo.source == geocode::ResolutionSource::unresolved) {
            ++result.illegible;
            continue;
        }
        result.retained.push_back({std::move(post), std::move(geo)});
    }
    return result;
}

CleanStageResult clean_posts(std::vector<LocatedRecord> located, const textprep::CleanerConfig& cleaner) {
    CleanStageResult result;
    for (auto& record : located) {
        auto outcome = textprep::clean(record.post.id, record.post.text, cleaner);
        if (auto* doc = std::get_if<textprep::CleanedDocument>(&outcome)) {
            result.documents.push_back(std::move(*doc));
            result.retained.push_back(std::move(record));
        } else {
            ++result.too_short;
        }
    }
    return result;
}

FiltrationResult run_filtration(std::vector<ingest::PostRecord> corpus, const geocode::Gazetteer& gazetteer,
                                const textprep::CleanerConfig& cleaner, const ingest::RepairOptions& repair) {
    FiltrationResult result;
    result.ledger.total_in = corpus.size();

    auto repaired = ingest::repair_retweets(std::move(corpus), repair);
    result.ledger.excluded_unresolvable_retweet = repaired.dropped_ids.size();

    auto geo = geocode_posts(std::move(repaired.records), gazetteer);
    result.ledger.excluded_no_geodata = geo.no_geodata;
    result.ledger.excluded_illegible_geodata = geo.illegible;

    auto cleaned = clean_posts(std::move(geo.retained), cleaner);
    result.ledger.excluded_too_short_after_clean = cleaned.too_short;
    result.ledger.retained = cleaned.retained.size();
    result.retained = std::move(cleaned.retained);
    result.documents = std::move(cleaned.documents);
    return result;
}

}  // namespace geosent::pipeline
