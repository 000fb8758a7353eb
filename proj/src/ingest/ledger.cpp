#include "geosent/ingest/ledger.hpp"

namespace geosent::ingest {

nlohmann::ordered_json to_json(const FiltrationLedger& l) {
    nlohmann::ordered_json j;
    j["total_in"] = l.total_in;
    j["excluded_no_geodata"] = l.excluded_no_geodata;
    j["excluded_illegible_geodata"] = l.excluded_illegible_geodata;
    j["excluded_unresolvable_retweet"] = l.excluded_unresolvable_retweet;
    j["excluded_too_short_after_clean"] = l.excluded_too_short_after_clean;
    j["retained"] = l.retained;
    return j;
}

FiltrationLedger ledger_from_json(const nlohmann::json& j) {
    FiltrationLedger l;
    l.total_in = j.at("total_in").get<std::size_t>();
    l.excluded_no_geodata = j.at("excluded_no_geodata").get<std::size_t>();
    l.excluded_illegible_geodata = j.at("excluded_illegible_geodata").get<std::size_t>();
    l.excluded_unresolvable_retweet = j.at("excluded_unresolvable_retweet").get<std::size_t>();
    l.excluded_too_short_after_clean = j.at("excluded_too_short_after_clean").get<std::size_t>();
    l.retained = j.at("retained").get<std::size_t>();
    return l;
}

}  // namespace geosent::ingest
