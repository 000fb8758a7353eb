#pragma once

#include <json.hpp>

#include <cstddef>

namespace geosent::ingest {

/// Stage-by-stage accounting of retained and excluded posts.
struct FiltrationLedger {
    std::size_t total_in = 0;
    std::size_t excluded_no_geodata = 0;
    std::size_t excluded_illegible_geodata = 0;
    std::size_t excluded_unresolvable_retweet = 0;
    std::size_t excluded_too_short_after_clean = 0;
    std::size_t retained = 0;

    std::size_t excluded() const noexcept {
        return excluded_no_geodata + excluded_illegible_geodata + excluded_unresolvable_retweet +
               excluded_too_short_after_clean;
    }
    bool conserved() const noexcept { return total_in == retained + excluded(); }

    friend bool operator==(const FiltrationLedger&, const FiltrationLedger&) = default;
};

nlohmann::ordered_json to_json(const FiltrationLedger& ledger);
FiltrationLedger ledger_from_json(const nlohmann::json& j);

}  // namespace geosent::ingest
