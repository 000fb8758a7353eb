#include "geosent/geocode/gazetteer.hpp"

#include "geosent/core/csv.hpp"
#include "geosent/textprep/unicode.hpp"

#include <unicode/uchar.h>

#include <charconv>
#include <fstream>
#include <set>
#include <stdexcept>

namespace geosent::geocode {

namespace {

bool is_trim_char(char32_t cp) {
    const auto c = static_cast<UChar32>(cp);
    return u_isUWhiteSpace(c) || u_ispunct(c);
}

std::uint64_t parse_population(const std::string& text, std::size_t line) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::runtime_error("line " + std::to_string(line) + ": bad population '" + text + "'");
    }
    return value;
}

}  // namespace

RegionTable default_regions() {
    RegionTable regions;
    const std::pair<const char*, const char*> counties[] = {
        {"NO020", "Innlandet"},      {"NO060", "Trøndelag"},           {"NO071", "Nordland"},
        {"NO074", "Troms og Finnmark"}, {"NO081", "Oslo"},             {"NO082", "Viken"},
        {"NO091", "Vestfold og Telemark"}, {"NO092", "Agder"},         {"NO0A1", "Rogaland"},
        {"NO0A2", "Vestland"},       {"NO0A3", "Møre og Romsdal"},
    };
    for (const auto& [code, name] : counties) regions.emplace(code, Region{code, name, std::nullopt});
    return regions;
}

RegionTable load_regions(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read regions file " + path.string());
    csv::Table table(in, {"nuts3_code", "display_name", "population"});
    RegionTable regions;
    while (auto row = table.next()) {
        Region r;
        r.code = table.field(*row, "nuts3_code");
        r.display_name = table.field(*row, "display_name");
        if (const auto& pop = table.field(*row, "population"); !pop.empty()) {
            r.population = parse_population(pop, table.line());
        }
        if (r.code.empty()) throw std::runtime_error("line " + std::to_string(table.line()) + ": empty nuts3_code");
        if (!regions.emplace(r.code, r).second) {
            throw std::runtime_error("line " + std::to_string(table.line()) + ": duplicate region " + r.code);
        }
    }
    return regions;
}

std::string normalize_place(std::string_view raw) {
    const std::u32string text = textprep::decode_utf8(textprep::fold(raw));
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_trim_char(text[begin])) ++begin;
    while (end > begin && is_trim_char(text[end - 1])) --end;

    std::u32string out;
    bool pending_space = false;
    for (std::size_t i = begin; i < end; ++i) {
        if (u_isUWhiteSpace(static_cast<UChar32>(text[i]))) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(U' ');
        pending_space = false;
        out.push_back(text[i]);
    }
    return textprep::encode_utf8(out);
}

GazetteerEntry Gazetteer::make_entry(std::string_view place_name, std::string region, std::uint64_t population) {
    GazetteerEntry e;
    e.place_name = normalize_place(place_name);
    e.tokens = textprep::word_tokens(e.place_name);
    e.region = std::move(region);
    e.population = population;
    return e;
}

Gazetteer::Gazetteer(std::vector<GazetteerEntry> entries, RegionTable regions)
    : entries_(std::move(entries)), regions_(std::move(regions)) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.tokens.empty()) throw std::invalid_argument("gazetteer entry without a usable name");
        if (!names.insert(e.place_name).second) {
            throw std::invalid_argument("duplicate gazetteer place name '" + e.place_name + "'");
        }
        if (!knows_region(e.region)) {
            throw std::invalid_argument("gazetteer entry '" + e.place_name + "' has unknown region " + e.region);
        }
        by_first_token_[e.tokens.front()].push_back(i);
    }
}

Gazetteer Gazetteer::load(const std::filesystem::path& path, RegionTable regions) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read gazetteer " + path.string());
    csv::Table table(in, {"place_name", "nuts3_code", "population"});
    std::vector<GazetteerEntry> entries;
    while (auto row = table.next()) {
        const auto& pop = table.field(*row, "population");
        entries.push_back(make_entry(table.field(*row, "place_name"), table.field(*row, "nuts3_code"),
                                     pop.empty() ? 0 : parse_population(pop, table.line())));
    }
    return Gazetteer(std::move(entries), std::move(regions));
}

const std::vector<std::size_t>* Gazetteer::starting_with(std::string_view token) const {
    const auto it = by_first_token_.find(token);
    return it == by_first_token_.end() ? nullptr : &it->second;
}

}  // namespace geosent::geocode
