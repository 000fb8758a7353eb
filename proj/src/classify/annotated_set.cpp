#include "geosent/classify/annotated_set.hpp"

#include "geosent/core/csv.hpp"
#include "geosent/core/error.hpp"
#include "geosent/core/random.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace geosent::classify {

std::array<std::size_t, kSentimentClasses> AnnotatedSet::counts() const {
    std::array<std::size_t, kSentimentClasses> c{};
    for (const auto& item : items) ++c[static_cast<std::size_t>(item.label)];
    return c;
}

std::size_t AnnotatedSet::classes_present() const {
    std::size_t n = 0;
    for (std::size_t c : counts()) n += c > 0 ? 1 : 0;
    return n;
}

std::vector<RawAnnotation> load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read annotation file " + path.string());
    std::vector<RawAnnotation> out;
    try {
        csv::Table table(in, {"id", "text", "label"});
        std::set<std::string> ids;
        while (auto row = table.next()) {
            const std::string& label_text = table.field(*row, "label");
            std::optional<Sentiment> label;
            if (label_text.size() == 1) label = sentiment_from_index(label_text[0] - '0');
            if (!label) {
                throw InputError("row " + std::to_string(table.line()) + ": label '" + label_text +
                                 "' is not one of 0, 1, 2");
            }
            RawAnnotation a{table.field(*row, "id"), table.field(*row, "text"), *label};
            if (!ids.insert(a.id).second) {
                throw InputError("row " + std::to_string(table.line()) + ": duplicate id '" + a.id + "'");
            }
            out.push_back(std::move(a));
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return out;
}

AnnotatedBuild build_annotated_set(const std::vector<RawAnnotation>& raw, const textprep::CleanerConfig& cleaner) {
    AnnotatedBuild build;
    for (const auto& a : raw) {
        auto outcome = textprep::clean(a.id, a.text, cleaner);
        if (auto* doc = std::get_if<textprep::CleanedDocument>(&outcome)) {
            build.set.items.push_back({std::move(*doc), a.label});
        } else {
            ++build.dropped_too_short;
        }
    }
    return build;
}

Split stratified_split(const AnnotatedSet& set, double validation_fraction, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<bool> to_validation(set.items.size(), false);
    for (std::size_t c = 0; c < kSentimentClasses; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < set.items.size(); ++i) {
            if (static_cast<std::size_t>(set.items[i].label) == c) members.push_back(i);
        }
        rng.shuffle(std::span<std::size_t>(members));
        const auto take = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(members.size())));
        for (std::size_t k = 0; k < take && k < members.size(); ++k) to_validation[members[k]] = true;
    }
    Split split;
    for (std::size_t i = 0; i < set.items.size(); ++i) {
        (to_validation[i] ? split.validation : split.train).items.push_back(set.items[i]);
    }
    return split;
}

}  // namespace geosent::classify
