#pragma once

#include "geosent/classify/labels.hpp"
#include "geosent/textprep/cleaner.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace geosent::classify {

struct AnnotatedItem {
    textprep::CleanedDocument document;
    Sentiment label = Sentiment::negative;
};

struct AnnotatedSet {
    std::vector<AnnotatedItem> items;

    std::array<std::size_t, kSentimentClasses> counts() const;
    std::size_t classes_present() const;
};

struct RawAnnotation {
    std::string id;
    std::string text;
    Sentiment label = Sentiment::negative;
};

/// Interchange file: header row with columns id, text, label (0/1/2).
/// Throws InputError naming the row on a bad label or duplicate id.
std::vector<RawAnnotation> load_annotations(const std::filesystem::path& path);

struct AnnotatedBuild {
    AnnotatedSet set;
    std::size_t dropped_too_short = 0;
};

/// Cleans every annotation; posts that clean below the minimum length are
/// left out and counted.
AnnotatedBuild build_annotated_set(const std::vector<RawAnnotation>& raw, const textprep::CleanerConfig& cleaner);

struct Split {
    AnnotatedSet train;
    AnnotatedSet validation;
};

/// Per-class shuffle with the seed, then round(validation_fraction * n_c)
/// items of each class go to validation. Both halves keep input order.
Split stratified_split(const AnnotatedSet& set, double validation_fraction, std::uint64_t seed);

}  // namespace geosent::classify
