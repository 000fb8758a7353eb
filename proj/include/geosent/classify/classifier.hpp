#pragma once

#include "geosent/classify/adapter_client.hpp"
#include "geosent/classify/baseline.hpp"
#include "geosent/textprep/cleaner.hpp"

#include <span>
#include <vector>

namespace geosent::classify {

/// One prediction per document, ordered by post id.
std::vector<Prediction> classify_corpus(const BaselineModel& model, std::span<const textprep::CleanedDocument> documents);

/// Sends the cleaned text (tokens joined by spaces) to the adapter.
std::vector<Prediction> classify_corpus(AdapterClient& adapter, std::span<const textprep::CleanedDocument> documents);

}  // namespace geosent::classify
