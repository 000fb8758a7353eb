#pragma once

#include "geosent/classify/labels.hpp"

#include <json.hpp>

#include <array>
#include <string>

namespace geosent::classify {

using Scores = std::array<double, kSentimentClasses>;

struct Prediction {
    std::string post_id;
    Scores scores{};  ///< normalized to sum to 1
    Sentiment label = Sentiment::negative;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Index of the largest score; ties go to the lower index.
Sentiment argmax_label(const Scores& scores);

/// Normalizes raw non-negative scores. Throws ContractViolation for negative,
/// non-finite or all-zero scores.
Prediction make_prediction(std::string post_id, const Scores& raw_scores);

/// Difference between the two largest scores.
double margin(const Prediction& prediction);

nlohmann::ordered_json to_json(const Prediction& prediction);
Prediction prediction_from_json(const nlohmann::json& j);

}  // namespace geosent::classify
