#include "geosent/classify/prediction.hpp"

#include "geosent/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace geosent::classify {

Sentiment argmax_label(const Scores& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return static_cast<Sentiment>(best);
}

Prediction make_prediction(std::string post_id, const Scores& raw) {
    double sum = 0.0;
    for (double s : raw) {
        if (!std::isfinite(s) || s < 0.0) throw ContractViolation("scores must be finite and non-negative");
        sum += s;
    }
    if (sum <= 0.0) throw ContractViolation("scores must not all be zero");
    Prediction p;
    p.post_id = std::move(post_id);
    p.label = argmax_label(raw);
    for (std::size_t i = 0; i < raw.size(); ++i) p.scores[i] = raw[i] / sum;
    return p;
}

double margin(const Prediction& prediction) {
    Scores sorted = prediction.scores;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    return sorted[0] - sorted[1];
}

nlohmann::ordered_json to_json(const Prediction& p) {
    nlohmann::ordered_json j;
    j["id"] = p.post_id;
    j["scores"] = p.scores;
    j["label"] = static_cast<int>(p.label);
    j["binary"] = std::string(to_string(merge_to_binary(p.label)));
    return j;
}

Prediction prediction_from_json(const nlohmann::json& j) {
    Prediction p;
    p.post_id = j.at("id").get<std::string>();
    p.scores = j.at("scores").get<Scores>();
    const auto label = sentiment_from_index(j.at("label").get<long long>());
    if (!label) throw std::invalid_argument("label out of range for " + p.post_id);
    p.label = *label;
    return p;
}

}  // namespace geosent::classify
