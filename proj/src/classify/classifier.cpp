#include "geosent/classify/classifier.hpp"

#include <algorithm>

namespace geosent::classify {

std::vector<Prediction> classify_corpus(const BaselineModel& model, std::span<const textprep::CleanedDocument> documents) {
    std::vector<Prediction> out;
    out.reserve(documents.size());
    for (const auto& doc : documents) out.push_back(model.predict(doc.post_id, doc.tokens));
    std::sort(out.begin(), out.end(), [](const Prediction& a, const Prediction& b) { return a.post_id < b.post_id; });
    return out;
}

std::vector<Prediction> classify_corpus(AdapterClient& adapter, std::span<const textprep::CleanedDocument> documents) {
    std::vector<AdapterDocument> requests;
    requests.reserve(documents.size());
    for (const auto& doc : documents) requests.push_back({doc.post_id, doc.joined()});
    return adapter.classify(requests);
}

}  // namespace geosent::classify
