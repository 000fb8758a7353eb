#include "geosent/classify/metrics.hpp"

#include "geosent/core/error.hpp"

#include <numeric>

namespace geosent::classify {

double f1(double precision, double recall) {
    if (!(precision >= 0.0 && precision <= 1.0) || !(recall >= 0.0 && recall <= 1.0)) {
        throw ContractViolation("precision and recall must lie in [0, 1]");
    }
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * (precision * recall) / (precision + recall);
}

ConfusionMatrix::ConfusionMatrix(std::size_t classes) : classes_(classes), cells_(classes * classes, 0) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::size_t count) {
    if (truth >= classes_ || predicted >= classes_) throw ContractViolation("class index out of range");
    cells_[truth * classes_ + predicted] += count;
}

std::size_t ConfusionMatrix::at(std::size_t truth, std::size_t predicted) const {
    return cells_.at(truth * classes_ + predicted);
}

std::size_t ConfusionMatrix::total() const { return std::accumulate(cells_.begin(), cells_.end(), std::size_t{0}); }

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::size_t sum = 0;
    for (std::size_t p = 0; p < classes_; ++p) sum += at(truth, p);
    return sum;
}

std::size_t ConfusionMatrix::column_sum(std::size_t predicted) const {
    std::size_t sum = 0;
    for (std::size_t t = 0; t < classes_; ++t) sum += at(t, predicted);
    return sum;
}

MetricsReport report_from_matrix(const ConfusionMatrix& matrix, LabelScheme scheme) {
    if (matrix.classes() != class_count(scheme)) throw ContractViolation("matrix size does not match scheme");
    MetricsReport report;
    report.scheme = scheme;
    report.matrix = matrix;

    std::size_t correct = 0;
    double f1_sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < matrix.classes(); ++c) {
        const std::size_t tp = matrix.at(c, c);
        const std::size_t predicted = matrix.column_sum(c);
        const std::size_t actual = matrix.row_sum(c);
        ClassMetrics m;
        m.support = actual;
        m.present = predicted > 0 || actual > 0;
        m.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
        m.recall = actual == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(actual);
        m.f1 = f1(m.precision, m.recall);
        if (m.present) {
            f1_sum += m.f1;
            ++present;
        }
        correct += tp;
        report.per_class.push_back(m);
    }
    const std::size_t total = matrix.total();
    report.macro_f1 = present == 0 ? 0.0 : f1_sum / static_cast<double>(present);
    report.accuracy = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    return report;
}

MetricsReport evaluate_labels(std::span<const Sentiment> predicted, std::span<const Sentiment> gold,
                              LabelScheme scheme) {
    if (predicted.size() != gold.size()) throw ContractViolation("prediction and gold lengths differ");
    ConfusionMatrix matrix(class_count(scheme));
    for (std::size_t i = 0; i < gold.size(); ++i) {
        matrix.add(class_index(gold[i], scheme), class_index(predicted[i], scheme));
    }
    return report_from_matrix(matrix, scheme);
}

MetricsReport evaluate(std::span<const Prediction> predictions, const std::map<std::string, Sentiment>& gold,
                       LabelScheme scheme) {
    if (predictions.size() != gold.size()) {
        throw InputError("prediction ids do not match gold ids (" + std::to_string(predictions.size()) + " vs " +
                         std::to_string(gold.size()) + ")");
    }
    std::map<std::string, Sentiment> seen;
    std::vector<Sentiment> predicted;
    std::vector<Sentiment> truth;
    for (const auto& p : predictions) {
        const auto it = gold.find(p.post_id);
        if (it == gold.end()) throw InputError("prediction for unknown id '" + p.post_id + "'");
        if (!seen.emplace(p.post_id, p.label).second) throw InputError("duplicate prediction id '" + p.post_id + "'");
        predicted.push_back(p.label);
        truth.push_back(it->second);
    }
    return evaluate_labels(predicted, truth, scheme);
}

nlohmann::ordered_json to_json(const MetricsReport& report) {
    nlohmann::ordered_json j;
    j["scheme"] = std::string(to_string(report.scheme));
    j["macro_f1"] = report.macro_f1;
    j["accuracy"] = report.accuracy;
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        const auto& m = report.per_class[c];
        nlohmann::ordered_json entry;
        entry["class"] = std::string(class_name(c, report.scheme));
        entry["precision"] = m.precision;
        entry["recall"] = m.recall;
        entry["f1"] = m.f1;
        entry["support"] = m.support;
        classes.push_back(std::move(entry));
    }
    j["per_class"] = std::move(classes);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < report.matrix.classes(); ++t) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t p = 0; p < report.matrix.classes(); ++p) row.push_back(report.matrix.at(t, p));
        rows.push_back(std::move(row));
    }
    j["confusion_matrix"] = std::move(rows);
    return j;
}

}  // namespace geosent::classify
