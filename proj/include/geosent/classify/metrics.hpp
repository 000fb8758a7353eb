#pragma once

#include "geosent/classify/labels.hpp"
#include "geosent/classify/prediction.hpp"

#include <json.hpp>

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace geosent::classify {

/// Harmonic mean of precision and recall; 0 when both are 0. Throws
/// ContractViolation for inputs outside [0, 1].
double f1(double precision, double recall);

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t classes);

    void add(std::size_t truth, std::size_t predicted, std::size_t count = 1);
    std::size_t at(std::size_t truth, std::size_t predicted) const;
    std::size_t classes() const noexcept { return classes_; }
    std::size_t total() const;
    std::size_t row_sum(std::size_t truth) const;
    std::size_t column_sum(std::size_t predicted) const;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t classes_;
    std::vector<std::size_t> cells_;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;  ///< true instances
    /// Class occurs among the gold or the predicted labels.
    bool present = false;
};

struct MetricsReport {
    LabelScheme scheme = LabelScheme::ternary;
    ConfusionMatrix matrix{3};
    std::vector<ClassMetrics> per_class;
    /// Unweighted mean of per-class F1 over the present classes.
    double macro_f1 = 0.0;
    double accuracy = 0.0;
};

/// Precision and recall with an empty denominator are reported as 0.
MetricsReport report_from_matrix(const ConfusionMatrix& matrix, LabelScheme scheme);

/// Gold and predicted ternary labels, index-aligned. Binary scheme merges
/// neutral and positive first.
MetricsReport evaluate_labels(std::span<const Sentiment> predicted, std::span<const Sentiment> gold,
                              LabelScheme scheme);

/// Throws InputError when the prediction ids and gold ids differ.
MetricsReport evaluate(std::span<const Prediction> predictions, const std::map<std::string, Sentiment>& gold,
                       LabelScheme scheme);

nlohmann::ordered_json to_json(const MetricsReport& report);

}  // namespace geosent::classify
