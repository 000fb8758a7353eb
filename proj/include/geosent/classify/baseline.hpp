#pragma once

#include "geosent/classify/annotated_set.hpp"
#include "geosent/classify/prediction.hpp"

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace geosent::classify {

struct BaselineConfig {
    unsigned hash_bits = 16;         ///< feature space has 2^hash_bits buckets
    unsigned max_ngram = 2;          ///< unigrams and bigrams
    double l2 = 1e-3;                ///< ridge penalty on all parameters
    double gradient_tolerance = 1e-6;
    std::size_t max_iterations = 500;
    std::size_t history = 7;         ///< L-BFGS correction pairs
    std::uint64_t seed = 20221001;   ///< feature-hash seed
};

/// Sparse feature vector: strictly increasing indices with their values.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

/// Hashed n-gram counts (n = 1..max_ngram), scaled to unit L2 norm.
SparseVector hashed_features(std::span<const std::string> tokens, const BaselineConfig& config);

struct TrainingSummary {
    std::size_t iterations = 0;
    double objective = 0.0;
    double gradient_norm = 0.0;
    bool converged = false;
};

/// Multinomial logistic regression over hashed n-grams with an L2 penalty,
/// minimized with L-BFGS from a zero start. Deterministic for fixed inputs.
class BaselineModel {
public:
    /// Throws InputError("degenerate training data") when fewer than two
    /// classes are present (including the empty set).
    static BaselineModel train(const AnnotatedSet& data, const BaselineConfig& config,
                               TrainingSummary* summary = nullptr);

    Scores scores(std::span<const std::string> tokens) const;
    Prediction predict(const std::string& post_id, std::span<const std::string> tokens) const;

    const BaselineConfig& config() const noexcept { return config_; }
    const std::vector<double>& parameters() const noexcept { return parameters_; }

    void save(std::ostream& out) const;
    static BaselineModel load(std::istream& in);

private:
    BaselineModel(BaselineConfig config, std::vector<double> parameters)
        : config_(config), parameters_(std::move(parameters)) {}

    BaselineConfig config_;
    /// Class-major weights (3 x 2^hash_bits) followed by 3 biases.
    std::vector<double> parameters_;
};

}  // namespace geosent::classify
