#pragma once

#include "geosent/classify/prediction.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace geosent::classify {

/// The k predictions the model is least sure about (smallest gap between the
/// two top scores), ties by post id. Used to pick posts for re-annotation.
std::vector<Prediction> lowest_margin_sample(std::span<const Prediction> predictions, std::size_t k);

/// k predictions drawn without replacement, returned in post id order.
std::vector<Prediction> random_sample(std::span<const Prediction> predictions, std::size_t k, std::uint64_t seed);

}  // namespace geosent::classify
