#include "geosent/classify/sampling.hpp"

#include "geosent/core/random.hpp"

#include <algorithm>
#include <numeric>

namespace geosent::classify {

std::vector<Prediction> lowest_margin_sample(std::span<const Prediction> predictions, std::size_t k) {
    std::vector<Prediction> sorted(predictions.begin(), predictions.end());
    std::sort(sorted.begin(), sorted.end(), [](const Prediction& a, const Prediction& b) {
        const double ma = margin(a);
        const double mb = margin(b);
        if (ma != mb) return ma < mb;
        return a.post_id < b.post_id;
    });
    if (sorted.size() > k) sorted.resize(k);
    return sorted;
}

std::vector<Prediction> random_sample(std::span<const Prediction> predictions, std::size_t k, std::uint64_t seed) {
    std::vector<std::size_t> order(predictions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Shuffle over a canonical ordering so input order does not matter.
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return predictions[a].post_id < predictions[b].post_id; });
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
    if (order.size() > k) order.resize(k);
    std::vector<Prediction> out;
    for (std::size_t i : order) out.push_back(predictions[i]);
    std::sort(out.begin(), out.end(), [](const Prediction& a, const Prediction& b) { return a.post_id < b.post_id; });
    return out;
}

}  // namespace geosent::classify
