#pragma once

#include "geosent/classify/annotated_set.hpp"
#include "geosent/core/random.hpp"

#include <string>
#include <vector>

namespace geosent::testing {

/// Three classes; each document carries two to four of its class's five
/// signature tokens among three to eight tokens of shared noise. The
/// signatures alone determine the label.
inline classify::AnnotatedSet signature_corpus(std::uint64_t seed, std::size_t documents) {
    Rng rng(seed);
    std::vector<std::string> noise;
    for (int i = 0; i < 200; ++i) noise.push_back("ord" + std::to_string(i));
    classify::AnnotatedSet set;
    for (std::size_t d = 0; d < documents; ++d) {
        const auto label = static_cast<std::size_t>(d % 3);
        classify::AnnotatedItem item;
        item.label = static_cast<classify::Sentiment>(label);
        item.document.post_id = "d" + std::to_string(100000 + d);
        const auto sig = 2 + rng.below(3);
        const auto filler = 3 + rng.below(6);
        for (std::uint64_t k = 0; k < sig + filler; ++k) {
            if (k < sig) {
                item.document.tokens.push_back("sig" + std::to_string(label) + "_" + std::to_string(rng.below(5)));
            } else {
                item.document.tokens.push_back(noise[rng.below(noise.size())]);
            }
        }
        rng.shuffle(std::span<std::string>(item.document.tokens));
        set.items.push_back(std::move(item));
    }
    return set;
}

}  // namespace geosent::testing
