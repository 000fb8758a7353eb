#pragma once

#include "geosent/classify/labels.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace geosent::testing {

/// Per-class counts recomputed item by item, without a confusion matrix.
struct OracleClass {
    std::size_t tp = 0, fp = 0, fn = 0;
    double precision = 0, recall = 0, f1 = 0;
    bool present = false;
};

struct OracleReport {
    std::vector<OracleClass> classes;
    double macro_f1 = 0;
    double accuracy = 0;
};

inline OracleReport oracle_metrics(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& gold,
                                   std::size_t class_count) {
    OracleReport r;
    r.classes.resize(class_count);
    std::size_t correct = 0;
    for (std::size_t c = 0; c < class_count; ++c) {
        auto& k = r.classes[c];
        for (std::size_t i = 0; i < gold.size(); ++i) {
            if (predicted[i] == c && gold[i] == c) ++k.tp;
            if (predicted[i] == c && gold[i] != c) ++k.fp;
            if (predicted[i] != c && gold[i] == c) ++k.fn;
        }
        k.present = k.tp + k.fp + k.fn > 0;
        k.precision = k.tp + k.fp ? double(k.tp) / double(k.tp + k.fp) : 0.0;
        k.recall = k.tp + k.fn ? double(k.tp) / double(k.tp + k.fn) : 0.0;
        k.f1 = k.precision + k.recall > 0 ? 2 * k.precision * k.recall / (k.precision + k.recall) : 0.0;
    }
    for (std::size_t i = 0; i < gold.size(); ++i) correct += predicted[i] == gold[i];
    double sum = 0;
    std::size_t present = 0;
    for (const auto& k : r.classes) {
        if (!k.present) continue;
        sum += k.f1;
        ++present;
    }
    r.macro_f1 = present ? sum / double(present) : 0.0;
    r.accuracy = gold.empty() ? 0.0 : double(correct) / double(gold.size());
    return r;
}

}  // namespace geosent::testing
