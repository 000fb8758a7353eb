#include "geosent/classify/labels.hpp"

namespace geosent::classify {

std::optional<Sentiment> sentiment_from_index(long long value) {
    switch (value) {
        case 0: return Sentiment::negative;
        case 1: return Sentiment::neutral;
        case 2: return Sentiment::positive;
        default: return std::nullopt;
    }
}

std::string_view to_string(Sentiment label) {
    switch (label) {
        case Sentiment::negative: return "negative";
        case Sentiment::neutral: return "neutral";
        case Sentiment::positive: return "positive";
    }
    return "negative";
}

std::string_view to_string(Polarity label) {
    return label == Polarity::negative ? "negative" : "non_negative";
}

std::string_view to_string(LabelScheme scheme) { return scheme == LabelScheme::ternary ? "ternary" : "binary"; }

std::optional<LabelScheme> parse_label_scheme(std::string_view text) {
    if (text == "ternary") return LabelScheme::ternary;
    if (text == "binary") return LabelScheme::binary;
    return std::nullopt;
}

std::size_t class_count(LabelScheme scheme) { return scheme == LabelScheme::ternary ? 3 : 2; }

std::size_t class_index(Sentiment label, LabelScheme scheme) {
    if (scheme == LabelScheme::ternary) return static_cast<std::size_t>(label);
    return static_cast<std::size_t>(merge_to_binary(label));
}

std::string_view class_name(std::size_t index, LabelScheme scheme) {
    if (scheme == LabelScheme::ternary) return to_string(static_cast<Sentiment>(index));
    return to_string(static_cast<Polarity>(index));
}

}  // namespace geosent::classify
