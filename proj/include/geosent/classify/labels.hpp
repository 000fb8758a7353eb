#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace geosent::classify {

/// Ternary annotation scheme: 0 negative, 1 neutral, 2 positive.
enum class Sentiment : int { negative = 0, neutral = 1, positive = 2 };

/// Binary view after merging neutral and positive.
enum class Polarity : int { negative = 0, non_negative = 1 };

enum class LabelScheme { ternary, binary };

inline constexpr std::size_t kSentimentClasses = 3;

constexpr Polarity merge_to_binary(Sentiment label) {
    return label == Sentiment::negative ? Polarity::negative : Polarity::non_negative;
}

std::optional<Sentiment> sentiment_from_index(long long value);
std::string_view to_string(Sentiment label);
std::string_view to_string(Polarity label);
std::string_view to_string(LabelScheme scheme);
std::optional<LabelScheme> parse_label_scheme(std::string_view text);

std::size_t class_count(LabelScheme scheme);
/// Class index of a ternary label under the scheme.
std::size_t class_index(Sentiment label, LabelScheme scheme);
std::string_view class_name(std::size_t index, LabelScheme scheme);

}  // namespace geosent::classify
