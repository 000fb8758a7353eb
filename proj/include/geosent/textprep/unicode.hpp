#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace geosent::textprep {

/// NFC followed by simple per-code-point case folding. Invalid UTF-8 sequences become U+FFFD.
std::string fold(std::string_view utf8);

/// Extended_Pictographic code points and the emoji components that only
/// occur inside emoji sequences: variation selectors, ZWJ, skin-tone
/// modifiers, regional indicators, the keycap mark and tag characters.
bool is_emoji(char32_t cp);

/// Replaces every emoji code point with a single space.
std::string strip_emoji(std::string_view utf8);

/// Word segments (letters, numbers, ideographs) per the Unicode word-break
/// rules; punctuation, symbols and whitespace are dropped.
std::vector<std::string> word_tokens(std::string_view utf8);

std::size_t code_point_count(std::string_view utf8);

/// Decodes UTF-8 leniently; malformed bytes decode as U+FFFD.
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view text);

}  // namespace geosent::textprep
