#include "geosent/textprep/unicode.hpp"

#include <unicode/brkiter.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <memory>
#include <stdexcept>

namespace geosent::textprep {

namespace {

const icu::Normalizer2& nfc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error(std::string("ICU NFC unavailable: ") + u_errorName(status));
    return *instance;
}

icu::BreakIterator& word_breaker() {
    thread_local std::unique_ptr<icu::BreakIterator> iter = [] {
        UErrorCode status = U_ZERO_ERROR;
        std::unique_ptr<icu::BreakIterator> it(icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
        if (U_FAILURE(status)) {
            throw std::runtime_error(std::string("ICU word break unavailable: ") + u_errorName(status));
        }
        return it;
    }();
    return *iter;
}

}  // namespace

std::string fold(std::string_view utf8) {
    const auto input = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString normalized = nfc().normalize(input, status);
    if (U_FAILURE(status)) throw std::runtime_error(std::string("NFC failed: ") + u_errorName(status));
    // Simple (1:1) folding keeps the code point count: "ß" stays "ß".
    icu::UnicodeString folded;
    for (int32_t i = 0; i < normalized.length();) {
        const UChar32 c = normalized.char32At(i);
        folded.append(u_foldCase(c, U_FOLD_CASE_DEFAULT));
        i += U16_LENGTH(c);
    }
    icu::UnicodeString out = nfc().normalize(folded, status);
    if (U_FAILURE(status)) throw std::runtime_error(std::string("NFC failed: ") + u_errorName(status));
    std::string result;
    out.toUTF8String(result);
    return result;
}

bool is_emoji(char32_t cp) {
    const auto c = static_cast<UChar32>(cp);
    if (u_hasBinaryProperty(c, UCHAR_EXTENDED_PICTOGRAPHIC)) return true;
    if (u_hasBinaryProperty(c, UCHAR_EMOJI_MODIFIER)) return true;
    if (u_hasBinaryProperty(c, UCHAR_REGIONAL_INDICATOR)) return true;
    if (cp >= 0xFE00 && cp <= 0xFE0F) return true;    // variation selectors
    if (cp == 0x200D || cp == 0x20E3) return true;     // ZWJ, combining keycap
    if (cp >= 0xE0020 && cp <= 0xE007F) return true;  // tags
    return false;
}

std::u32string decode_utf8(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto length = static_cast<int32_t>(utf8.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
    }
    return out;
}

std::string encode_utf8(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) {
        uint8_t buf[U8_MAX_LENGTH];
        int32_t n = 0;
        UBool error = false;
        U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
        if (error) {
            out += "\xEF\xBF\xBD";
        } else {
            out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
        }
    }
    return out;
}

std::string strip_emoji(std::string_view utf8) {
    std::u32string text = decode_utf8(utf8);
    for (char32_t& cp : text) {
        if (is_emoji(cp)) cp = U' ';
    }
    return encode_utf8(text);
}

std::vector<std::string> word_tokens(std::string_view utf8) {
    std::vector<std::string> tokens;
    const auto text = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    icu::BreakIterator& it = word_breaker();
    it.setText(text);
    int32_t start = it.first();
    for (int32_t end = it.next(); end != icu::BreakIterator::DONE; start = end, end = it.next()) {
        if (it.getRuleStatus() == UBRK_WORD_NONE) continue;
        std::string token;
        text.tempSubStringBetween(start, end).toUTF8String(token);
        tokens.push_back(std::move(token));
    }
    return tokens;
}

std::size_t code_point_count(std::string_view utf8) {
    std::size_t count = 0;
    for (char c : utf8) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
    }
    return count;
}

}  // namespace geosent::textprep
