#include "geosent/core/timestamp.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace geosent {

namespace {

int read_digits(std::string_view text, std::size_t pos, std::size_t count) {
    if (pos + count > text.size()) {
        throw std::invalid_argument("timestamp too short: " + std::string(text));
    }
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') {
            throw std::invalid_argument("expected digit in timestamp: " + std::string(text));
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c) {
        throw std::invalid_argument("malformed timestamp: " + std::string(text));
    }
}

}  // namespace

Timestamp parse_rfc3339(std::string_view text) {
    using namespace std::chrono;

    const int y = read_digits(text, 0, 4);
    expect(text, 4, '-');
    const int mo = read_digits(text, 5, 2);
    expect(text, 7, '-');
    const int d = read_digits(text, 8, 2);
    if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) {
        throw std::invalid_argument("malformed timestamp: " + std::string(text));
    }
    const int h = read_digits(text, 11, 2);
    expect(text, 13, ':');
    const int mi = read_digits(text, 14, 2);
    expect(text, 16, ':');
    const int s = read_digits(text, 17, 2);

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) throw std::invalid_argument("empty fraction: " + std::string(text));
    }

    int offset_minutes = 0;
    if (pos >= text.size()) {
        throw std::invalid_argument("missing UTC offset: " + std::string(text));
    }
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '-' ? -1 : 1;
        const int oh = read_digits(text, pos + 1, 2);
        expect(text, pos + 3, ':');
        const int om = read_digits(text, pos + 4, 2);
        if (oh > 23 || om > 59) throw std::invalid_argument("bad offset: " + std::string(text));
        offset_minutes = sign * (oh * 60 + om);
        pos += 6;
    } else {
        throw std::invalid_argument("malformed UTC offset: " + std::string(text));
    }
    if (pos != text.size()) {
        throw std::invalid_argument("trailing characters in timestamp: " + std::string(text));
    }

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    // Leap seconds (":60") are not representable; reject them with the rest.
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
        throw std::invalid_argument("timestamp out of range: " + std::string(text));
    }
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} - minutes{offset_minutes};
}

std::string format_rfc3339(Timestamp t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss tod{t - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

int utc_year(Timestamp t) {
    using namespace std::chrono;
    return static_cast<int>(year_month_day{floor<days>(t)}.year());
}

unsigned utc_month(Timestamp t) {
    using namespace std::chrono;
    return static_cast<unsigned>(year_month_day{floor<days>(t)}.month());
}

}  // namespace geosent
