#include "geosent/core/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace geosent::csv {

Reader::Reader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {}

std::optional<Row> Reader::next() {
    if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;

    record_line_ = current_line_;
    Row row;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;

    for (;;) {
        const int ch = in_.get();
        if (ch == std::char_traits<char>::eof()) {
            if (quoted) {
                throw std::runtime_error("unterminated quoted field starting on line " +
                                         std::to_string(record_line_));
            }
            break;
        }
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++current_line_;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty() && !field_was_quoted) {
            quoted = true;
            field_was_quoted = true;
        } else if (c == delimiter_) {
            row.push_back(std::move(field));
            field.clear();
            field_was_quoted = false;
        } else if (c == '\n') {
            ++current_line_;
            break;
        } else if (c == '\r' && in_.peek() == '\n') {
            continue;
        } else {
            field.push_back(c);
        }
    }
    row.push_back(std::move(field));
    return row;
}

Table::Table(std::istream& in, std::vector<std::string> required, char delimiter)
    : reader_(in, delimiter) {
    auto header = reader_.next();
    if (!header) throw std::runtime_error("missing header row");
    header_ = std::move(*header);
    if (!header_.empty() && header_.front().starts_with("\xEF\xBB\xBF")) {
        header_.front().erase(0, 3);
    }
    for (const auto& column : required) {
        if (!has_column(column)) throw std::runtime_error("missing column '" + column + "'");
    }
}

std::optional<Row> Table::next() {
    for (;;) {
        auto row = reader_.next();
        if (!row) return std::nullopt;
        if (row->size() == 1 && row->front().empty()) continue;
        if (row->size() != header_.size()) {
            throw std::runtime_error("line " + std::to_string(reader_.line()) + ": expected " +
                                     std::to_string(header_.size()) + " fields, got " +
                                     std::to_string(row->size()));
        }
        return row;
    }
}

bool Table::has_column(std::string_view column) const {
    return std::find(header_.begin(), header_.end(), column) != header_.end();
}

const std::string& Table::field(const Row& row, std::string_view column) const {
    const auto it = std::find(header_.begin(), header_.end(), column);
    if (it == header_.end()) throw std::runtime_error("unknown column '" + std::string(column) + "'");
    return row.at(static_cast<std::size_t>(it - header_.begin()));
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
    bool first = true;
    for (const auto& f : fields) {
        if (!first) out.put(delimiter);
        first = false;
        const bool needs_quotes = f.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos;
        if (!needs_quotes) {
            out << f;
            continue;
        }
        out.put('"');
        for (char c : f) {
            if (c == '"') out.put('"');
            out.put(c);
        }
        out.put('"');
    }
    out.put('\n');
}

std::string format_real(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

std::string format_fixed2(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

}  // namespace geosent::csv
