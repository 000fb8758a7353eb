#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace geosent::csv {

using Row = std::vector<std::string>;

/// RFC 4180 style reader: quoted fields may contain delimiters, doubled
/// quotes and newlines. A trailing '\r' before the newline is dropped.
class Reader {
public:
    explicit Reader(std::istream& in, char delimiter = ',');

    /// Next record, or nullopt at end of input. Throws std::runtime_error on
    /// an unterminated quoted field.
    std::optional<Row> next();

    /// 1-based line number where the most recently returned record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    char delimiter_;
    std::size_t current_line_ = 1;
    std::size_t record_line_ = 0;
};

/// Reads a header row and maps column names to indices.
class Table {
public:
    Table(std::istream& in, std::vector<std::string> required, char delimiter = ',');

    /// Next data row with blank lines skipped.
    std::optional<Row> next();
    std::size_t line() const noexcept { return reader_.line(); }

    const std::string& field(const Row& row, std::string_view column) const;
    bool has_column(std::string_view column) const;

private:
    Reader reader_;
    std::vector<std::string> header_;
};

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter = ',');

/// Shortest round-trip decimal representation.
std::string format_real(double value);

/// Fixed two-decimal display rounding.
std::string format_fixed2(double value);

}  // namespace geosent::csv
