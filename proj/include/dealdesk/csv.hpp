#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dealdesk::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and newlines.
/// A UTF-8 byte-order mark on the first line is skipped.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Reads the next record. Blank lines are skipped. Returns false at EOF.
    bool next(Row& row);

    /// 1-based physical line on which the last record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
    bool first_ = true;
};

/// Header-indexed table. Column names are looked up after normalize_header().
struct Table {
    std::vector<std::string> raw_header;
    std::vector<std::string> header;
    std::vector<Row> rows;
    std::vector<std::size_t> lines;

    std::optional<std::size_t> column(std::string_view name) const;
};

Table read_table(std::istream& in);

/// Lowercases and folds runs of non-alphanumerics into a single '_'.
/// "Value (USDm)" -> "value_usdm".
std::string normalize_header(std::string_view name);

std::string trim(std::string_view s);

/// Blank cells are absent; anything else must parse fully as a number
/// (thousands separators allowed). Throws Error(ParseError) otherwise.
std::optional<double> parse_optional_number(std::string_view cell);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

/// Shortest text that parses back to exactly the same double.
std::string format_number(double value);

}  // namespace dealdesk::csv
