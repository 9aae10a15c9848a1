#include "dealdesk/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "dealdesk/error.hpp"

namespace dealdesk::csv {

bool Reader::next(Row& row) {
    row.clear();
    std::string line;
    while (true) {
        if (!std::getline(in_, line)) return false;
        ++line_;
        if (first_) {
            first_ = false;
            if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!trim(line).empty()) break;
    }
    record_line_ = line_;

    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
        if (i == line.size()) {
            if (!quoted) break;
            // newline inside a quoted field
            std::string more;
            if (!std::getline(in_, more)) break;
            ++line_;
            if (!more.empty() && more.back() == '\r') more.pop_back();
            field.push_back('\n');
            line = std::move(more);
            i = 0;
            continue;
        }
        char c = line[i++];
        if (quoted) {
            if (c == '"') {
                if (i < line.size() && line[i] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    row.push_back(std::move(field));
    return true;
}

std::optional<std::size_t> Table::column(std::string_view name) const {
    const std::string key = normalize_header(name);
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == key) return i;
    return std::nullopt;
}

Table read_table(std::istream& in) {
    Table table;
    Reader reader(in);
    Row row;
    if (!reader.next(row)) return table;
    table.raw_header = row;
    table.header.reserve(row.size());
    for (const auto& h : row) table.header.push_back(normalize_header(h));
    while (reader.next(row)) {
        table.rows.push_back(row);
        table.lines.push_back(reader.line());
    }
    return table;
}

std::string normalize_header(std::string_view name) {
    std::string out;
    bool pending_sep = false;
    for (unsigned char c : name) {
        if (std::isalnum(c)) {
            if (pending_sep && !out.empty()) out.push_back('_');
            pending_sep = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            pending_sep = true;
        }
    }
    return out;
}

std::string trim(std::string_view s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    auto b = std::find_if_not(s.begin(), s.end(), is_space);
    auto e = std::find_if_not(s.rbegin(), std::string_view::reverse_iterator(b), is_space).base();
    return std::string(b, e);
}

std::optional<double> parse_optional_number(std::string_view cell) {
    std::string text = trim(cell);
    if (text.empty()) return std::nullopt;
    text.erase(std::remove(text.begin(), text.end(), ','), text.end());
    if (!text.empty() && text.front() == '+') text.erase(0, 1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
        throw Error(ErrorKind::ParseError, "not a number: '" + std::string(cell) + "'");
    return value;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << escape(row[i]);
    }
    out << '\n';
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

}  // namespace dealdesk::csv
