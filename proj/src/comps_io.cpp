#include <algorithm>
#include <sstream>

#include "dealdesk/comps.hpp"
#include "dealdesk/csv.hpp"
#include "dealdesk/error.hpp"

namespace dealdesk::comps {

namespace {

struct HeaderSpec {
    std::string name;
    std::string unit;
};

HeaderSpec split_unit(const std::string& raw) {
    auto open = raw.find('[');
    auto close = raw.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open)
        return {csv::normalize_header(raw), {}};
    return {csv::normalize_header(raw.substr(0, open)), csv::trim(raw.substr(open + 1, close - open - 1))};
}

std::optional<Date> parse_comp_date(const std::string& cell, std::size_t line) {
    if (cell.empty()) return std::nullopt;
    if (auto d = parse_iso_date(cell)) return d;
    if (cell.size() == 4 && std::all_of(cell.begin(), cell.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return make_date(std::stoi(cell), 1, 1);
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": unrecognized date '" + cell + "'");
}

double parse_bound(std::string text, const std::string& key) {
    std::erase(text, '$');
    auto v = csv::parse_optional_number(text);
    if (!v) throw Error(ErrorKind::ConfigInvalid, key + ": empty range bound");
    return *v;
}

}  // namespace

CompSet load_comps(std::istream& in) {
    const csv::Table table = csv::read_table(in);
    std::vector<HeaderSpec> headers;
    for (const auto& raw : table.raw_header) headers.push_back(split_unit(raw));
    CompSet set;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.lines[r];
        Comparable comp;
        bool any_number = false;
        for (std::size_t c = 0; c < headers.size() && c < row.size(); ++c) {
            const std::string& col = headers[c].name;
            const std::string cell = csv::trim(row[c]);
            if (col == "name" || col == "company" || col == "target") {
                if (comp.name.empty()) comp.name = cell;
            } else if (col == "kind") {
                const std::string k = csv::normalize_header(cell);
                if (k == "trading" || k.empty())
                    comp.kind = CompKind::Trading;
                else if (k == "transaction")
                    comp.kind = CompKind::Transaction;
                else
                    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": unknown kind '" + cell + "'");
            } else if (col == "date") {
                comp.date = parse_comp_date(cell, line);
            } else {
                std::optional<double> v;
                try {
                    v = csv::parse_optional_number(cell);
                } catch (const Error& e) {
                    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + col + ": " + e.detail());
                }
                if (!v) continue;
                any_number = true;
                // non-positive multiples are non-meaningful and stay out of aggregation
                if (auto* ratio = comp.multiples.field(col))
                    *ratio = *v > 0.0 ? financial::Ratio{*v, financial::Absence::None}
                                      : financial::Ratio{std::nullopt, financial::Absence::NonPositiveDenominator};
                else
                    comp.industry_metrics[col] = {*v, headers[c].unit};
            }
        }
        if (!any_number)
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": comparable '" + comp.name +
                                                   "' carries no multiple or metric");
        set.members.push_back(std::move(comp));
    }
    if (set.members.empty()) throw Error(ErrorKind::InvalidArgument, "comp set is empty");
    return set;
}

RangeFile parse_ranges(const KeyValueConfig& cfg) {
    RangeFile out;
    for (const auto& [key, value] : cfg.entries()) {
        if (key == "weight.trading" || key == "weight.transaction") {
            const double w = parse_bound(value, key);
            (key == "weight.trading" ? out.weights.trading : out.weights.transaction) = w;
            continue;
        }
        const auto dot = key.find('.');
        if (dot == std::string::npos) throw Error(ErrorKind::ConfigInvalid, "unrecognized range key '" + key + "'");
        const std::string prefix = key.substr(0, dot);
        MethodRow row;
        if (prefix == "trading")
            row.method = Method::Trading;
        else if (prefix == "transaction")
            row.method = Method::Transaction;
        else
            throw Error(ErrorKind::ConfigInvalid, "range key must start with trading. or transaction.: '" + key + "'");
        row.range.metric = key.substr(dot + 1);

        std::istringstream tokens(value);
        std::string text, token;
        tokens >> text;
        while (tokens >> token) {
            if (token == "equity" || token == "enterprise")
                row.range.basis = token == "equity" ? ValueBasis::Equity : ValueBasis::Enterprise;
            else if (token.rfind("scale=", 0) == 0)
                row.range.scale = parse_bound(token.substr(6), key);
            else
                throw Error(ErrorKind::ConfigInvalid, key + ": unexpected '" + token + "'");
        }
        const auto sep = text.find("..");
        if (sep == std::string::npos) throw Error(ErrorKind::ConfigInvalid, key + ": expected \"low..high\"");
        row.range.low = parse_bound(text.substr(0, sep), key);
        row.range.high = parse_bound(text.substr(sep + 2), key);
        try {
            validate(row.range);
        } catch (const Error& e) {
            throw Error(ErrorKind::ConfigInvalid, e.detail());
        }
        out.rows.push_back(std::move(row));
    }
    // trading rows first, file order within each method
    std::stable_sort(out.rows.begin(), out.rows.end(),
                     [](const MethodRow& a, const MethodRow& b) { return a.method < b.method; });
    return out;
}

TargetProfile load_target(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::istringstream table_in(text);
    const csv::Table table = csv::read_table(table_in);
    if (table.rows.size() != 1)
        throw Error(ErrorKind::InvalidArgument, "target file must hold exactly one data row");
    const auto& row = table.rows.front();

    TargetProfile target;
    std::optional<double> net_debt, shares;
    for (std::size_t c = 0; c < table.header.size() && c < row.size(); ++c) {
        const std::string& col = table.header[c];
        if (col == "name" || col == "company") {
            target.name = csv::trim(row[c]);
            continue;
        }
        if (col == "as_of_date") continue;
        auto v = csv::parse_optional_number(row[c]);
        if (!v) continue;
        if (col == "net_debt")
            net_debt = v;
        else if (col == "shares_outstanding")
            shares = v;
        else
            target.metrics[col] = *v;
    }

    if (!net_debt || !shares) {
        std::istringstream snap_in(text);
        const auto snaps = financial::load_snapshots(snap_in);
        const auto& s = snaps.front();
        if (!net_debt) {
            if (!s.short_term_debt && !s.long_term_debt && !s.capitalized_leases && !s.cash_and_equivalents)
                throw Error(ErrorKind::MissingInput, "target needs net_debt or its balance-sheet components");
            net_debt = financial::net_debt(s);
        }
        if (!shares) {
            if (!s.basic_shares) throw Error(ErrorKind::MissingInput, "target needs shares_outstanding or basic_shares");
            shares = *s.basic_shares + s.in_the_money_options.value_or(0.0);
        }
    }
    target.net_debt = *net_debt;
    target.shares_outstanding = *shares;
    return target;
}

}  // namespace dealdesk::comps
