#include <array>
#include <charconv>

#include "dealdesk/csv.hpp"
#include "dealdesk/error.hpp"
#include "dealdesk/financial.hpp"

namespace dealdesk::financial {

namespace {

using Field = std::optional<double> FinancialSnapshot::*;

constexpr std::array<std::pair<std::string_view, Field>, 28> kNumericFields{{
    {"revenue", &FinancialSnapshot::revenue},
    {"ebitda", &FinancialSnapshot::ebitda},
    {"ebit", &FinancialSnapshot::ebit},
    {"depreciation_amortization", &FinancialSnapshot::depreciation_amortization},
    {"net_income", &FinancialSnapshot::net_income},
    {"cash_flow_operating", &FinancialSnapshot::cash_flow_operating},
    {"gross_profit", &FinancialSnapshot::gross_profit},
    {"cash_and_equivalents", &FinancialSnapshot::cash_and_equivalents},
    {"short_term_debt", &FinancialSnapshot::short_term_debt},
    {"long_term_debt", &FinancialSnapshot::long_term_debt},
    {"capitalized_leases", &FinancialSnapshot::capitalized_leases},
    {"minority_interest", &FinancialSnapshot::minority_interest},
    {"preferred_equity", &FinancialSnapshot::preferred_equity},
    {"long_term_investments", &FinancialSnapshot::long_term_investments},
    {"common_equity", &FinancialSnapshot::common_equity},
    {"book_value_total", &FinancialSnapshot::book_value_total},
    {"interest_expense", &FinancialSnapshot::interest_expense},
    {"capex", &FinancialSnapshot::capex},
    {"operating_lease_expense", &FinancialSnapshot::operating_lease_expense},
    {"securitized_assets", &FinancialSnapshot::securitized_assets},
    {"share_price", &FinancialSnapshot::share_price},
    {"basic_shares", &FinancialSnapshot::basic_shares},
    {"in_the_money_options", &FinancialSnapshot::in_the_money_options},
    {"weighted_avg_diluted_shares", &FinancialSnapshot::weighted_avg_diluted_shares},
    {"eps_diluted", &FinancialSnapshot::eps_diluted},
    {"cash_flow_per_share", &FinancialSnapshot::cash_flow_per_share},
    {"book_value_per_share", &FinancialSnapshot::book_value_per_share},
    {"working_capital_addback", &FinancialSnapshot::working_capital_addback},
}};

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

int parse_int(const std::string& text, std::size_t line, const char* field) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorKind::ParseError, where(line) + field + " is not an integer");
    return v;
}

Date parse_date(const std::string& text, std::size_t line, const char* field) {
    auto d = parse_iso_date(csv::trim(text));
    if (!d) throw Error(ErrorKind::ParseError, where(line) + field + " is not a YYYY-MM-DD date: '" + text + "'");
    return *d;
}

}  // namespace

std::vector<FinancialSnapshot> load_snapshots(std::istream& in) {
    const csv::Table table = csv::read_table(in);
    std::vector<FinancialSnapshot> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.lines[r];
        FinancialSnapshot s;
        for (std::size_t c = 0; c < table.header.size() && c < row.size(); ++c) {
            const std::string& col = table.header[c];
            const std::string cell = csv::trim(row[c]);
            if (col == "name" || col == "company") {
                s.name = cell;
            } else if (col == "as_of_date") {
                if (!cell.empty()) s.as_of_date = parse_date(cell, line, "as_of_date");
            } else if (col == "fiscal_year_end_month") {
                if (!cell.empty()) s.fiscal_year_end_month = parse_int(cell, line, "fiscal_year_end_month");
            } else {
                for (const auto& [key, member] : kNumericFields) {
                    if (key != col) continue;
                    try {
                        s.*member = csv::parse_optional_number(cell);
                    } catch (const Error& e) {
                        throw Error(ErrorKind::ParseError, where(line) + col + ": " + e.detail());
                    }
                }
            }
        }
        validate(s);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<PeriodStatement> load_period_statements(std::istream& in) {
    const csv::Table table = csv::read_table(in);
    for (const char* required : {"period_label", "period_kind", "start_date", "end_date"})
        if (!table.column(required))
            throw Error(ErrorKind::HeaderMismatch, std::string("period statements need column ") + required);
    std::vector<PeriodStatement> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.lines[r];
        PeriodStatement p;
        for (std::size_t c = 0; c < table.header.size() && c < row.size(); ++c) {
            const std::string& col = table.header[c];
            const std::string cell = csv::trim(row[c]);
            if (col == "period_label") {
                p.period_label = cell;
            } else if (col == "period_kind") {
                const std::string kind = csv::normalize_header(cell);
                if (kind == "fiscal_year" || kind == "fy")
                    p.period_kind = PeriodKind::FiscalYear;
                else if (kind == "quarter" || kind == "q")
                    p.period_kind = PeriodKind::Quarter;
                else
                    throw Error(ErrorKind::ParseError, where(line) + "unknown period_kind '" + cell + "'");
            } else if (col == "start_date") {
                p.start_date = parse_date(cell, line, "start_date");
            } else if (col == "end_date") {
                p.end_date = parse_date(cell, line, "end_date");
            } else if (auto v = csv::parse_optional_number(cell)) {
                p.line_items.emplace(col, *v);
            }
        }
        validate(p);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace dealdesk::financial
