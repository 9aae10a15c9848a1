#include "dealdesk/financial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "dealdesk/error.hpp"

namespace dealdesk::financial {

namespace {

double or_zero(const std::optional<double>& v, const char* field, Provenance* provenance) {
    if (v) return *v;
    if (provenance) provenance->note_default(field);
    return 0.0;
}

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void require_non_negative(const std::optional<double>& v, const char* field) {
    if (v && *v < 0.0) throw Error(ErrorKind::InvalidArgument, std::string(field) + " must be >= 0");
}

}  // namespace

void validate(const FinancialSnapshot& s) {
    if (s.fiscal_year_end_month < 1 || s.fiscal_year_end_month > 12)
        throw Error(ErrorKind::InvalidArgument, "fiscal_year_end_month must be in 1..12");
    require_non_negative(s.basic_shares, "basic_shares");
    require_non_negative(s.in_the_money_options, "in_the_money_options");
    require_non_negative(s.weighted_avg_diluted_shares, "weighted_avg_diluted_shares");
    if (s.ebitda && s.ebit && s.depreciation_amortization &&
        !nearly_equal(*s.ebitda, *s.ebit + *s.depreciation_amortization))
        throw Error(ErrorKind::InvalidArgument, s.name + ": ebitda != ebit + depreciation_amortization");
    if (s.gross_profit && s.revenue && *s.gross_profit > *s.revenue)
        throw Error(ErrorKind::InvalidArgument, s.name + ": gross_profit exceeds revenue");
}

double net_debt(const FinancialSnapshot& s, Provenance* provenance) {
    return or_zero(s.short_term_debt, "short_term_debt", provenance) +
           or_zero(s.long_term_debt, "long_term_debt", provenance) +
           or_zero(s.capitalized_leases, "capitalized_leases", provenance) -
           or_zero(s.cash_and_equivalents, "cash_and_equivalents", provenance);
}

double market_capitalization(const FinancialSnapshot& s, Dilution dilution, Provenance* provenance) {
    if (!s.share_price) throw Error(ErrorKind::MissingInput, "share_price is required for market capitalization");
    if (!(*s.share_price > 0.0)) throw Error(ErrorKind::InvalidArgument, "share_price must be > 0");
    double shares = s.basic_shares.value_or(0.0);
    if (dilution == Dilution::FullyDiluted) shares += or_zero(s.in_the_money_options, "in_the_money_options", provenance);
    if (!(shares > 0.0)) throw Error(ErrorKind::NonPositiveShares, "share count must be > 0");
    return *s.share_price * shares;
}

EnterpriseValue enterprise_value(const FinancialSnapshot& s, std::span<const ConvertibleSecurity> convertibles,
                                 Dilution dilution) {
    EnterpriseValue ev;
    ev.market_cap = market_capitalization(s, dilution, &ev.provenance);
    ev.net_debt = net_debt(s, &ev.provenance);
    ev.preferred_equity = or_zero(s.preferred_equity, "preferred_equity", &ev.provenance);
    ev.minority_interest = or_zero(s.minority_interest, "minority_interest", &ev.provenance);
    ev.long_term_investments = or_zero(s.long_term_investments, "long_term_investments", &ev.provenance);
    const double price = *s.share_price;
    for (const auto& c : convertibles) {
        if (!(c.conversion_price > 0.0))
            throw Error(ErrorKind::InvalidArgument, "convertible conversion_price must be > 0");
        if (c.conversion_price < price)
            ev.convertible_equity += c.shares_on_conversion * price;
        else
            ev.convertible_debt += c.face_value;
    }
    ev.total = ev.market_cap + ev.convertible_equity + ev.net_debt + ev.convertible_debt + ev.preferred_equity +
               ev.minority_interest - ev.long_term_investments;
    return ev;
}

Reconciled reconcile_subsidiary(double parent_ebitda, double parent_value, const SubsidiaryPosition& pos,
                                ReconcileMode mode) {
    if (!(pos.ownership_pct >= 0.0 && pos.ownership_pct <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "ownership_pct must lie in [0, 1]");
    Reconciled out{parent_ebitda, parent_value};
    if (pos.accounting == Accounting::EquityMethod) {
        if (mode == ReconcileMode::AdjustEbitda)
            out.ebitda += pos.ownership_pct * pos.subsidiary_ebitda;
        else
            out.value -= pos.ownership_pct * pos.subsidiary_value;
    } else {
        const double minority = 1.0 - pos.ownership_pct;
        if (mode == ReconcileMode::AdjustEbitda)
            out.ebitda -= minority * pos.subsidiary_ebitda;
        else
            out.value += minority * pos.subsidiary_value;
    }
    return out;
}

// --- periods ---------------------------------------------------------------

namespace {

constexpr long kDateSlackDays = 7;

bool mirrors(const Date& prior, const Date& current) {
    return std::abs(days_between(add_months(prior, 12), current)) <= kDateSlackDays;
}

}  // namespace

void validate(const PeriodStatement& p) {
    if (!p.start_date.ok() || !p.end_date.ok())
        throw Error(ErrorKind::InvalidArgument, p.period_label + ": invalid date");
    if (!(std::chrono::sys_days{p.start_date} < std::chrono::sys_days{p.end_date}))
        throw Error(ErrorKind::InvalidArgument, p.period_label + ": start_date must precede end_date");
    if (p.period_kind == PeriodKind::Quarter &&
        days_between(add_months(p.start_date, 3), p.end_date) > kDateSlackDays)
        throw Error(ErrorKind::InvalidArgument, p.period_label + ": quarter spans more than three months");
}

PeriodStatement ltm(const PeriodStatement& fiscal_year, std::span<const PeriodStatement> stub_prior,
                    std::span<const PeriodStatement> stub_current) {
    validate(fiscal_year);
    if (stub_prior.size() != stub_current.size())
        throw Error(ErrorKind::MismatchedStubs, "prior and current stub counts differ (" +
                                                    std::to_string(stub_prior.size()) + " vs " +
                                                    std::to_string(stub_current.size()) + ")");
    if (stub_current.empty()) return fiscal_year;

    for (std::size_t i = 0; i < stub_current.size(); ++i) {
        validate(stub_prior[i]);
        validate(stub_current[i]);
        if (!mirrors(stub_prior[i].start_date, stub_current[i].start_date) ||
            !mirrors(stub_prior[i].end_date, stub_current[i].end_date))
            throw Error(ErrorKind::MismatchedStubs, "stub " + stub_current[i].period_label +
                                                        " does not mirror " + stub_prior[i].period_label);
        const Date& expected_start = i == 0 ? fiscal_year.end_date : stub_current[i - 1].end_date;
        const long gap = days_between(expected_start, stub_current[i].start_date);
        if (gap < 0 || gap > kDateSlackDays)
            throw Error(ErrorKind::MismatchedStubs,
                        "current stub " + stub_current[i].period_label + " does not follow the preceding period");
    }

    PeriodStatement out;
    out.period_kind = PeriodKind::FiscalYear;
    out.end_date = stub_current.back().end_date;
    out.start_date = Date{std::chrono::sys_days{add_months(out.end_date, -12)} + std::chrono::days{1}};
    out.period_label = "LTM " + format_iso_date(out.end_date);
    for (const auto& [item, fy_value] : fiscal_year.line_items) {
        double value = fy_value;
        for (std::size_t i = 0; i < stub_current.size(); ++i) {
            auto p = stub_prior[i].line_items.find(item);
            auto c = stub_current[i].line_items.find(item);
            if (p == stub_prior[i].line_items.end() || c == stub_current[i].line_items.end())
                throw Error(ErrorKind::MismatchedStubs, "line item '" + item + "' missing from a stub period");
            value += c->second - p->second;
        }
        out.line_items.emplace(item, value);
    }
    return out;
}

CalendarWeights calendarization_weights(int fiscal_year_end_month) {
    if (fiscal_year_end_month < 1 || fiscal_year_end_month > 12)
        throw Error(ErrorKind::InvalidArgument, "fiscal_year_end_month must be in 1..12");
    const double months_in = fiscal_year_end_month;
    return {months_in / 12.0, (12.0 - months_in) / 12.0};
}

double calendarize(const std::map<int, double>& fy_values, int fiscal_year_end_month, int target_calendar_year) {
    const CalendarWeights w = calendarization_weights(fiscal_year_end_month);
    auto value_for = [&](int fy) {
        auto it = fy_values.find(fy);
        if (it == fy_values.end())
            throw Error(ErrorKind::MissingFiscalYear, "fiscal year " + std::to_string(fy) + " is required");
        return it->second;
    };
    double out = w.ending_in_year * value_for(target_calendar_year);
    if (w.ending_next_year > 0.0) out += w.ending_next_year * value_for(target_calendar_year + 1);
    return out;
}

// --- ratios ----------------------------------------------------------------

Ratio Ratio::of(std::optional<double> numerator, std::optional<double> denominator) {
    if (!numerator || !denominator) return {std::nullopt, Absence::MissingInput};
    if (!(*denominator > 0.0)) return {std::nullopt, Absence::NonPositiveDenominator};
    const double v = *numerator / *denominator;
    if (!std::isfinite(v)) return {std::nullopt, Absence::NonPositiveDenominator};
    return {v, Absence::None};
}

std::optional<double> RatioSet::find(std::string_view name) const {
    for (const auto& [key, member] : kRatioFields)
        if (key == name) return (this->*member).value;
    return std::nullopt;
}

Ratio* RatioSet::field(std::string_view name) {
    for (const auto& [key, member] : kRatioFields)
        if (key == name) return &(this->*member);
    return nullptr;
}

namespace {

std::optional<double> ratio_or(std::optional<double> direct, std::optional<double> total,
                               std::optional<double> shares) {
    if (direct) return direct;
    if (total && shares && *shares > 0.0) return *total / *shares;
    return std::nullopt;
}

std::optional<double> sum_if_any(std::initializer_list<std::optional<double>> parts) {
    std::optional<double> out;
    for (const auto& p : parts)
        if (p) out = out.value_or(0.0) + *p;
    return out;
}

}  // namespace

RatioSet compute_ratios(const FinancialSnapshot& s, std::optional<double> ev) {
    using enum ValueBasis;
    using enum Denominator;
    RatioSet r;

    // Margins and ROE divide by sales or equity and carry no value basis.
    r.roe = Ratio::of(s.net_income, s.common_equity);
    r.gross_margin = Ratio::of(s.gross_profit, s.revenue);
    r.ebitda_margin = Ratio::of(s.ebitda, s.revenue);
    r.ebit_margin = Ratio::of(s.ebit, s.revenue);
    r.net_income_margin = Ratio::of(s.net_income, s.revenue);

    const auto cfps = ratio_or(s.cash_flow_per_share, s.cash_flow_operating, s.weighted_avg_diluted_shares);
    const auto book_equity = s.book_value_total ? s.book_value_total : s.common_equity;
    const auto bvps = ratio_or(s.book_value_per_share, book_equity, s.basic_shares);
    r.pe = valuation_multiple<Equity, NetIncome>(s.share_price, s.eps_diluted);
    r.price_to_cash_flow = valuation_multiple<Equity, CashFlow>(s.share_price, cfps);
    r.price_to_book = valuation_multiple<Equity, BookValue>(s.share_price, bvps);
    r.ev_to_revenue = valuation_multiple<Enterprise, Revenue>(ev, s.revenue);
    r.ev_to_ebitda = valuation_multiple<Enterprise, Ebitda>(ev, s.ebitda);
    r.ev_to_ebit = valuation_multiple<Enterprise, Ebit>(ev, s.ebit);

    const auto total_debt = sum_if_any({s.short_term_debt, s.long_term_debt, s.capitalized_leases});
    std::optional<double> nd;
    if (total_debt || s.cash_and_equivalents) nd = net_debt(s, &r.provenance);

    std::optional<double> cap_book;
    if (nd && book_equity) cap_book = *nd + *book_equity;
    r.net_debt_to_cap_book = Ratio::of(nd, cap_book);

    std::optional<double> cap_market;
    if (nd && s.share_price && *s.share_price > 0.0 && s.basic_shares && *s.basic_shares > 0.0)
        cap_market = *nd + market_capitalization(s, Dilution::FullyDiluted, &r.provenance);
    r.net_debt_to_cap_market = Ratio::of(nd, cap_market);

    r.ebitda_to_interest = Ratio::of(s.ebitda, s.interest_expense);
    std::optional<double> ebitda_less_capex;
    if (s.ebitda && s.capex) ebitda_less_capex = *s.ebitda - *s.capex;
    r.ebitda_minus_capex_to_interest = Ratio::of(ebitda_less_capex, s.interest_expense);
    r.total_debt_to_ebitda = Ratio::of(total_debt, s.ebitda);
    return r;
}

// --- normalization ---------------------------------------------------------

FinancialSnapshot capitalize_operating_leases(const FinancialSnapshot& s, double factor) {
    if (!s.operating_lease_expense)
        throw Error(ErrorKind::MissingInput, "operating_lease_expense is required to capitalize leases");
    if (!std::isfinite(factor) || factor < 0.0)
        throw Error(ErrorKind::InvalidArgument, "lease capitalization factor must be finite and >= 0");
    FinancialSnapshot out = s;
    const double expense = *s.operating_lease_expense;
    if (factor < kLeaseFactorLow || factor > kLeaseFactorHigh) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "lease factor %.2f outside the usual 6.0x-8.0x band", factor);
        out.notes.emplace_back(buf);
    }
    if (expense == 0.0) return out;
    out.long_term_debt = s.long_term_debt.value_or(0.0) + factor * expense;
    if (s.ebitda) out.ebitda = *s.ebitda + expense;
    if (s.ebit) out.ebit = *s.ebit + expense;
    out.notes.emplace_back("operating leases capitalized");
    return out;
}

FinancialSnapshot adjust_securitization(const FinancialSnapshot& s, SecuritizationTreatment treatment) {
    if (!s.securitized_assets)
        throw Error(ErrorKind::MissingInput, "securitized_assets is required for the securitization adjustment");
    FinancialSnapshot out = s;
    const double amount = *s.securitized_assets;
    if (amount == 0.0) return out;
    out.working_capital_addback = s.working_capital_addback.value_or(0.0) + amount;
    if (treatment == SecuritizationTreatment::ReduceCash)
        out.cash_and_equivalents = s.cash_and_equivalents.value_or(0.0) - amount;
    else
        out.long_term_debt = s.long_term_debt.value_or(0.0) + amount;
    out.notes.emplace_back("securitized assets added back to working capital");
    return out;
}

}  // namespace dealdesk::financial
