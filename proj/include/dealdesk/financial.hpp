#pragma once

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dealdesk/date.hpp"

namespace dealdesk::financial {

/// One company's statement, balance-sheet and share inputs at a date.
/// Currency amounts are in millions, share counts in millions, per-share
/// values in currency. Absent inputs are empty optionals.
struct FinancialSnapshot {
    std::string name;
    std::optional<Date> as_of_date;
    int fiscal_year_end_month = 12;

    // income statement / cash flow
    std::optional<double> revenue;
    std::optional<double> ebitda;
    std::optional<double> ebit;
    std::optional<double> depreciation_amortization;
    std::optional<double> net_income;
    std::optional<double> cash_flow_operating;
    std::optional<double> gross_profit;

    // balance sheet
    std::optional<double> cash_and_equivalents;
    std::optional<double> short_term_debt;
    std::optional<double> long_term_debt;
    std::optional<double> capitalized_leases;
    std::optional<double> minority_interest;
    std::optional<double> preferred_equity;
    std::optional<double> long_term_investments;
    std::optional<double> common_equity;
    std::optional<double> book_value_total;

    // notes
    std::optional<double> interest_expense;
    std::optional<double> capex;
    std::optional<double> operating_lease_expense;
    std::optional<double> securitized_assets;

    // market and shares
    std::optional<double> share_price;
    std::optional<double> basic_shares;
    std::optional<double> in_the_money_options;
    std::optional<double> weighted_avg_diluted_shares;
    std::optional<double> eps_diluted;
    std::optional<double> cash_flow_per_share;
    std::optional<double> book_value_per_share;

    /// Securitized assets added back to working capital by adjust_securitization().
    std::optional<double> working_capital_addback;

    /// Free-form adjustment and provenance notes, in the order they were made.
    std::vector<std::string> notes;
};

/// Throws Error(InvalidArgument) when a snapshot breaks a field invariant:
/// negative share counts, EBITDA != EBIT + D&A, gross profit above revenue,
/// or a fiscal year-end month outside 1..12.
void validate(const FinancialSnapshot& s);

/// Names of inputs that were absent and defaulted to zero.
struct Provenance {
    std::vector<std::string> defaulted;

    void note_default(std::string field) { defaulted.push_back(std::move(field)); }
    bool clean() const noexcept { return defaulted.empty(); }
};

/// Short-term + long-term debt + capitalized leases - cash. May be negative.
double net_debt(const FinancialSnapshot& s, Provenance* provenance = nullptr);

enum class Dilution { Basic, FullyDiluted };

/// Price times basic shares, or times basic + in-the-money options.
double market_capitalization(const FinancialSnapshot& s, Dilution dilution, Provenance* provenance = nullptr);

struct ConvertibleSecurity {
    double face_value = 0.0;
    double conversion_price = 0.0;
    /// Shares issued if converted; counted in equity only when the security is in the money.
    double shares_on_conversion = 0.0;
};

struct EnterpriseValue {
    double market_cap = 0.0;
    double net_debt = 0.0;
    double preferred_equity = 0.0;
    double minority_interest = 0.0;
    double long_term_investments = 0.0;
    double convertible_equity = 0.0;
    double convertible_debt = 0.0;
    double total = 0.0;
    Provenance provenance;
};

/// Market cap + net debt + preferred + minority interest - long-term investments.
/// In-the-money convertibles join equity through their conversion shares;
/// out-of-the-money convertibles join debt at face value.
EnterpriseValue enterprise_value(const FinancialSnapshot& s, std::span<const ConvertibleSecurity> convertibles = {},
                                 Dilution dilution = Dilution::FullyDiluted);

enum class Accounting { Consolidation, EquityMethod };
enum class ReconcileMode { AdjustEbitda, AdjustValue };

struct SubsidiaryPosition {
    double ownership_pct = 1.0;
    Accounting accounting = Accounting::Consolidation;
    double subsidiary_ebitda = 0.0;
    double subsidiary_value = 0.0;
};

struct Reconciled {
    double ebitda;
    double value;
};

/// Makes the parent's EBITDA and market value describe the same ownership
/// share of a subsidiary. Equity-method stakes are missing from EBITDA but
/// present in value; partially owned consolidated stakes are fully in EBITDA
/// but only partially in value.
Reconciled reconcile_subsidiary(double parent_ebitda, double parent_value, const SubsidiaryPosition& pos,
                                ReconcileMode mode);

enum class PeriodKind { FiscalYear, Quarter };

struct PeriodStatement {
    std::string period_label;
    PeriodKind period_kind = PeriodKind::FiscalYear;
    Date start_date;
    Date end_date;
    std::map<std::string, double> line_items;
};

void validate(const PeriodStatement& p);

/// Fiscal year minus the prior-year stub quarters plus the matching current
/// quarters. Every line item of the fiscal year must appear in every stub.
PeriodStatement ltm(const PeriodStatement& fiscal_year, std::span<const PeriodStatement> stub_prior,
                    std::span<const PeriodStatement> stub_current);

struct CalendarWeights {
    /// Weight on the fiscal year ending inside the target calendar year.
    double ending_in_year;
    /// Weight on the following fiscal year.
    double ending_next_year;
};

/// Whole-month overlap of each fiscal year with a calendar year, over 12.
CalendarWeights calendarization_weights(int fiscal_year_end_month);

/// Re-weights fiscal-year values (keyed by the calendar year each fiscal
/// year ends in) onto a calendar year.
double calendarize(const std::map<int, double>& fy_values, int fiscal_year_end_month, int target_calendar_year);

// --- ratio catalog ---------------------------------------------------------

enum class ValueBasis { Equity, Enterprise };
enum class Denominator { BookValue, NetIncome, CashFlow, Revenue, Ebitda, Ebit };

/// Book value, net income and cash flow are measured after interest.
constexpr bool interest_subtracted(Denominator d) noexcept {
    return d == Denominator::BookValue || d == Denominator::NetIncome || d == Denominator::CashFlow;
}

/// After-interest denominators pair with equity value, pre-interest ones with enterprise value.
constexpr ValueBasis required_basis(Denominator d) noexcept {
    return interest_subtracted(d) ? ValueBasis::Equity : ValueBasis::Enterprise;
}

template <ValueBasis B, Denominator D>
concept ConsistentMultiple = (required_basis(D) == B);

enum class Absence { None, MissingInput, NonPositiveDenominator };

constexpr std::string_view to_string(Absence a) noexcept {
    switch (a) {
        case Absence::None: return "present";
        case Absence::MissingInput: return "missing input";
        case Absence::NonPositiveDenominator: return "non-meaningful denominator";
    }
    return "";
}

struct Ratio {
    std::optional<double> value;
    Absence reason = Absence::MissingInput;

    bool present() const noexcept { return value.has_value(); }

    /// numerator / denominator; absent when either input is missing or the
    /// denominator is not positive.
    static Ratio of(std::optional<double> numerator, std::optional<double> denominator);
};

/// Valuation multiple whose numerator/denominator pairing is checked at compile time.
template <ValueBasis B, Denominator D>
    requires ConsistentMultiple<B, D>
Ratio valuation_multiple(std::optional<double> numerator, std::optional<double> denominator) {
    return Ratio::of(numerator, denominator);
}

struct RatioSet {
    // profitability
    Ratio roe;
    Ratio gross_margin;
    Ratio ebitda_margin;
    Ratio ebit_margin;
    Ratio net_income_margin;
    // valuation
    Ratio pe;
    Ratio price_to_cash_flow;
    Ratio price_to_book;
    Ratio ev_to_revenue;
    Ratio ev_to_ebitda;
    Ratio ev_to_ebit;
    // credit
    Ratio net_debt_to_cap_book;
    Ratio net_debt_to_cap_market;
    Ratio ebitda_to_interest;
    Ratio ebitda_minus_capex_to_interest;
    Ratio total_debt_to_ebitda;

    Provenance provenance;

    std::optional<double> find(std::string_view name) const;
    Ratio* field(std::string_view name);
};

inline constexpr std::array<std::pair<std::string_view, Ratio RatioSet::*>, 16> kRatioFields{{
    {"roe", &RatioSet::roe},
    {"gross_margin", &RatioSet::gross_margin},
    {"ebitda_margin", &RatioSet::ebitda_margin},
    {"ebit_margin", &RatioSet::ebit_margin},
    {"net_income_margin", &RatioSet::net_income_margin},
    {"pe", &RatioSet::pe},
    {"price_to_cash_flow", &RatioSet::price_to_cash_flow},
    {"price_to_book", &RatioSet::price_to_book},
    {"ev_to_revenue", &RatioSet::ev_to_revenue},
    {"ev_to_ebitda", &RatioSet::ev_to_ebitda},
    {"ev_to_ebit", &RatioSet::ev_to_ebit},
    {"net_debt_to_cap_book", &RatioSet::net_debt_to_cap_book},
    {"net_debt_to_cap_market", &RatioSet::net_debt_to_cap_market},
    {"ebitda_to_interest", &RatioSet::ebitda_to_interest},
    {"ebitda_minus_capex_to_interest", &RatioSet::ebitda_minus_capex_to_interest},
    {"total_debt_to_ebitda", &RatioSet::total_debt_to_ebitda},
}};

/// Evaluates the profitability, valuation and credit ratio catalog. Ratios
/// whose inputs are missing or whose denominator is not positive are absent.
RatioSet compute_ratios(const FinancialSnapshot& s, std::optional<double> ev);

// --- normalization ---------------------------------------------------------

inline constexpr double kLeaseFactorLow = 6.0;
inline constexpr double kLeaseFactorHigh = 8.0;

/// Adds factor x lease expense to long-term debt and the lease expense back to
/// EBITDA (and EBIT, so EBITDA = EBIT + D&A still holds). Factors outside
/// [6, 8] are accepted with a note.
FinancialSnapshot capitalize_operating_leases(const FinancialSnapshot& s, double factor);

enum class SecuritizationTreatment { ReduceCash, AddDebt };

/// Adds securitized assets back to working capital and offsets them against
/// cash or long-term debt.
FinancialSnapshot adjust_securitization(const FinancialSnapshot& s, SecuritizationTreatment treatment);

// --- CSV -------------------------------------------------------------------

/// One snapshot per row; header names match the field names, blank is absent.
std::vector<FinancialSnapshot> load_snapshots(std::istream& in);

/// Columns period_label, period_kind, start_date, end_date; every other
/// column is a line item.
std::vector<PeriodStatement> load_period_statements(std::istream& in);

}  // namespace dealdesk::financial
