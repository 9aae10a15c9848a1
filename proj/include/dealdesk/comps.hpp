#pragma once

#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dealdesk/date.hpp"
#include "dealdesk/financial.hpp"
#include "dealdesk/kv_config.hpp"

namespace dealdesk::comps {

using financial::ValueBasis;

enum class CompKind { Trading, Transaction };

struct IndustryMetric {
    double value = 0.0;
    std::string unit;
};

/// A comparable company (trading) or precedent deal (transaction).
struct Comparable {
    std::string name;
    CompKind kind = CompKind::Trading;
    std::optional<Date> date;
    financial::RatioSet multiples;
    /// Anything outside the ratio catalog: period-specific multiples such as
    /// ev_to_ebitda_2006e, or industry measures such as ev_per_unit.
    std::map<std::string, IndustryMetric> industry_metrics;

    std::optional<double> metric(std::string_view name) const;
    bool has_any_metric() const;
};

struct StatPolicy {
    bool mean = true;
    bool median = true;
    bool mean_excl_hi_lo = true;
};

struct CompSet {
    std::vector<Comparable> members;
    StatPolicy stat_policy;

    /// Sorted union of metric names present on at least one member.
    std::vector<std::string> metric_names() const;
};

struct Aggregate {
    std::size_t count = 0;
    std::optional<double> mean;
    std::optional<double> median;
    /// Absent with fewer than three observations.
    std::optional<double> mean_excl_hi_lo;
};

/// Statistics over raw values; `values` must be non-empty.
Aggregate aggregate_values(std::span<const double> values, const StatPolicy& policy = {});

/// Mean, median and mean excluding one high and one low observation over the
/// members that carry `metric`. Throws Error(MetricAbsent) when none do.
Aggregate aggregate(const CompSet& set, std::string_view metric);

struct ValueRange {
    double low = 0.0;
    double high = 0.0;
};

struct MultipleRange {
    std::string metric;
    double low = 0.0;
    double high = 0.0;
    ValueBasis basis = ValueBasis::Enterprise;
    /// Unit conversion applied to metric x multiple, e.g. 0.001 when a
    /// capacity in thousands of units meets a price per unit and the result
    /// should be in millions.
    double scale = 1.0;
};

void validate(const MultipleRange& range);

/// (low x value x scale, high x value x scale). Negative metric values are rejected.
ValueRange apply_range(double target_metric_value, const MultipleRange& range);

/// Componentwise (weighted) mean of lows and highs. Equal weights by default.
ValueRange summarize_method(std::span<const ValueRange> ranges, std::span<const double> weights = {});

enum class Method { Trading, Transaction };

constexpr std::string_view to_string(Method m) noexcept { return m == Method::Trading ? "trading" : "transaction"; }

struct MethodRow {
    Method method = Method::Trading;
    MultipleRange range;
};

struct RowValuation {
    Method method;
    std::string metric;
    double target_value;
    MultipleRange range;
    /// Direct product of range and target value, in the range's basis.
    ValueRange implied;
    /// `implied` converted to enterprise value.
    ValueRange enterprise;
};

struct MethodSummary {
    Method method;
    ValueRange enterprise;
};

struct ValuationSummary {
    std::vector<RowValuation> rows;
    std::vector<MethodSummary> methods;
    ValueRange summary_enterprise;
    double net_debt = 0.0;
    ValueRange equity;
    double shares_outstanding = 0.0;
    ValueRange per_share;
};

/// Combines a trading and a transaction range into the enterprise, equity and
/// per-share summary. Throws Error(NonPositiveShares) when shares <= 0.
ValuationSummary build_summary(ValueRange trading, ValueRange transaction, double net_debt, double shares);

struct TargetProfile {
    std::string name;
    std::map<std::string, double> metrics;
    double net_debt = 0.0;
    double shares_outstanding = 0.0;
};

struct MethodWeights {
    double trading = 1.0;
    double transaction = 1.0;
};

/// Applies each multiple range to the target, converts equity-basis rows to
/// enterprise value by adding net debt, averages rows within each method and
/// then across methods.
ValuationSummary value_target(const TargetProfile& target, std::span<const MethodRow> rows,
                              const MethodWeights& weights = {});

// --- file formats ----------------------------------------------------------

/// Columns name, kind (trading|transaction), date, then one column per metric.
/// A header may carry a unit in brackets: "ev_per_unit [USD/unit]".
CompSet load_comps(std::istream& in);

struct RangeFile {
    std::vector<MethodRow> rows;
    MethodWeights weights;
};

/// Entries `trading.<metric> = "low..high"` or `transaction.<metric> = ...`,
/// optionally followed by `equity` and/or `scale=<factor>`;
/// `weight.trading` / `weight.transaction` set method weights.
RangeFile parse_ranges(const KeyValueConfig& cfg);

/// One-row CSV of target metrics plus `net_debt` (or the balance-sheet inputs
/// to derive it) and `shares_outstanding` (or `basic_shares`).
TargetProfile load_target(std::istream& in);

}  // namespace dealdesk::comps
