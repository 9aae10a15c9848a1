#include "dealdesk/comps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dealdesk/error.hpp"

namespace dealdesk::comps {

std::optional<double> Comparable::metric(std::string_view name) const {
    if (auto v = multiples.find(name)) return v;
    if (auto it = industry_metrics.find(std::string(name)); it != industry_metrics.end()) return it->second.value;
    return std::nullopt;
}

bool Comparable::has_any_metric() const {
    if (!industry_metrics.empty()) return true;
    return std::any_of(financial::kRatioFields.begin(), financial::kRatioFields.end(),
                       [&](const auto& f) { return (multiples.*f.second).present(); });
}

std::vector<std::string> CompSet::metric_names() const {
    std::set<std::string> names;
    for (const auto& m : members) {
        for (const auto& [key, member] : financial::kRatioFields)
            if ((m.multiples.*member).present()) names.emplace(key);
        for (const auto& [key, _] : m.industry_metrics) names.insert(key);
    }
    return {names.begin(), names.end()};
}

Aggregate aggregate_values(std::span<const double> values, const StatPolicy& policy) {
    if (values.empty()) throw Error(ErrorKind::MetricAbsent, "no observations to aggregate");
    Aggregate out;
    out.count = values.size();
    const double n = static_cast<double>(values.size());
    const double total = std::accumulate(values.begin(), values.end(), 0.0);
    if (policy.mean) out.mean = total / n;
    if (policy.median) {
        std::vector<double> sorted(values.begin(), values.end());
        std::sort(sorted.begin(), sorted.end());
        const std::size_t mid = sorted.size() / 2;
        out.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    }
    if (policy.mean_excl_hi_lo && values.size() >= 3) {
        // one occurrence each of the max and the min, first in list order
        const auto hi = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
        std::size_t lo = hi == 0 ? 1 : 0;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (i != hi && values[i] < values[lo]) lo = i;
        double kept = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (i != hi && i != lo) kept += values[i];
        out.mean_excl_hi_lo = kept / (n - 2.0);
    }
    return out;
}

Aggregate aggregate(const CompSet& set, std::string_view metric) {
    if (set.members.empty()) throw Error(ErrorKind::InvalidArgument, "comp set has no members");
    std::vector<double> values;
    for (const auto& m : set.members)
        if (auto v = m.metric(metric)) values.push_back(*v);
    if (values.empty()) throw Error(ErrorKind::MetricAbsent, "no comparable carries metric '" + std::string(metric) + "'");
    return aggregate_values(values, set.stat_policy);
}

void validate(const MultipleRange& range) {
    if (!std::isfinite(range.low) || !std::isfinite(range.high))
        throw Error(ErrorKind::InvalidArgument, range.metric + ": multiple range must be finite");
    if (!(range.low > 0.0)) throw Error(ErrorKind::InvalidArgument, range.metric + ": range low must be > 0");
    if (range.low > range.high) throw Error(ErrorKind::InvalidArgument, range.metric + ": range low exceeds high");
    if (!(range.scale > 0.0) || !std::isfinite(range.scale))
        throw Error(ErrorKind::InvalidArgument, range.metric + ": scale must be finite and > 0");
}

ValueRange apply_range(double target_metric_value, const MultipleRange& range) {
    validate(range);
    if (!std::isfinite(target_metric_value) || target_metric_value < 0.0)
        throw Error(ErrorKind::NonPositiveMetric,
                    range.metric + ": target metric value must be >= 0 to apply a multiple range");
    return {range.low * target_metric_value * range.scale, range.high * target_metric_value * range.scale};
}

ValueRange summarize_method(std::span<const ValueRange> ranges, std::span<const double> weights) {
    if (ranges.empty()) throw Error(ErrorKind::InvalidArgument, "no ranges to summarize");
    if (!weights.empty() && weights.size() != ranges.size())
        throw Error(ErrorKind::InvalidArgument, "weights must match ranges one to one");
    double wsum = 0.0;
    ValueRange out;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "weights must be >= 0");
        out.low += w * ranges[i].low;
        out.high += w * ranges[i].high;
        wsum += w;
    }
    if (!(wsum > 0.0)) throw Error(ErrorKind::InvalidArgument, "weights must not all be zero");
    out.low /= wsum;
    out.high /= wsum;
    return out;
}

namespace {

void finish_summary(ValuationSummary& s, double net_debt, double shares) {
    if (!(shares > 0.0)) throw Error(ErrorKind::NonPositiveShares, "shares outstanding must be > 0");
    s.net_debt = net_debt;
    s.shares_outstanding = shares;
    s.equity = {s.summary_enterprise.low - net_debt, s.summary_enterprise.high - net_debt};
    s.per_share = {s.equity.low / shares, s.equity.high / shares};
}

}  // namespace

ValuationSummary build_summary(ValueRange trading, ValueRange transaction, double net_debt, double shares) {
    ValuationSummary s;
    s.methods = {{Method::Trading, trading}, {Method::Transaction, transaction}};
    const ValueRange both[] = {trading, transaction};
    s.summary_enterprise = summarize_method(both);
    finish_summary(s, net_debt, shares);
    return s;
}

ValuationSummary value_target(const TargetProfile& target, std::span<const MethodRow> rows,
                              const MethodWeights& weights) {
    if (rows.empty()) throw Error(ErrorKind::InvalidArgument, "no multiple ranges to apply");
    ValuationSummary s;
    std::vector<ValueRange> per_method[2];
    for (const auto& row : rows) {
        auto it = target.metrics.find(row.range.metric);
        if (it == target.metrics.end())
            throw Error(ErrorKind::MetricAbsent, "target has no value for metric '" + row.range.metric + "'");
        const double value = it->second;
        if (row.range.basis == ValueBasis::Enterprise && !(value > 0.0))
            throw Error(ErrorKind::NonPositiveMetric,
                        row.range.metric + ": enterprise multiple applied to a non-positive target metric");
        RowValuation rv{row.method, row.range.metric, value, row.range, apply_range(value, row.range), {}};
        rv.enterprise = rv.implied;
        if (row.range.basis == ValueBasis::Equity) {
            rv.enterprise.low += target.net_debt;
            rv.enterprise.high += target.net_debt;
        }
        per_method[row.method == Method::Trading ? 0 : 1].push_back(rv.enterprise);
        s.rows.push_back(std::move(rv));
    }
    std::vector<ValueRange> method_ranges;
    std::vector<double> method_weights;
    for (Method m : {Method::Trading, Method::Transaction}) {
        const auto& ranges = per_method[m == Method::Trading ? 0 : 1];
        if (ranges.empty()) continue;
        const ValueRange r = summarize_method(ranges);
        s.methods.push_back({m, r});
        method_ranges.push_back(r);
        method_weights.push_back(m == Method::Trading ? weights.trading : weights.transaction);
    }
    s.summary_enterprise = summarize_method(method_ranges, method_weights);
    finish_summary(s, target.net_debt, target.shares_outstanding);
    return s;
}

}  // namespace dealdesk::comps
