#include "dealdesk/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "dealdesk/date.hpp"

namespace dealdesk::report {

// --- rounding ----------------------------------------------------------------

double round_decimal(double x, int decimals, Tie tie) {
    if (!std::isfinite(x) || decimals < 0) return x;
    char buf[400];
    const auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(x), std::chars_format::fixed);
    const std::string text(buf, res.ptr);
    const auto dot = text.find('.');
    const std::string whole = text.substr(0, dot);
    const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (frac.size() <= static_cast<std::size_t>(decimals)) return x;

    std::string digits = whole + frac.substr(0, static_cast<std::size_t>(decimals));
    const std::string rest = frac.substr(static_cast<std::size_t>(decimals));
    bool up = false;
    if (rest[0] > '5') {
        up = true;
    } else if (rest[0] == '5') {
        const bool exact_tie = rest.find_first_not_of('0', 1) == std::string::npos;
        if (!exact_tie || tie == Tie::HalfAwayFromZero)
            up = true;
        else
            up = (digits.back() - '0') % 2 == 1;
    }
    if (up) {
        std::size_t i = digits.size();
        while (i > 0 && digits[i - 1] == '9') digits[--i] = '0';
        if (i == 0)
            digits.insert(digits.begin(), '1');
        else
            ++digits[i - 1];
    }
    const std::size_t int_len = digits.size() - static_cast<std::size_t>(decimals);
    const std::string out = digits.substr(0, int_len) + "." + digits.substr(int_len);
    double v = 0.0;
    std::from_chars(out.data(), out.data() + out.size(), v);
    return std::signbit(x) ? -v : v;
}

double round_multiple(double x) { return round_decimal(x, 1, Tie::HalfEven); }

double round_millions(double x) { return round_decimal(x, 0, Tie::HalfAwayFromZero); }

double round_per_share(double x) {
    // Tolerance keeps exact steps such as 10.70 from falling to 10.65.
    return std::floor(x * 20.0 + 1e-9) / 20.0;
}

std::string fixed(double x, int decimals) {
    if (!std::isfinite(x)) return "n/m";
    const double r = round_decimal(x, decimals, Tie::HalfAwayFromZero);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, r == 0.0 ? 0.0 : r);
    return buf;
}

// --- helpers -----------------------------------------------------------------

namespace {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

Json array(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
    return a;
}

Json range_json(const comps::ValueRange& r) { return Json{{"low", number(r.low)}, {"high", number(r.high)}}; }

Json rounded_range(const comps::ValueRange& r, double (*round)(double)) {
    return Json{{"low", round(r.low)}, {"high", round(r.high)}};
}

Json coefficient_json(const economics::Coefficient& c) {
    return Json{{"name", c.name}, {"estimate", number(c.estimate)}, {"standard_error", number(c.standard_error)}};
}

Json period_json(const waves::PeriodEstimate& p) {
    return Json{{"period", number(p.period)},
                {"power_fraction", number(p.power_fraction)},
                {"frequency_index", p.frequency_index}};
}

/// Left-aligned first column, right-aligned remaining columns.
class TextTable {
public:
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    void rule() { rows_.emplace_back(); }

    void print(std::ostream& out) const {
        std::vector<std::size_t> width;
        for (const auto& r : rows_) {
            if (width.size() < r.size()) width.resize(r.size(), 0);
            for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
        }
        const std::size_t total =
            std::accumulate(width.begin(), width.end(), std::size_t{0}) + (width.empty() ? 0 : 2 * (width.size() - 1));
        for (const auto& r : rows_) {
            if (r.empty()) {
                out << std::string(total, '-') << '\n';
                continue;
            }
            std::string line;
            for (std::size_t i = 0; i < r.size(); ++i) {
                const std::string pad(width[i] - r[i].size(), ' ');
                if (i > 0) line += "  ";
                line += i == 0 ? r[i] + pad : pad + r[i];
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            out << line << '\n';
        }
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

/// Statistics print at 0.1 (multiples, ratios); large values such as EV per
/// unit print whole.
std::string stat_text(const std::optional<double>& x) {
    if (!x) return "n/a";
    return std::fabs(*x) >= 100.0 ? fixed(round_millions(*x), 0) : fixed(round_multiple(*x), 1);
}

std::string millions_text(double x) { return "$" + fixed(round_millions(x), 0); }

std::string millions_range(const comps::ValueRange& r) { return millions_text(r.low) + " - " + millions_text(r.high); }

}  // namespace

// --- JSON ----------------------------------------------------------------------

Json to_json(const comps::Aggregate& a) {
    Json raw{{"mean", number(a.mean)}, {"median", number(a.median)}, {"mean_excl_hi_lo", number(a.mean_excl_hi_lo)}};
    auto r = [](const std::optional<double>& x) { return x ? Json(round_multiple(*x)) : Json(nullptr); };
    Json rounded{{"mean", r(a.mean)}, {"median", r(a.median)}, {"mean_excl_hi_lo", r(a.mean_excl_hi_lo)}};
    return Json{{"count", a.count}, {"raw", raw}, {"rounded", rounded}};
}

Json to_json(const comps::ValuationSummary& v) {
    Json rows = Json::array();
    for (const auto& row : v.rows) {
        rows.push_back(Json{{"method", comps::to_string(row.method)},
                            {"metric", row.metric},
                            {"basis", row.range.basis == comps::ValueBasis::Equity ? "equity" : "enterprise"},
                            {"target_value", number(row.target_value)},
                            {"multiple", Json{{"low", row.range.low}, {"high", row.range.high}, {"scale", row.range.scale}}},
                            {"implied", range_json(row.implied)},
                            {"enterprise", range_json(row.enterprise)}});
    }
    Json methods = Json::array();
    for (const auto& m : v.methods)
        methods.push_back(Json{{"method", comps::to_string(m.method)}, {"enterprise", range_json(m.enterprise)}});
    return Json{{"rows", rows},
                {"methods", methods},
                {"summary_enterprise", range_json(v.summary_enterprise)},
                {"net_debt", number(v.net_debt)},
                {"equity", range_json(v.equity)},
                {"shares_outstanding", number(v.shares_outstanding)},
                {"per_share", range_json(v.per_share)},
                {"rounded",
                 Json{{"summary_enterprise", rounded_range(v.summary_enterprise, round_millions)},
                      {"equity", rounded_range(v.equity, round_millions)},
                      {"per_share", rounded_range(v.per_share, round_per_share)}}}};
}

Json to_json(const economics::EventStudy& study, const economics::ReturnSeries& series) {
    const auto& w = study.windows;
    Json events = Json::array();
    for (Eigen::Index i = 0; i < study.event_abnormal_returns.size(); ++i) {
        Json e{{"index", w.event_begin + i}, {"abnormal_return", number(study.event_abnormal_returns(i))}};
        const auto k = static_cast<std::size_t>(w.event_begin + i);
        if (k < series.dates.size()) e["date"] = format_iso_date(series.dates[k]);
        events.push_back(std::move(e));
    }
    return Json{{"windows",
                 Json{{"estimation", {w.estimation_begin, w.estimation_end}}, {"event", {w.event_begin, w.event_end}}}},
                {"alpha", number(study.fit.alpha)},
                {"beta", number(study.fit.beta)},
                {"alpha_standard_error", number(study.fit.alpha_standard_error)},
                {"beta_standard_error", number(study.fit.beta_standard_error)},
                {"r_squared", number(study.fit.r_squared)},
                {"event_abnormal_returns", events},
                {"cumulative_abnormal_return", number(study.event_abnormal_returns.sum())}};
}

Json to_json(const economics::TakeoverFit& fit) {
    auto group = [](const std::vector<economics::Coefficient>& cs) {
        Json a = Json::array();
        for (const auto& c : cs) a.push_back(coefficient_json(c));
        return a;
    };
    return Json{{"observations", fit.observations},
                {"intercept", fit.intercept ? coefficient_json(*fit.intercept) : Json(nullptr)},
                {"institutional", group(fit.institutional)},
                {"sectoral", group(fit.sectoral)},
                {"technological", group(fit.technological)},
                {"interactions", group(fit.interactions)},
                {"sigma", number(fit.sigma)},
                {"r_squared", number(fit.r_squared)}};
}

Json to_json(const waves::WaveDiagnostics& d, const waves::CountSeries& raw) {
    Json rms = Json::array();
    for (const auto& [deg, e] : d.rms_by_degree) rms.push_back(Json{{"degree", deg}, {"rms_error", number(e)}});
    const auto& p = d.polynomial_fit;
    return Json{{"length", raw.size()},
                {"window", d.window},
                {"smoothed_length", d.smoothed.size()},
                {"raw_autocorrelation", array(d.raw_autocorrelation)},
                {"autocorrelation", array(d.autocorrelation)},
                {"raw_dominant", period_json(d.raw_dominant)},
                {"dominant", period_json(d.dominant)},
                {"polynomial",
                 Json{{"degree", p.degree},
                      {"coefficients", array(p.coefficients)},
                      {"normalized_coefficients", array(p.normalized_coefficients)},
                      {"center", number(p.center)},
                      {"half_width", number(p.half_width)},
                      {"rms_error", number(p.rms_error)}}},
                {"rms_by_degree", rms}};
}

Json to_json(const waves::SlutskyYuleSummary& s) {
    return Json{{"runs", s.runs},
                {"smoothed_more_concentrated", s.smoothed_more_concentrated},
                {"mean_raw_lag1", number(s.mean_raw_lag1)},
                {"mean_smoothed_lag1", number(s.mean_smoothed_lag1)},
                {"mean_raw_power_fraction", number(s.mean_raw_power_fraction)},
                {"mean_smoothed_power_fraction", number(s.mean_smoothed_power_fraction)}};
}

Json to_json(const deals::ParseResult& parsed, const deals::DealSeries* series) {
    auto diag = [](const std::vector<deals::Diagnostic>& ds) {
        Json a = Json::array();
        for (const auto& d : ds) a.push_back(Json{{"line", d.line}, {"message", d.message}});
        return a;
    };
    Json out{{"records", parsed.records.size()},
             {"diagnostics", diag(parsed.diagnostics)},
             {"warnings", diag(parsed.warnings)}};
    if (series) {
        Json buckets = Json::array();
        for (Eigen::Index i = 0; i < series->counts.size(); ++i) {
            buckets.push_back(Json{{"period", series->counts.timestamps[static_cast<std::size_t>(i)]},
                                   {"count", series->counts.values(i)},
                                   {"total_value_usdm", number(series->total_value.values(i))},
                                   {"value_observations", series->value_observations[static_cast<std::size_t>(i)]}});
        }
        out["series"] = Json{{"bucketing", deals::to_string(series->bucketing)},
                             {"buckets", buckets},
                             {"excluded_values", series->excluded_values}};
    }
    return out;
}

// --- text --------------------------------------------------------------------

void write_comparables_text(std::ostream& out, const comps::CompSet& set, std::string_view title) {
    TextTable stats;
    stats.add({"Comparable " + std::string(title), "N", "Mean", "Median", "Mean excl. hi/lo"});
    stats.rule();
    for (const auto& name : set.metric_names()) {
        const auto a = comps::aggregate(set, name);
        stats.add({name, std::to_string(a.count), stat_text(a.mean), stat_text(a.median), stat_text(a.mean_excl_hi_lo)});
    }
    stats.print(out);
}

void write_valuation_text(std::ostream& out, const comps::ValuationSummary& v) {
    TextTable t;
    t.add({"Methodology", "Metric", "Target", "Multiple range", "Implied value"});
    t.rule();
    for (const auto& m : v.methods) {
        const std::string title = m.method == comps::Method::Trading ? "Comparable trading multiples"
                                                                     : "Comparable transaction multiples";
        for (const auto& row : v.rows) {
            if (row.method != m.method) continue;
            std::string implied = millions_range(row.implied);
            if (row.range.basis == comps::ValueBasis::Equity) implied += " (equity)";
            const std::string multiple = row.range.scale == 1.0
                                             ? fixed(row.range.low, 1) + "x - " + fixed(row.range.high, 1) + "x"
                                             : "$" + fixed(row.range.low, 0) + " - $" + fixed(row.range.high, 0);
            t.add({title, row.metric, fixed(row.target_value, 1), multiple, implied});
        }
        t.add({"  " + std::string(comps::to_string(m.method)) + " enterprise value", "", "", "",
               millions_range(m.enterprise)});
    }
    t.rule();
    t.add({"Summary Enterprise Value Range", "", "", "", millions_range(v.summary_enterprise)});
    t.add({"Less: net debt", "", "", "", millions_text(v.net_debt)});
    t.add({"Equity Value", "", "", "", millions_range(v.equity)});
    t.add({"Shares outstanding (m)", "", "", "", fixed(v.shares_outstanding, 1)});
    t.add({"Equity Value per Share", "", "", "",
           "$" + fixed(round_per_share(v.per_share.low), 2) + " - $" + fixed(round_per_share(v.per_share.high), 2)});
    t.print(out);
}

void write_event_study_text(std::ostream& out, const economics::EventStudy& s) {
    TextTable t;
    t.add({"Market model", "Estimate", "Std. error"});
    t.rule();
    t.add({"alpha", fixed(s.fit.alpha, 6), fixed(s.fit.alpha_standard_error, 6)});
    t.add({"beta", fixed(s.fit.beta, 6), fixed(s.fit.beta_standard_error, 6)});
    t.add({"R^2", fixed(s.fit.r_squared, 4), ""});
    t.print(out);
    out << "\nestimation window [" << s.windows.estimation_begin << ", " << s.windows.estimation_end
        << "), event window [" << s.windows.event_begin << ", " << s.windows.event_end << ")\n\n";
    TextTable e;
    e.add({"Event period", "Abnormal return"});
    e.rule();
    for (Eigen::Index i = 0; i < s.event_abnormal_returns.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        e.add({k < s.event_dates.size() ? format_iso_date(s.event_dates[k])
                                        : std::to_string(s.windows.event_begin + i),
               fixed(s.event_abnormal_returns(i), 6)});
    }
    e.rule();
    e.add({"CAR", fixed(s.event_abnormal_returns.sum(), 6)});
    e.print(out);
}

void write_regression_text(std::ostream& out, const economics::TakeoverFit& fit) {
    TextTable t;
    t.add({"Variable", "Group", "Estimate", "Std. error", "t"});
    t.rule();
    auto add = [&](const economics::Coefficient& c, const char* group) {
        t.add({c.name, group, fixed(c.estimate, 6), fixed(c.standard_error, 6),
               c.standard_error > 0 ? fixed(c.estimate / c.standard_error, 2) : "n/m"});
    };
    if (fit.intercept) add(*fit.intercept, "");
    for (const auto& c : fit.institutional) add(c, "I");
    for (const auto& c : fit.sectoral) add(c, "S");
    for (const auto& c : fit.technological) add(c, "TEC");
    for (const auto& c : fit.interactions) add(c, "TEC x TR");
    t.rule();
    t.print(out);
    out << "observations " << fit.observations << ", sigma " << fixed(fit.sigma, 6) << ", R^2 "
        << fixed(fit.r_squared, 4) << '\n';
}

void write_waves_text(std::ostream& out, const waves::WaveDiagnostics& d, const waves::CountSeries& raw) {
    out << "series length " << raw.size() << ", moving-average window " << d.window << ", smoothed length "
        << d.smoothed.size() << "\n\n";
    TextTable a;
    a.add({"Lag", "Raw ACF", "Smoothed ACF"});
    a.rule();
    for (Eigen::Index j = 0; j < d.autocorrelation.size(); ++j)
        a.add({std::to_string(j + 1), j < d.raw_autocorrelation.size() ? fixed(d.raw_autocorrelation(j), 4) : "",
               fixed(d.autocorrelation(j), 4)});
    a.print(out);
    out << '\n';
    TextTable p;
    p.add({"Dominant period", "Period", "Power fraction"});
    p.rule();
    p.add({"raw", fixed(d.raw_dominant.period, 2), fixed(d.raw_dominant.power_fraction, 4)});
    p.add({"smoothed", fixed(d.dominant.period, 2), fixed(d.dominant.power_fraction, 4)});
    p.print(out);
    out << '\n';
    TextTable r;
    r.add({"Polynomial degree", "RMS error"});
    r.rule();
    for (const auto& [deg, e] : d.rms_by_degree) r.add({std::to_string(deg), fixed(e, 4)});
    r.print(out);
    out << "\nselected degree " << d.polynomial_fit.degree << ", coefficients (ascending powers of t):";
    for (Eigen::Index i = 0; i < d.polynomial_fit.coefficients.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.6g", d.polynomial_fit.coefficients(i));
        out << buf;
    }
    out << '\n';
}

void write_slutsky_yule_text(std::ostream& out, const waves::SlutskyYuleSummary& s) {
    TextTable t;
    t.add({"Monte Carlo", "Raw", "Smoothed"});
    t.rule();
    t.add({"mean lag-1 ACF", fixed(s.mean_raw_lag1, 4), fixed(s.mean_smoothed_lag1, 4)});
    t.add({"mean dominant power fraction", fixed(s.mean_raw_power_fraction, 4),
           fixed(s.mean_smoothed_power_fraction, 4)});
    t.print(out);
    out << "smoothed series more concentrated in " << s.smoothed_more_concentrated << " of " << s.runs
        << " runs\n";
}

void write_ingest_text(std::ostream& out, const deals::ParseResult& parsed, const deals::DealSeries* series) {
    out << parsed.records.size() << " records, " << parsed.diagnostics.size() << " malformed rows, "
        << parsed.warnings.size() << " warnings\n";
    for (const auto& d : parsed.diagnostics) out << "  line " << d.line << ": " << d.message << '\n';
    for (const auto& w : parsed.warnings) out << "  warning, line " << w.line << ": " << w.message << '\n';
    if (!series) return;
    out << '\n';
    TextTable t;
    t.add({"Period", "Deals", "Value (USDm)", "Valued deals"});
    t.rule();
    for (Eigen::Index i = 0; i < series->counts.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        t.add({series->counts.timestamps[k], fixed(series->counts.values(i), 0), fixed(series->total_value.values(i), 1),
               std::to_string(series->value_observations[k])});
    }
    t.print(out);
    out << series->excluded_values << " deals without a reported value\n";
}

}  // namespace dealdesk::report
