#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "dealdesk/comps.hpp"
#include "dealdesk/error.hpp"
#include "dealdesk/report.hpp"
#include "oracles.hpp"

using namespace dealdesk;
using namespace dealdesk::comps;

namespace {

CompSet load_fixture(const char* file) {
    std::ifstream in(std::string(DEALDESK_FIXTURES) + "/" + file);
    return load_comps(in);
}

ValuationSummary value_fixture() {
    std::ifstream tin(std::string(DEALDESK_FIXTURES) + "/target.csv");
    const auto target = load_target(tin);
    const auto ranges = parse_ranges(KeyValueConfig::load(std::string(DEALDESK_FIXTURES) + "/ranges.toml"));
    return value_target(target, ranges.rows, ranges.weights);
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected dealdesk::Error";
    return ErrorKind::InvalidArgument;
}

}  // namespace

// --- aggregation ----------------------------------------------------------------

TEST(Aggregate, TransactionMultiples) {
    const auto set = load_fixture("transaction_comps.csv");
    const auto ebitda = aggregate(set, "ev_to_ebitda");
    EXPECT_EQ(ebitda.count, 5u);
    EXPECT_DOUBLE_EQ(report::round_multiple(*ebitda.mean), 12.3);
    EXPECT_DOUBLE_EQ(report::round_multiple(*ebitda.median), 12.4);
    EXPECT_DOUBLE_EQ(report::round_multiple(*ebitda.mean_excl_hi_lo), 12.4);

    const auto unit = aggregate(set, "ev_per_unit");
    EXPECT_DOUBLE_EQ(report::round_millions(*unit.mean), 1371);
    EXPECT_DOUBLE_EQ(report::round_millions(*unit.median), 1350);
    EXPECT_DOUBLE_EQ(report::round_millions(*unit.mean_excl_hi_lo), 1349);
    EXPECT_EQ(set.members[0].industry_metrics.at("ev_per_unit").unit, "USD/unit");
    EXPECT_EQ(set.members[0].kind, CompKind::Transaction);
    EXPECT_EQ(set.members[0].date, make_date(2005, 1, 1));
}

TEST(Aggregate, TradingForwardMultiple) {
    const auto a = aggregate(load_fixture("trading_comps.csv"), "ev_to_ebitda_2005");
    EXPECT_EQ(a.count, 6u);
    EXPECT_DOUBLE_EQ(report::round_multiple(*a.mean), 11.5);
    EXPECT_DOUBLE_EQ(report::round_multiple(*a.mean_excl_hi_lo), 11.0);
}

TEST(Aggregate, TradingCatalogMultiplesLandInRatioSet) {
    const auto set = load_fixture("trading_comps.csv");
    EXPECT_DOUBLE_EQ(*set.members[0].multiples.ev_to_ebitda.value, 11.1);
    EXPECT_DOUBLE_EQ(*set.members[0].multiples.price_to_book.value, 0.9);
    EXPECT_DOUBLE_EQ(set.members[5].industry_metrics.at("market_cap").value, 11467);
    EXPECT_EQ(set.members[5].industry_metrics.at("market_cap").unit, "USDm");
}

TEST(Aggregate, SingleValueHasNoTrimmedMean) {
    const double v[] = {7.0};
    const auto a = aggregate_values(v);
    EXPECT_EQ(*a.mean, 7.0);
    EXPECT_EQ(*a.median, 7.0);
    EXPECT_FALSE(a.mean_excl_hi_lo.has_value());
}

TEST(Aggregate, TrimmedMeanDropsOneOfEachTiedExtreme) {
    const double v[] = {1, 1, 5, 9, 9};
    EXPECT_DOUBLE_EQ(*aggregate_values(v).mean_excl_hi_lo, (1 + 5 + 9) / 3.0);
}

TEST(Aggregate, PolicyDisablesStatistics) {
    const double v[] = {1, 2, 3};
    const auto a = aggregate_values(v, StatPolicy{false, true, false});
    EXPECT_FALSE(a.mean.has_value());
    EXPECT_EQ(*a.median, 2.0);
    EXPECT_FALSE(a.mean_excl_hi_lo.has_value());
}

TEST(Aggregate, MissingMetric) {
    EXPECT_EQ(kind_of([] { aggregate(load_fixture("trading_comps.csv"), "ev_per_unit"); }), ErrorKind::MetricAbsent);
}

TEST(Aggregate, NonPositiveMultiplesAreLeftOut) {
    std::istringstream in("name,kind,ev_to_ebitda\nA,trading,-4\nB,trading,10\nC,trading,12\n");
    const auto a = aggregate(load_comps(in), "ev_to_ebitda");
    EXPECT_EQ(a.count, 2u);
    EXPECT_DOUBLE_EQ(*a.mean, 11.0);
}

TEST(LoadComps, RejectsUnknownKindAndEmptyRows) {
    std::istringstream bad_kind("name,kind,ev_to_ebitda\nA,broker,4\n");
    EXPECT_EQ(kind_of([&] { load_comps(bad_kind); }), ErrorKind::ParseError);
    std::istringstream no_metric("name,kind,ev_to_ebitda\nA,trading,\n");
    EXPECT_EQ(kind_of([&] { load_comps(no_metric); }), ErrorKind::ParseError);
    std::istringstream bad_number("name,kind,ev_to_ebitda\nA,trading,abc\n");
    EXPECT_EQ(kind_of([&] { load_comps(bad_number); }), ErrorKind::ParseError);
}

TEST(AggregateProperty, MatchesOracleAndIsOrderInvariant) {
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> u(0.5, 40.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> v(3 + trial % 20);
        for (auto& x : v) x = u(gen);
        const auto a = aggregate_values(v);
        EXPECT_NEAR(*a.mean, oracle::mean(v), 1e-12);
        EXPECT_EQ(*a.median, oracle::median(v));
        EXPECT_NEAR(*a.mean_excl_hi_lo, oracle::trimmed_mean(v), 1e-12);
        const double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
        for (double s : {*a.mean, *a.median, *a.mean_excl_hi_lo}) {
            EXPECT_GE(s, lo);
            EXPECT_LE(s, hi);
        }
        std::shuffle(v.begin(), v.end(), gen);
        const auto b = aggregate_values(v);
        EXPECT_NEAR(*b.mean, *a.mean, 1e-12);
        EXPECT_EQ(*b.median, *a.median);
        EXPECT_NEAR(*b.mean_excl_hi_lo, *a.mean_excl_hi_lo, 1e-12);
    }
}

// --- ranges and summaries ---------------------------------------------------------

TEST(ApplyRange, Basic) {
    const auto r = apply_range(88, MultipleRange{"ltm_ebitda", 9.5, 10.5});
    EXPECT_DOUBLE_EQ(r.low, 836);
    EXPECT_DOUBLE_EQ(r.high, 924);
}

TEST(ApplyRange, ZeroMetricGivesZeroRange) {
    const auto r = apply_range(0, MultipleRange{"ltm_ebitda", 9.5, 10.5});
    EXPECT_EQ(r.low, 0.0);
    EXPECT_EQ(r.high, 0.0);
}

TEST(ApplyRange, ScaleConvertsUnits) {
    const auto r = apply_range(600, MultipleRange{"annual_capacity", 1300, 1400, ValueBasis::Enterprise, 0.001});
    EXPECT_NEAR(r.low, 780, 1e-9);
    EXPECT_NEAR(r.high, 840, 1e-9);
}

TEST(ApplyRange, Errors) {
    EXPECT_EQ(kind_of([] { apply_range(-1, MultipleRange{"m", 1, 2}); }), ErrorKind::NonPositiveMetric);
    EXPECT_EQ(kind_of([] { apply_range(1, MultipleRange{"m", 3, 2}); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { apply_range(1, MultipleRange{"m", 0, 2}); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { apply_range(1, MultipleRange{"m", 1, 2, ValueBasis::Enterprise, 0}); }),
              ErrorKind::InvalidArgument);
}

TEST(ApplyRangeProperty, OrderedAndMonotone) {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    for (int i = 0; i < 500; ++i) {
        const double lo = u(gen), hi = lo + u(gen), v = u(gen), dv = u(gen);
        const MultipleRange r{"m", lo, hi};
        const auto a = apply_range(v, r), b = apply_range(v + dv, r);
        EXPECT_LE(a.low, a.high);
        EXPECT_LE(a.low, b.low);
        EXPECT_LE(a.high, b.high);
    }
}

TEST(SummarizeMethod, MeansOfLowsAndHighs) {
    const ValueRange trading[] = {{836, 924}, {714, 816}};
    const auto t = summarize_method(trading);
    EXPECT_DOUBLE_EQ(t.low, 775);
    EXPECT_DOUBLE_EQ(t.high, 870);
    const ValueRange transaction[] = {{1056, 1100}, {780, 840}};
    const auto x = summarize_method(transaction);
    EXPECT_DOUBLE_EQ(x.low, 918);
    EXPECT_DOUBLE_EQ(x.high, 970);
}

TEST(SummarizeMethod, Weights) {
    const ValueRange r[] = {{0, 10}, {10, 20}};
    const double w[] = {3, 1};
    const auto s = summarize_method(r, w);
    EXPECT_DOUBLE_EQ(s.low, 2.5);
    EXPECT_DOUBLE_EQ(s.high, 12.5);
    const double zero[] = {0, 0};
    EXPECT_EQ(kind_of([&] { summarize_method(r, zero); }), ErrorKind::InvalidArgument);
    const double one[] = {1};
    EXPECT_EQ(kind_of([&] { summarize_method(r, one); }), ErrorKind::InvalidArgument);
}

TEST(BuildSummary, EqualRanges) {
    const auto s = build_summary({100, 100}, {100, 100}, 0, 10);
    EXPECT_DOUBLE_EQ(s.per_share.low, 10);
    EXPECT_DOUBLE_EQ(s.per_share.high, 10);
}

TEST(BuildSummary, NetDebtAndShares) {
    const auto s = build_summary({800, 900}, {800, 900}, 100, 50);
    EXPECT_DOUBLE_EQ(s.equity.low, 700);
    EXPECT_DOUBLE_EQ(s.equity.high, 800);
    EXPECT_DOUBLE_EQ(s.per_share.low, 14);
    EXPECT_DOUBLE_EQ(s.per_share.high, 16);
    EXPECT_EQ(kind_of([] { build_summary({1, 2}, {1, 2}, 0, 0); }), ErrorKind::NonPositiveShares);
}

TEST(BuildSummaryProperty, BridgeIdentities) {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    for (int i = 0; i < 300; ++i) {
        const double tl = u(gen), xl = u(gen);
        const ValueRange t{tl, tl + u(gen)}, x{xl, xl + u(gen)};
        const double nd = u(gen) - 500.0, shares = u(gen) / 10.0;
        const auto s = build_summary(t, x, nd, shares);
        EXPECT_NEAR(s.equity.low, s.summary_enterprise.low - nd, 1e-9);
        EXPECT_NEAR(s.per_share.high * shares, s.equity.high, 1e-9);
        EXPECT_LE(s.summary_enterprise.low, s.summary_enterprise.high);
        EXPECT_GE(s.summary_enterprise.low, std::min(t.low, x.low));
        EXPECT_LE(s.summary_enterprise.high, std::max(t.high, x.high));
    }
}

// --- full valuation ---------------------------------------------------------------

TEST(ValueTarget, ReproducesFixtureValuation) {
    const auto s = value_fixture();
    ASSERT_EQ(s.rows.size(), 4u);
    const double expect_rows[][2] = {{836, 924}, {714, 816}, {1056, 1100}, {780, 840}};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(s.rows[i].enterprise.low, expect_rows[i][0], 1e-9) << i;
        EXPECT_NEAR(s.rows[i].enterprise.high, expect_rows[i][1], 1e-9) << i;
    }
    EXPECT_EQ(s.rows[0].method, Method::Trading);
    EXPECT_EQ(s.rows[3].method, Method::Transaction);
    EXPECT_NEAR(s.summary_enterprise.low, 846.5, 1e-9);
    EXPECT_NEAR(s.summary_enterprise.high, 920, 1e-9);
    EXPECT_DOUBLE_EQ(report::round_millions(s.summary_enterprise.low), 847);
    EXPECT_DOUBLE_EQ(report::round_millions(s.equity.low), 597);
    EXPECT_DOUBLE_EQ(report::round_millions(s.equity.high), 670);
    EXPECT_DOUBLE_EQ(report::round_per_share(s.per_share.low), 10.70);
    EXPECT_DOUBLE_EQ(report::round_per_share(s.per_share.high), 12.00);
}

TEST(ValueTarget, EquityBasisRowsAddNetDebt) {
    TargetProfile t{"T", {{"net_income", 20}}, 100, 10};
    const MethodRow rows[] = {{Method::Trading, {"net_income", 10, 12, ValueBasis::Equity}}};
    const auto s = value_target(t, rows);
    EXPECT_DOUBLE_EQ(s.rows[0].implied.low, 200);
    EXPECT_DOUBLE_EQ(s.rows[0].enterprise.low, 300);
    EXPECT_DOUBLE_EQ(s.equity.low, 200);
    EXPECT_DOUBLE_EQ(s.per_share.high, 24);
}

TEST(ValueTarget, Errors) {
    TargetProfile t{"T", {{"ltm_ebitda", -5}}, 0, 10};
    const MethodRow missing[] = {{Method::Trading, {"ebit", 1, 2}}};
    EXPECT_EQ(kind_of([&] { value_target(t, missing); }), ErrorKind::MetricAbsent);
    const MethodRow negative[] = {{Method::Trading, {"ltm_ebitda", 1, 2}}};
    EXPECT_EQ(kind_of([&] { value_target(t, negative); }), ErrorKind::NonPositiveMetric);
    EXPECT_EQ(kind_of([&] { value_target(t, {}); }), ErrorKind::InvalidArgument);
}

TEST(ParseRanges, TokensAndOrder) {
    std::istringstream in(
        "transaction.ltm_ebitda = \"12..12.5\"\n"
        "trading.net_income = \"10..12 equity\"\n"
        "weight.transaction = 2\n"
        "trading.ltm_ebitda = \"$9.5..$10.5 scale=2\"\n");
    const auto r = parse_ranges(KeyValueConfig::parse(in));
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_EQ(r.rows[0].range.metric, "net_income");
    EXPECT_EQ(r.rows[0].range.basis, ValueBasis::Equity);
    EXPECT_EQ(r.rows[1].range.metric, "ltm_ebitda");
    EXPECT_DOUBLE_EQ(r.rows[1].range.scale, 2.0);
    EXPECT_DOUBLE_EQ(r.rows[1].range.low, 9.5);
    EXPECT_EQ(r.rows[2].method, Method::Transaction);
    EXPECT_DOUBLE_EQ(r.weights.transaction, 2.0);
}

TEST(ParseRanges, RejectsMalformedEntries) {
    for (const char* text : {"foo.x = \"1..2\"\n", "trading.x = \"1-2\"\n", "trading.x = \"2..1\"\n",
                             "trading.x = \"1..2 bogus\"\n", "nodot = 1\n"}) {
        std::istringstream in(text);
        const auto cfg = KeyValueConfig::parse(in);
        EXPECT_EQ(kind_of([&] { parse_ranges(cfg); }), ErrorKind::ConfigInvalid) << text;
    }
}

TEST(LoadTarget, DerivesNetDebtAndSharesFromBalanceSheet) {
    std::istringstream in("name,ltm_ebitda,long_term_debt,cash_and_equivalents,basic_shares,in_the_money_options\n"
                          "T,88,300,50,50,5.7\n");
    const auto t = load_target(in);
    EXPECT_DOUBLE_EQ(t.net_debt, 250);
    EXPECT_DOUBLE_EQ(t.shares_outstanding, 55.7);
    EXPECT_DOUBLE_EQ(t.metrics.at("ltm_ebitda"), 88);
    EXPECT_EQ(t.metrics.count("long_term_debt"), 1u);
}

TEST(LoadTarget, MissingInputs) {
    std::istringstream in("name,ltm_ebitda,shares_outstanding\nT,88,10\n");
    EXPECT_EQ(kind_of([&] { load_target(in); }), ErrorKind::MissingInput);
    std::istringstream two("name,net_debt,shares_outstanding\nA,1,1\nB,1,1\n");
    EXPECT_EQ(kind_of([&] { load_target(two); }), ErrorKind::InvalidArgument);
}
