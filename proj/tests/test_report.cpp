#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dealdesk/report.hpp"

using namespace dealdesk;
using namespace dealdesk::report;

TEST(Rounding, MultiplesTieToEven) {
    EXPECT_DOUBLE_EQ(round_multiple(11.05), 11.0);
    EXPECT_DOUBLE_EQ(round_multiple(11.15), 11.2);
    EXPECT_DOUBLE_EQ(round_multiple(11.051), 11.1);
    EXPECT_DOUBLE_EQ(round_multiple(12.26), 12.3);
    EXPECT_DOUBLE_EQ(round_multiple(-11.05), -11.0);
    EXPECT_DOUBLE_EQ(round_multiple(11.483333), 11.5);
}

TEST(Rounding, MillionsTieAwayFromZero) {
    EXPECT_DOUBLE_EQ(round_millions(846.5), 847);
    EXPECT_DOUBLE_EQ(round_millions(596.5), 597);
    EXPECT_DOUBLE_EQ(round_millions(-0.5), -1);
    EXPECT_DOUBLE_EQ(round_millions(1349.0), 1349);
    EXPECT_DOUBLE_EQ(round_millions(999.5), 1000);
}

TEST(Rounding, PerShareFloorsToNickel) {
    EXPECT_DOUBLE_EQ(round_per_share(596.5 / 55.7), 10.70);
    EXPECT_DOUBLE_EQ(round_per_share(670.0 / 55.7), 12.00);
    EXPECT_DOUBLE_EQ(round_per_share(10.70), 10.70);
    EXPECT_DOUBLE_EQ(round_per_share(10.749), 10.70);
    EXPECT_DOUBLE_EQ(round_per_share(14.0), 14.0);
}

TEST(Rounding, DecimalOfShortestForm) {
    EXPECT_DOUBLE_EQ(round_decimal(1.005, 2, Tie::HalfAwayFromZero), 1.01);
    EXPECT_DOUBLE_EQ(round_decimal(2.5, 0, Tie::HalfEven), 2.0);
    EXPECT_DOUBLE_EQ(round_decimal(3.5, 0, Tie::HalfEven), 4.0);
    EXPECT_DOUBLE_EQ(round_decimal(9.96, 1, Tie::HalfEven), 10.0);
    EXPECT_DOUBLE_EQ(round_decimal(1.6575, 2, Tie::HalfAwayFromZero), 1.66);
}

TEST(Fixed, FormatsAndFlagsNonFinite) {
    EXPECT_EQ(fixed(1.6575, 2), "1.66");
    EXPECT_EQ(fixed(846.5, 0), "847");
    EXPECT_EQ(fixed(-0.0001, 2), "0.00");
    EXPECT_EQ(fixed(std::nan(""), 1), "n/m");
}

TEST(ValuationJson, CarriesRawAndRoundedFigures) {
    const auto s = comps::build_summary({775, 870}, {918, 970}, 250, 55.7);
    const auto j = to_json(s);
    EXPECT_DOUBLE_EQ(j["summary_enterprise"]["low"].get<double>(), 846.5);
    EXPECT_DOUBLE_EQ(j["rounded"]["summary_enterprise"]["low"].get<double>(), 847);
    EXPECT_DOUBLE_EQ(j["rounded"]["equity"]["high"].get<double>(), 670);
    EXPECT_DOUBLE_EQ(j["rounded"]["per_share"]["low"].get<double>(), 10.70);
    EXPECT_DOUBLE_EQ(j["rounded"]["per_share"]["high"].get<double>(), 12.00);
}

TEST(AggregateJson, NullWhenAbsent) {
    const double one[] = {7.0};
    const auto j = to_json(comps::aggregate_values(one));
    EXPECT_EQ(j["count"], 1);
    EXPECT_TRUE(j["raw"]["mean_excl_hi_lo"].is_null());
    EXPECT_EQ(j["rounded"]["mean"], 7.0);
}

TEST(ValuationText, ShowsBridgeLines) {
    std::ifstream tin(std::string(DEALDESK_FIXTURES) + "/target.csv");
    const auto target = comps::load_target(tin);
    const auto ranges = comps::parse_ranges(KeyValueConfig::load(std::string(DEALDESK_FIXTURES) + "/ranges.toml"));
    std::ostringstream out;
    write_valuation_text(out, comps::value_target(target, ranges.rows, ranges.weights));
    const std::string text = out.str();
    for (const char* needle : {"$836 - $924", "$714 - $816", "$775 - $870", "$1056 - $1100", "$780 - $840",
                               "$918 - $970", "$847 - $920", "$597 - $670", "$10.70 - $12.00", "$1300 - $1400"})
        EXPECT_NE(text.find(needle), std::string::npos) << needle;
}

TEST(IngestJson, BucketsAndDiagnostics) {
    deals::ParseResult parsed;
    parsed.diagnostics.push_back({4, "bad"});
    deals::DealRecord d;
    d.announced = {2012, 1};
    d.target = d.bidder = "x";
    d.target_country = d.bidder_country = "CH";
    d.value_usdm = 5;
    parsed.records = {d, d};
    const auto series = deals::aggregate(parsed.records, deals::Bucketing::Month);
    const auto j = to_json(parsed, &series);
    EXPECT_EQ(j["records"], 2);
    EXPECT_EQ(j["diagnostics"][0]["line"], 4);
    EXPECT_EQ(j["series"]["buckets"][0]["period"], "2012-01");
    EXPECT_EQ(j["series"]["buckets"][0]["total_value_usdm"], 10.0);
    EXPECT_FALSE(to_json(parsed, nullptr).contains("series"));
}
