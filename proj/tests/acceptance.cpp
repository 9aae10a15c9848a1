// Acceptance checks: one PASS/FAIL line per criterion.
// Usage: dealdesk_acceptance <dealdesk binary> <fixtures dir>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dealdesk/comps.hpp"
#include "dealdesk/deals.hpp"
#include "dealdesk/economics.hpp"
#include "dealdesk/financial.hpp"
#include "dealdesk/random.hpp"
#include "dealdesk/report.hpp"
#include "dealdesk/waves.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace dealdesk;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << ' ' << id << ' ' << name << ": " << detail << '\n';
    if (!ok) ++failures;
}

/// Median wall time in milliseconds over `reps` calls.
template <typename F>
double median_ms(F&& f, int reps = 21) {
    std::vector<double> t;
    for (int i = 0; i < reps; ++i) {
        const auto start = Clock::now();
        f();
        t.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
    }
    std::nth_element(t.begin(), t.begin() + reps / 2, t.end());
    return t[static_cast<std::size_t>(reps / 2)];
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

std::string capture(const std::string& command) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    pclose(pipe);
    return out;
}

// 1 ------------------------------------------------------------------------------
void transaction_aggregation() {
    const std::vector<double> multiples{12.4, 11.4, 9.7, 13.3, 14.5};
    const std::vector<double> per_unit{1124, 1350, 1008, 1573, 1800};
    comps::Aggregate a, b;
    const double ms = median_ms([&] {
        a = comps::aggregate_values(multiples);
        b = comps::aggregate_values(per_unit);
    });
    using report::round_millions, report::round_multiple;
    const bool ok = round_multiple(*a.mean) == 12.3 && round_multiple(*a.median) == 12.4 &&
                    round_multiple(*a.mean_excl_hi_lo) == 12.4 && round_millions(*b.mean) == 1371 &&
                    round_millions(*b.median) == 1350 && round_millions(*b.mean_excl_hi_lo) == 1349 && ms < 1.0;
    verdict(1, "transaction comps aggregation", ok,
            fmt("EV/EBITDA %.1f/%.1f/%.1f, EV/unit %.0f/%.0f/%.0f, %.4f ms", round_multiple(*a.mean),
                round_multiple(*a.median), round_multiple(*a.mean_excl_hi_lo), round_millions(*b.mean),
                round_millions(*b.median), round_millions(*b.mean_excl_hi_lo), ms));
}

// 2 ------------------------------------------------------------------------------
void end_to_end_valuation(const std::string& fixtures) {
    std::ifstream tin(fixtures + "/target.csv");
    const auto target = comps::load_target(tin);
    const auto ranges = comps::parse_ranges(KeyValueConfig::load(fixtures + "/ranges.toml"));
    comps::ValuationSummary s;
    const double ms = median_ms([&] { s = comps::value_target(target, ranges.rows, ranges.weights); });
    using report::round_millions, report::round_per_share;
    auto near = [](double x, double want, double tol) { return std::abs(x - want) <= tol + 1e-9; };
    const double ev_lo = round_millions(s.summary_enterprise.low), ev_hi = round_millions(s.summary_enterprise.high);
    const double eq_lo = round_millions(s.equity.low), eq_hi = round_millions(s.equity.high);
    const double ps_lo = round_per_share(s.per_share.low), ps_hi = round_per_share(s.per_share.high);
    const bool ok = near(ev_lo, 847, 1) && near(ev_hi, 920, 1) && near(eq_lo, 597, 1) && near(eq_hi, 670, 1) &&
                    near(ps_lo, 10.70, 0.05) && near(ps_hi, 12.00, 0.05) && ms < 1.0;
    verdict(2, "end-to-end valuation", ok,
            fmt("EV %.0f-%.0f, equity %.0f-%.0f, per share %.2f-%.2f, %.4f ms", ev_lo, ev_hi, eq_lo, eq_hi, ps_lo,
                ps_hi, ms));
}

// 3 ------------------------------------------------------------------------------
void calendarization() {
    const double v = financial::calendarize({{2006, 1.59}, {2007, 1.86}}, 9, 2006);
    const std::string printed = report::fixed(v, 2);
    const bool ok = v == 0.75 * 1.59 + 0.25 * 1.86 && std::abs(v - 1.6575) < 1e-12 && printed == "1.66";
    verdict(3, "calendarization", ok, fmt("%.10g printed %s", v, printed.c_str()));
}

// 4 ------------------------------------------------------------------------------
void trading_averages(const std::string& fixtures) {
    std::ifstream in(fixtures + "/trading_comps.csv");
    const auto a = comps::aggregate(comps::load_comps(in), "ev_to_ebitda_2005");
    const double mean = report::round_multiple(*a.mean), trimmed = report::round_multiple(*a.mean_excl_hi_lo);
    verdict(4, "trading comps averages", a.count == 6 && mean == 11.5 && trimmed == 11.0,
            fmt("n=%zu average %.1f, excluding high and low %.1f", a.count, mean, trimmed));
}

// 5 ------------------------------------------------------------------------------
void ltm_identity() {
    using financial::PeriodKind, financial::PeriodStatement;
    auto quarter = [](int y, unsigned m, std::map<std::string, double> items) {
        const Date start = make_date(y, m, 1);
        const Date end = Date{std::chrono::sys_days{add_months(start, 3)} - std::chrono::days{1}};
        return PeriodStatement{"Q", PeriodKind::Quarter, start, end, std::move(items)};
    };
    Rng rng(2024);
    double worst = 0.0;
    bool identity = true;
    for (int trial = 0; trial < 200; ++trial) {
        const char* keys[] = {"revenue", "ebitda", "ebit", "net_income"};
        std::map<std::string, double> fy;
        for (const char* k : keys) fy[k] = 1000.0 * rng.normal();
        const PeriodStatement year{"FY2005", PeriodKind::FiscalYear, make_date(2005, 1, 1), make_date(2005, 12, 31), fy};
        std::vector<PeriodStatement> prior, current;
        std::map<std::string, long double> expected(fy.begin(), fy.end());
        const int stubs = trial % 4;
        for (int q = 0; q < stubs; ++q) {
            std::map<std::string, double> p, c;
            for (const char* k : keys) {
                p[k] = 250.0 * rng.normal();
                c[k] = 250.0 * rng.normal();
                expected[k] += static_cast<long double>(c[k]) - p[k];
            }
            prior.push_back(quarter(2005, static_cast<unsigned>(1 + 3 * q), p));
            current.push_back(quarter(2006, static_cast<unsigned>(1 + 3 * q), c));
        }
        const auto out = financial::ltm(year, prior, current);
        for (const auto& [k, v] : expected)
            worst = std::max(worst, static_cast<double>(std::fabs(out.line_items.at(k) - v)));
        if (stubs == 0) identity = identity && out.line_items == fy && out.end_date == year.end_date;
    }
    verdict(5, "LTM identity", worst < 1e-9 && identity,
            fmt("max deviation from FY - prior + current %.3g over 200 statements; empty stubs identity %s", worst,
                identity ? "holds" : "broken"));
}

// 6 ------------------------------------------------------------------------------
void market_model_recovery() {
    const auto s = synthetic::market_model(6, 60, 0.01, 1.5, 1e-6);
    economics::MarketModelFit fit;
    Eigen::VectorXd ar;
    const double ms = median_ms([&] {
        fit = economics::fit_market_model(s);
        ar = economics::abnormal_returns(s, fit);
    });
    const double rel = std::abs(ar.sum()) / s.firm_returns.cwiseAbs().sum();
    const double da = std::abs(fit.alpha - 0.01), db = std::abs(fit.beta - 1.5);
    verdict(6, "market-model recovery", da < 1e-4 && db < 1e-4 && rel < 1e-9 && ms < 10.0,
            fmt("|alpha err| %.2e, |beta err| %.2e, AR sum %.2e relative, %.4f ms", da, db, rel, ms));
}

// 7 ------------------------------------------------------------------------------
void takeover_recovery() {
    int within = 0;
    double worst_z = 0.0, worst_rel = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto truth = synthetic::takeover(1000 + seed, 0.01);
        const auto fit = economics::fit_takeover_regression(truth.spec);
        bool all = true;
        for (Eigen::Index j = 0; j < truth.beta.size(); ++j) {
            const double z = std::abs(fit.coefficients(j) - truth.beta(j)) / fit.standard_errors(j);
            worst_z = std::max(worst_z, z);
            all = all && z <= 3.0;
        }
        within += all;

        const auto X = economics::design_matrix(truth.spec);
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(X.rows()));
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            for (Eigen::Index j = 0; j < X.cols(); ++j) rows[static_cast<std::size_t>(i)].push_back(X(i, j));
        const auto& y = truth.spec.response;
        const auto ref = oracle::normal_equations(rows, {y.data(), y.data() + y.size()});
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            const double r = ref[static_cast<std::size_t>(j)];
            worst_rel = std::max(worst_rel, std::abs(fit.coefficients(j) - r) / std::max(std::abs(r), 1e-12));
        }
    }
    verdict(7, "takeover-regression recovery", within == 20 && worst_rel < 1e-8,
            fmt("%d/20 seeds with every beta within 3 SE (max |z| %.2f); max relative gap to normal equations %.2e",
                within, worst_z, worst_rel));
}

// 8 ------------------------------------------------------------------------------
void slutsky_yule() {
    const auto start = Clock::now();
    waves::TrendModel noise{waves::TrendKind::Ideal, {0.0}, 1.0};
    noise.clamp_at_zero = false;
    noise.seed = 8;
    const auto raw = waves::generate_series(noise, 100000);
    const auto acf = waves::autocorrelation(waves::moving_average(raw, 10), 9);
    double worst = 0.0;
    for (Eigen::Index j = 1; j <= 9; ++j) worst = std::max(worst, std::abs(acf(j - 1) - (10.0 - j) / 10.0));
    const double raw_lag1 = waves::autocorrelation(raw, 1)(0);

    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    const auto mc = waves::slutsky_yule_experiment(noise, 2048, 10, 100, 8, threads);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool ok = worst <= 0.02 && std::abs(raw_lag1) <= 0.02 && mc.smoothed_more_concentrated >= 95 && secs < 5.0;
    verdict(8, "Slutsky-Yule effect", ok,
            fmt("max |acf - (k-j)/k| %.4f, raw lag-1 %.4f, smoothed more concentrated in %ld/100 runs, %.3f s", worst,
                raw_lag1, static_cast<long>(mc.smoothed_more_concentrated), secs));
}

// 9 ------------------------------------------------------------------------------
void dcf_identities() {
    Rng rng(9);
    bool zero_exact = true, decreasing = true;
    for (int trial = 0; trial < 500; ++trial) {
        Eigen::MatrixXd f(1 + trial % 5, 1 + trial % 9);
        for (Eigen::Index i = 0; i < f.rows(); ++i)
            for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = 0.01 + 100.0 * rng.uniform();
        double plain = 0.0;
        for (Eigen::Index j = 0; j < f.cols(); ++j)
            for (Eigen::Index i = 0; i < f.rows(); ++i) plain += f(i, j);
        zero_exact = zero_exact && economics::present_value(f, 0.0) == plain;
        double previous = economics::present_value(f, -0.5);
        for (double r = -0.45; r <= 1.0; r += 0.05) {
            const double v = economics::present_value(f, r);
            decreasing = decreasing && v < previous;
            previous = v;
        }
    }
    Eigen::MatrixXd grid(2, 2);
    grid << 100, 100, 50, 50;
    const double hand = 100 / 1.05 + 100 / 1.1025 + 50 / 1.05 + 50 / 1.1025;
    const double gap = std::abs(economics::present_value(grid, 0.05) - hand);
    verdict(9, "DCF identities", zero_exact && decreasing && gap < 1e-9,
            fmt("r=0 sum exact: %s; 2x2 grid %.9f (gap %.1e); strictly decreasing in r over 500 grids: %s",
                zero_exact ? "yes" : "no", hand, gap, decreasing ? "yes" : "no"));
}

// 10 -----------------------------------------------------------------------------
void ingestion(const std::string& fixtures) {
    std::ifstream in(fixtures + "/swiss2012_sample.csv");
    const auto parsed = deals::parse_deals(in);
    // stake, seller, seller country, value: 'x' absent, '.' present
    const char* pattern[] = {"....", ".xxx", ".xx.", ".xxx", ".xxx", "....", "....", "....", ".xxx", ".xxx",
                             ".xxx", "....", "....", "....", "xxx.", "x..x", ".xxx", "....", "....", "xxx."};
    bool absent_ok = parsed.records.size() == 20;
    double pfizer = 0.0;
    for (std::size_t i = 0; absent_ok && i < 20; ++i) {
        const auto& d = parsed.records[i];
        const std::string got{d.stake_pct ? '.' : 'x', d.seller ? '.' : 'x', d.seller_country ? '.' : 'x',
                              d.value_usdm ? '.' : 'x'};
        absent_ok = got == pattern[i];
        if (d.target == "Pfizer Nutrition" && d.value_usdm) pfizer = *d.value_usdm;
    }
    std::ostringstream once, twice;
    deals::write_deals(once, parsed.records);
    std::istringstream back(once.str());
    const auto reparsed = deals::parse_deals(back);
    deals::write_deals(twice, reparsed.records);
    const bool fixed_point = reparsed.records == parsed.records && once.str() == twice.str();
    verdict(10, "ingestion fidelity", absent_ok && pfizer == 11850.0 && fixed_point && parsed.diagnostics.empty(),
            fmt("%zu records, absent pattern %s, Pfizer Nutrition %.1f, round trip %s", parsed.records.size(),
                absent_ok ? "matches" : "differs", pfizer, fixed_point ? "fixed point" : "changed"));
}

// 11 -----------------------------------------------------------------------------
void determinism(const std::string& binary) {
    const char* variants[] = {
        "simulate-wave --seed 11",
        "simulate-wave --trend linear --sigma 2 --length 4096 --seed 11",
        "simulate-wave --trend quadratic --noise poisson --seed 5",
        "simulate-wave --trend exponential --length 1024 --runs 20 --seed 3",
        "--threads 1 simulate-wave --trend ideal --params 0 --no-clamp --runs 16 --seed 3",
        "--threads 8 simulate-wave --trend ideal --params 0 --no-clamp --runs 16 --seed 3",
    };
    int identical = 0;
    std::vector<std::string> outs;
    for (const char* v : variants) {
        const std::string cmd = binary + " " + v + " 2>&1";
        const std::string a = capture(cmd), b = capture(cmd);
        identical += !a.empty() && a.find("\"status\": \"ok\"") != std::string::npos && a == b;
        outs.push_back(a);
    }
    const bool threads_agree = outs[4] == outs[5];
    verdict(11, "simulate-wave determinism", identical == 6 && threads_agree,
            fmt("%d/6 invocations byte-identical on rerun; 1 vs 8 threads %s", identical,
                threads_agree ? "identical" : "differ"));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: dealdesk_acceptance <dealdesk binary> <fixtures dir>\n";
        return 2;
    }
    const std::string binary = argv[1], fixtures = argv[2];
    auto guarded = [](int id, auto&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            verdict(id, "criterion", false, std::string("threw ") + e.what());
        }
    };
    guarded(1, [] { transaction_aggregation(); });
    guarded(2, [&] { end_to_end_valuation(fixtures); });
    guarded(3, [] { calendarization(); });
    guarded(4, [&] { trading_averages(fixtures); });
    guarded(5, [] { ltm_identity(); });
    guarded(6, [] { market_model_recovery(); });
    guarded(7, [] { takeover_recovery(); });
    guarded(8, [] { slutsky_yule(); });
    guarded(9, [] { dcf_identities(); });
    guarded(10, [&] { ingestion(fixtures); });
    guarded(11, [&] { determinism(binary); });
    std::cout << (failures ? "FAIL" : "PASS") << " overall: " << 11 - failures << "/11 criteria\n";
    return failures ? 1 : 0;
}
