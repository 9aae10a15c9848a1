#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <string>

#include "dealdesk/comps.hpp"
#include "dealdesk/deals.hpp"
#include "dealdesk/economics.hpp"
#include "dealdesk/waves.hpp"

namespace dealdesk::report {

using Json = nlohmann::ordered_json;

// --- display rounding --------------------------------------------------------
//
// Rounding works on the shortest decimal form of a double, so 11.05 is treated
// as the decimal 11.05 and not as 11.0499999999999998.

enum class Tie { HalfEven, HalfAwayFromZero };

double round_decimal(double x, int decimals, Tie tie);

/// Multiples: 0.1x, ties to even (11.05 prints 11.0).
double round_multiple(double x);
/// Currency millions: whole units, ties away from zero (846.5 prints 847).
double round_millions(double x);
/// Per-share values: down to the $0.05 step (10.718 prints 10.70, 12.029 prints 12.00).
double round_per_share(double x);

/// Fixed notation with `decimals` places, after rounding ties away from zero.
std::string fixed(double x, int decimals);

// --- JSON ----------------------------------------------------------------------

Json to_json(const comps::Aggregate& a);
Json to_json(const comps::ValuationSummary& v);
Json to_json(const economics::EventStudy& study, const economics::ReturnSeries& series);
Json to_json(const economics::TakeoverFit& fit);
Json to_json(const waves::WaveDiagnostics& d, const waves::CountSeries& raw);
Json to_json(const waves::SlutskyYuleSummary& s);
Json to_json(const deals::ParseResult& parsed, const deals::DealSeries* series);

// --- aligned text ------------------------------------------------------------

/// Count, mean, median and mean excluding high and low for every metric.
void write_comparables_text(std::ostream& out, const comps::CompSet& comps, std::string_view title);
/// One line per method row, each method's enterprise range,
/// then summary, net debt, equity and per-share values.
void write_valuation_text(std::ostream& out, const comps::ValuationSummary& v);
void write_event_study_text(std::ostream& out, const economics::EventStudy& study);
void write_regression_text(std::ostream& out, const economics::TakeoverFit& fit);
void write_waves_text(std::ostream& out, const waves::WaveDiagnostics& d, const waves::CountSeries& raw);
void write_slutsky_yule_text(std::ostream& out, const waves::SlutskyYuleSummary& s);
void write_ingest_text(std::ostream& out, const deals::ParseResult& parsed, const deals::DealSeries* series);

}  // namespace dealdesk::report
