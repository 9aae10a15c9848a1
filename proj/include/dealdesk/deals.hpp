#pragma once

#include <compare>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dealdesk/waves.hpp"

namespace dealdesk::deals {

struct YearMonth {
    int year = 0;
    unsigned month = 1;

    auto operator<=>(const YearMonth&) const = default;
};

/// "Jan 2012", "January 2012", "2012-01" or "2012-01-31".
std::optional<YearMonth> parse_announced(std::string_view text);
/// "Jan 2012"
std::string format_announced(const YearMonth& ym);

/// One announced transaction, as listed in a deal table.
struct DealRecord {
    YearMonth announced;
    std::string target;
    std::optional<double> stake_pct;  ///< fraction in (0, 1]
    std::string target_country;
    std::string bidder;
    std::string bidder_country;
    std::optional<std::string> seller;
    std::optional<std::string> seller_country;
    std::optional<double> value_usdm;
    std::optional<std::string> sector;

    bool operator==(const DealRecord&) const = default;
};

struct Diagnostic {
    std::size_t line = 0;
    std::string message;
};

struct ParseResult {
    std::vector<DealRecord> records;
    /// Malformed rows, which are not in `records`.
    std::vector<Diagnostic> diagnostics;
    /// Suspicious but retained rows, e.g. exact duplicates.
    std::vector<Diagnostic> warnings;
};

inline constexpr std::string_view kDealColumns[] = {"announced_date", "target", "stake",
                                                    "target_country", "bidder", "bidder_country",
                                                    "seller", "seller_country", "value_usdm"};

/// Parses a deal table. Headers are matched by name after normalization, so
/// both "announced_date" and "Announced date" work; a missing column raises
/// Error(HeaderMismatch). "n/a", "-" and blank cells are absent. Percent
/// stakes (values above 1) are scaled to fractions. `sector_label` is stamped
/// on every record.
ParseResult parse_deals(std::istream& in, const std::optional<std::string>& sector_label = std::nullopt);

/// Writes the canonical CSV form read by parse_deals (plus a sector column).
void write_deals(std::ostream& out, std::span<const DealRecord> deals);

enum class Bucketing { Month, Quarter, Year };

std::string_view to_string(Bucketing b) noexcept;
std::optional<Bucketing> parse_bucketing(std::string_view text);

struct DealSeries {
    Bucketing bucketing = Bucketing::Month;
    waves::CountSeries counts;
    /// Sum of reported values per bucket; deals without a value are skipped.
    waves::CountSeries total_value;
    /// Deals per bucket that contributed a value.
    std::vector<std::size_t> value_observations;
    std::size_t excluded_values = 0;
};

using DealFilter = std::function<bool(const DealRecord&)>;

/// Buckets deals by announcement period, zero-filling every bucket between
/// the first and last. Throws Error(EmptyAfterFilter) when nothing is left.
DealSeries aggregate(std::span<const DealRecord> deals, Bucketing bucketing, const DealFilter& filter = {});

}  // namespace dealdesk::deals
