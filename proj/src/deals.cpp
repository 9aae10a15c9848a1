#include "dealdesk/deals.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>

#include "dealdesk/csv.hpp"
#include "dealdesk/error.hpp"

namespace dealdesk::deals {

namespace {

constexpr std::array<std::string_view, 12> kMonths{"jan", "feb", "mar", "apr", "may", "jun",
                                                   "jul", "aug", "sep", "oct", "nov", "dec"};
constexpr std::array<std::string_view, 12> kMonthLabels{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                        "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool is_absent(const std::string& cell) {
    std::string lower;
    for (unsigned char c : cell) lower.push_back(static_cast<char>(std::tolower(c)));
    return lower.empty() || lower == "-" || lower == "n/a" || lower == "na" || lower == "n.a." || lower == "–";
}

std::optional<std::string> optional_text(const std::string& cell) {
    if (is_absent(cell)) return std::nullopt;
    return cell;
}

}  // namespace

std::optional<YearMonth> parse_announced(std::string_view text) {
    const std::string t = csv::trim(text);
    int year = 0, month = 0;
    if (t.size() >= 7 && t[4] == '-' && parse_int(std::string_view(t).substr(0, 4), year) &&
        parse_int(std::string_view(t).substr(5, 2), month)) {
        if (t.size() != 7 && (t.size() != 10 || t[7] != '-')) return std::nullopt;
        if (month < 1 || month > 12) return std::nullopt;
        return YearMonth{year, static_cast<unsigned>(month)};
    }
    const auto sp = t.find_first_of(" \t");
    if (sp == std::string::npos) return std::nullopt;
    std::string name;
    for (unsigned char c : t.substr(0, sp)) name.push_back(static_cast<char>(std::tolower(c)));
    if (name.size() < 3) return std::nullopt;
    for (std::size_t m = 0; m < kMonths.size(); ++m) {
        if (name.compare(0, 3, kMonths[m]) != 0) continue;
        if (!parse_int(csv::trim(t.substr(sp + 1)), year) || year < 1000) return std::nullopt;
        return YearMonth{year, static_cast<unsigned>(m + 1)};
    }
    return std::nullopt;
}

std::string format_announced(const YearMonth& ym) {
    return std::string(kMonthLabels[ym.month - 1]) + " " + std::to_string(ym.year);
}

ParseResult parse_deals(std::istream& in, const std::optional<std::string>& sector_label) {
    const csv::Table table = csv::read_table(in);
    std::array<std::size_t, std::size(kDealColumns)> col{};
    std::string missing;
    for (std::size_t i = 0; i < col.size(); ++i) {
        auto c = table.column(kDealColumns[i]);
        if (!c) {
            missing += (missing.empty() ? "" : ", ") + std::string(kDealColumns[i]);
            continue;
        }
        col[i] = *c;
    }
    if (!missing.empty()) throw Error(ErrorKind::HeaderMismatch, "deal table is missing columns: " + missing);
    const auto sector_col = table.column("sector");

    ParseResult result;
    std::map<std::size_t, std::size_t> first_line_of;  // index into records -> source line
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.lines[r];
        auto cell = [&](std::size_t i) { return col[i] < row.size() ? csv::trim(row[col[i]]) : std::string(); };
        auto fail = [&](std::string msg) { result.diagnostics.push_back({line, std::move(msg)}); };

        DealRecord d;
        const auto announced = parse_announced(cell(0));
        if (!announced) {
            fail("unparseable announced_date '" + cell(0) + "'");
            continue;
        }
        d.announced = *announced;

        d.target = cell(1);
        d.target_country = cell(3);
        d.bidder = cell(4);
        d.bidder_country = cell(5);
        if (is_absent(d.target) || is_absent(d.bidder)) {
            fail("target and bidder are required");
            continue;
        }
        if (is_absent(d.target_country) || is_absent(d.bidder_country)) {
            fail("target_country and bidder_country are required");
            continue;
        }
        d.seller = optional_text(cell(6));
        d.seller_country = optional_text(cell(7));

        try {
            std::string stake = cell(2);
            std::erase(stake, '%');
            if (!is_absent(stake)) {
                double v = *csv::parse_optional_number(stake);
                if (v > 1.0) v /= 100.0;
                if (!(v > 0.0 && v <= 1.0)) {
                    fail("stake '" + cell(2) + "' is outside (0, 100]");
                    continue;
                }
                d.stake_pct = v;
            }
            const std::string value = cell(8);
            if (!is_absent(value)) {
                const double v = *csv::parse_optional_number(value);
                if (!(v > 0.0)) {
                    fail("value_usdm '" + value + "' must be > 0");
                    continue;
                }
                d.value_usdm = v;
            }
        } catch (const Error& e) {
            fail(e.detail());
            continue;
        }

        if (sector_label)
            d.sector = sector_label;
        else if (sector_col && *sector_col < row.size())
            d.sector = optional_text(csv::trim(row[*sector_col]));

        for (std::size_t k = 0; k < result.records.size(); ++k) {
            if (result.records[k] == d) {
                result.warnings.push_back(
                    {line, "duplicate of the row on line " + std::to_string(first_line_of[k]) + " (kept)"});
                break;
            }
        }
        first_line_of[result.records.size()] = line;
        result.records.push_back(std::move(d));
    }
    return result;
}

void write_deals(std::ostream& out, std::span<const DealRecord> deals) {
    csv::Row header(std::begin(kDealColumns), std::end(kDealColumns));
    header.emplace_back("sector");
    csv::write_row(out, header);
    auto text = [](const std::optional<std::string>& s) { return s.value_or("-"); };
    auto number = [](const std::optional<double>& v) { return v ? csv::format_number(*v) : std::string("n/a"); };
    for (const auto& d : deals) {
        csv::write_row(out, {format_announced(d.announced), d.target, d.stake_pct ? csv::format_number(*d.stake_pct) : "-",
                             d.target_country, d.bidder, d.bidder_country, text(d.seller), text(d.seller_country),
                             number(d.value_usdm), d.sector.value_or("")});
    }
}

std::string_view to_string(Bucketing b) noexcept {
    switch (b) {
        case Bucketing::Month: return "month";
        case Bucketing::Quarter: return "quarter";
        case Bucketing::Year: return "year";
    }
    return "";
}

std::optional<Bucketing> parse_bucketing(std::string_view text) {
    for (Bucketing b : {Bucketing::Month, Bucketing::Quarter, Bucketing::Year})
        if (text == to_string(b)) return b;
    return std::nullopt;
}

namespace {

long bucket_of(const YearMonth& ym, Bucketing b) {
    switch (b) {
        case Bucketing::Month: return ym.year * 12L + static_cast<long>(ym.month) - 1;
        case Bucketing::Quarter: return ym.year * 4L + (static_cast<long>(ym.month) - 1) / 3;
        case Bucketing::Year: return ym.year;
    }
    return 0;
}

std::string bucket_label(long key, Bucketing b) {
    char buf[32];
    switch (b) {
        case Bucketing::Month:
            std::snprintf(buf, sizeof buf, "%04ld-%02ld", key / 12, key % 12 + 1);
            break;
        case Bucketing::Quarter:
            std::snprintf(buf, sizeof buf, "%04ld-Q%ld", key / 4, key % 4 + 1);
            break;
        case Bucketing::Year:
            std::snprintf(buf, sizeof buf, "%04ld", key);
            break;
    }
    return buf;
}

}  // namespace

DealSeries aggregate(std::span<const DealRecord> deals, Bucketing bucketing, const DealFilter& filter) {
    std::vector<const DealRecord*> kept;
    for (const auto& d : deals)
        if (!filter || filter(d)) kept.push_back(&d);
    if (kept.empty()) throw Error(ErrorKind::EmptyAfterFilter, "no deals remain after filtering");

    long lo = bucket_of(kept.front()->announced, bucketing), hi = lo;
    for (const auto* d : kept) {
        const long b = bucket_of(d->announced, bucketing);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    const auto n = static_cast<Eigen::Index>(hi - lo + 1);

    DealSeries s;
    s.bucketing = bucketing;
    s.counts.values = Eigen::VectorXd::Zero(n);
    s.total_value.values = Eigen::VectorXd::Zero(n);
    s.value_observations.assign(static_cast<std::size_t>(n), 0);
    for (long k = lo; k <= hi; ++k) s.counts.timestamps.push_back(bucket_label(k, bucketing));
    s.total_value.timestamps = s.counts.timestamps;
    for (const auto* d : kept) {
        const auto i = static_cast<Eigen::Index>(bucket_of(d->announced, bucketing) - lo);
        s.counts.values(i) += 1.0;
        if (d->value_usdm) {
            s.total_value.values(i) += *d->value_usdm;
            ++s.value_observations[static_cast<std::size_t>(i)];
        } else {
            ++s.excluded_values;
        }
    }
    return s;
}

}  // namespace dealdesk::deals
