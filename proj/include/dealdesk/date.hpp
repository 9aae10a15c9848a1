#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace dealdesk {

using Date = std::chrono::year_month_day;

/// Parses YYYY-MM-DD; returns nullopt on malformed or impossible dates.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& d);

inline Date make_date(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline long days_between(const Date& a, const Date& b) {
    return (std::chrono::sys_days{b} - std::chrono::sys_days{a}).count();
}

/// Shifts by whole months, clamping the day to the end of the target month.
Date add_months(const Date& d, int months);

}  // namespace dealdesk
