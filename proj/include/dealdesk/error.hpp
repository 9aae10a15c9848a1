#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dealdesk {

enum class ErrorKind {
    InvalidArgument,
    MissingInput,
    NonPositiveShares,
    MismatchedStubs,
    MissingFiscalYear,
    MetricAbsent,
    NonPositiveMetric,
    DegenerateRate,
    DegenerateRegressor,
    TooShort,
    TooFewRows,
    RankDeficient,
    WindowTooLarge,
    ZeroVariance,
    IllConditioned,
    HeaderMismatch,
    EmptyAfterFilter,
    ParseError,
    ConfigInvalid,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::MissingInput: return "MissingInput";
        case ErrorKind::NonPositiveShares: return "NonPositiveShares";
        case ErrorKind::MismatchedStubs: return "MismatchedStubs";
        case ErrorKind::MissingFiscalYear: return "MissingFiscalYear";
        case ErrorKind::MetricAbsent: return "MetricAbsent";
        case ErrorKind::NonPositiveMetric: return "NonPositiveMetric";
        case ErrorKind::DegenerateRate: return "DegenerateRate";
        case ErrorKind::DegenerateRegressor: return "DegenerateRegressor";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::TooFewRows: return "TooFewRows";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::WindowTooLarge: return "WindowTooLarge";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::HeaderMismatch: return "HeaderMismatch";
        case ErrorKind::EmptyAfterFilter: return "EmptyAfterFilter";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace dealdesk
