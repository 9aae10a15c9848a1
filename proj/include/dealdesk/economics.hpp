#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "dealdesk/date.hpp"
#include "dealdesk/error.hpp"
#include "dealdesk/least_squares.hpp"

namespace dealdesk::economics {

// --- merger success --------------------------------------------------------

struct MergerAssessment {
    double v_combined = 0.0;
    double v_acquirer = 0.0;
    double v_target = 0.0;
    double price_paid = 0.0;
};

struct MergerOutcome {
    bool success;
    /// v_combined - (v_acquirer + v_target - price_paid)
    double surplus;
};

MergerOutcome merger_success(const MergerAssessment& a);

// --- combined-firm DCF -----------------------------------------------------

/// Net cash flows of N business processes (rows) over T periods (columns).
template <typename Scalar = double>
struct CashFlowGrid {
    Matrix<Scalar> flows;
    Scalar discount_rate{0};
    std::string period_unit = "year";
};

/// (1+r)^-t for t = 1..periods.
template <typename Scalar>
Vector<Scalar> discount_factors(Eigen::Index periods, Scalar rate) {
    if (!(Scalar(1) + rate > Scalar(0)))
        throw Error(ErrorKind::DegenerateRate, "discount rate must exceed -1");
    Vector<Scalar> d(periods);
    const Scalar growth = Scalar(1) + rate;
    Scalar factor{1};
    for (Eigen::Index t = 0; t < periods; ++t) {
        factor /= growth;
        d(t) = factor;
    }
    return d;
}

/// Sum over processes and periods of NCF / (1+r)^t, with the first column at t = 1.
/// Terms are added in column-major order, so r = 0 gives the plain running sum.
template <typename Derived>
typename Derived::Scalar present_value(const Eigen::MatrixBase<Derived>& flows, typename Derived::Scalar rate) {
    if (flows.rows() < 1 || flows.cols() < 1)
        throw Error(ErrorKind::InvalidArgument, "cash flow grid needs at least one process and one period");
    // One running sum, period by period; at r = 0 every factor is exactly 1.
    const auto d = discount_factors(flows.cols(), rate);
    typename Derived::Scalar total{0};
    for (Eigen::Index t = 0; t < flows.cols(); ++t)
        for (Eigen::Index i = 0; i < flows.rows(); ++i) total += flows(i, t) * d(t);
    return total;
}

template <typename Scalar>
Scalar combined_firm_value(const CashFlowGrid<Scalar>& grid) {
    return present_value(grid.flows, grid.discount_rate);
}

// --- market model / event study --------------------------------------------

struct ReturnSeries {
    std::vector<Date> dates;
    Eigen::VectorXd firm_returns;
    Eigen::VectorXd market_returns;

    Eigen::Index size() const noexcept { return firm_returns.size(); }
    /// Half-open index range [begin, end).
    ReturnSeries slice(Eigen::Index begin, Eigen::Index end) const;
};

/// Equal lengths, finite values, strictly increasing dates (when dates are given).
void validate(const ReturnSeries& s);

struct MarketModelFit {
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_standard_error = 0.0;
    double beta_standard_error = 0.0;
    Eigen::VectorXd residuals;
    /// In [0, 1]; 0 when the firm series has no variance to explain.
    double r_squared = 0.0;
};

/// OLS of firm returns on market returns with an intercept (Jensen's alpha).
MarketModelFit fit_market_model(const ReturnSeries& s);

/// R_firm - (alpha + beta R_market), elementwise.
Eigen::VectorXd abnormal_returns(const ReturnSeries& s, const MarketModelFit& fit);

struct EventWindows {
    Eigen::Index estimation_begin = 0;
    Eigen::Index estimation_end = 0;  ///< exclusive
    Eigen::Index event_begin = 0;
    Eigen::Index event_end = 0;  ///< exclusive
};

/// Default layout: `estimation_length` periods ending just before
/// event_index - half_width, then the event window event_index +/- half_width.
EventWindows default_windows(Eigen::Index event_index, Eigen::Index estimation_length = 60,
                             Eigen::Index half_width = 1);

struct EventStudy {
    EventWindows windows;
    MarketModelFit fit;
    std::vector<Date> event_dates;
    Eigen::VectorXd event_abnormal_returns;
};

EventStudy run_event_study(const ReturnSeries& s, const EventWindows& windows);

// --- takeover-frequency regression -----------------------------------------

/// Frequency of M&A in country i, sector j regressed on institutional (I),
/// sectoral (S) and technological (TEC) variables plus TEC x regime-dummy
/// (TR) interactions.
struct TakeoverRegressionSpec {
    Eigen::VectorXd response;
    Eigen::MatrixXd institutional;  ///< 1..5 columns
    Eigen::MatrixXd sectoral;       ///< 1..2 columns
    Eigen::MatrixXd technological;  ///< 1..2 columns
    Eigen::MatrixXd regime_dummies; ///< 0..technological.cols() binary columns; column z pairs with TEC column z
    bool include_intercept = true;

    std::vector<std::string> institutional_names;
    std::vector<std::string> sectoral_names;
    std::vector<std::string> technological_names;
    std::vector<std::string> regime_names;
};

void validate(const TakeoverRegressionSpec& spec);

/// intercept | I | S | TEC | TEC_z * TR_z
Eigen::MatrixXd design_matrix(const TakeoverRegressionSpec& spec);
std::vector<std::string> design_column_names(const TakeoverRegressionSpec& spec);

struct Coefficient {
    std::string name;
    double estimate;
    double standard_error;
};

struct TakeoverFit {
    std::optional<Coefficient> intercept;
    std::vector<Coefficient> institutional;
    std::vector<Coefficient> sectoral;
    std::vector<Coefficient> technological;
    std::vector<Coefficient> interactions;
    Eigen::VectorXd coefficients;  ///< in design-column order
    Eigen::VectorXd standard_errors;
    double sigma = 0.0;
    double r_squared = 0.0;
    Eigen::Index observations = 0;
};

TakeoverFit fit_takeover_regression(const TakeoverRegressionSpec& spec);

// --- CSV -------------------------------------------------------------------

/// Columns date, firm_return, market_return.
ReturnSeries load_returns(std::istream& in);

/// Leading `# role = col, col` lines (response, institutional, sectoral,
/// technological, regime, intercept) followed by a CSV table.
TakeoverRegressionSpec load_takeover_spec(std::istream& in);

}  // namespace dealdesk::economics
