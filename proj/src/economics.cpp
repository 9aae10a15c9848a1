#include "dealdesk/economics.hpp"

#include <algorithm>

namespace dealdesk::economics {

MergerOutcome merger_success(const MergerAssessment& a) {
    if (!std::isfinite(a.v_combined) || !std::isfinite(a.v_acquirer) || !std::isfinite(a.v_target) ||
        !std::isfinite(a.price_paid))
        throw Error(ErrorKind::InvalidArgument, "merger assessment values must be finite");
    const double surplus = a.v_combined - (a.v_acquirer + a.v_target - a.price_paid);
    return {surplus >= 0.0, surplus};
}

// --- market model ----------------------------------------------------------

ReturnSeries ReturnSeries::slice(Eigen::Index begin, Eigen::Index end) const {
    if (begin < 0 || end > size() || begin >= end)
        throw Error(ErrorKind::InvalidArgument, "window [" + std::to_string(begin) + ", " + std::to_string(end) +
                                                    ") is outside the series of length " + std::to_string(size()));
    ReturnSeries out;
    if (!dates.empty()) out.dates.assign(dates.begin() + begin, dates.begin() + end);
    out.firm_returns = firm_returns.segment(begin, end - begin);
    out.market_returns = market_returns.segment(begin, end - begin);
    return out;
}

void validate(const ReturnSeries& s) {
    if (s.firm_returns.size() != s.market_returns.size())
        throw Error(ErrorKind::InvalidArgument, "firm and market return series differ in length");
    if (!s.dates.empty() && static_cast<Eigen::Index>(s.dates.size()) != s.size())
        throw Error(ErrorKind::InvalidArgument, "dates and returns differ in length");
    if (!s.firm_returns.allFinite() || !s.market_returns.allFinite())
        throw Error(ErrorKind::InvalidArgument, "returns must be finite");
    for (std::size_t i = 1; i < s.dates.size(); ++i)
        if (!(std::chrono::sys_days{s.dates[i - 1]} < std::chrono::sys_days{s.dates[i]}))
            throw Error(ErrorKind::InvalidArgument, "dates must be strictly increasing");
}

MarketModelFit fit_market_model(const ReturnSeries& s) {
    validate(s);
    const Eigen::Index n = s.size();
    if (n < 3) throw Error(ErrorKind::TooShort, "market model needs at least 3 observations");
    const auto& m = s.market_returns;
    if ((m.array() == m(0)).all())
        throw Error(ErrorKind::DegenerateRegressor, "market returns are constant; beta is not identified");

    Eigen::MatrixXd X(n, 2);
    X.col(0).setOnes();
    X.col(1) = m;
    const auto ls = least_squares(X, s.firm_returns, {"alpha", "beta"});

    MarketModelFit fit;
    fit.alpha = ls.coefficients(0);
    fit.beta = ls.coefficients(1);
    fit.alpha_standard_error = ls.standard_errors(0);
    fit.beta_standard_error = ls.standard_errors(1);
    fit.residuals = ls.residuals;
    const double tss = (s.firm_returns.array() - s.firm_returns.mean()).square().sum();
    fit.r_squared = tss > 0.0 ? std::clamp(1.0 - ls.residual_sum_of_squares / tss, 0.0, 1.0) : 0.0;
    return fit;
}

Eigen::VectorXd abnormal_returns(const ReturnSeries& s, const MarketModelFit& fit) {
    validate(s);
    if (!std::isfinite(fit.alpha) || !std::isfinite(fit.beta))
        throw Error(ErrorKind::InvalidArgument, "market model fit is not finite");
    return s.firm_returns - (fit.alpha + fit.beta * s.market_returns.array()).matrix();
}

EventWindows default_windows(Eigen::Index event_index, Eigen::Index estimation_length, Eigen::Index half_width) {
    EventWindows w;
    w.event_begin = event_index - half_width;
    w.event_end = event_index + half_width + 1;
    w.estimation_end = w.event_begin;
    w.estimation_begin = w.estimation_end - estimation_length;
    return w;
}

EventStudy run_event_study(const ReturnSeries& s, const EventWindows& windows) {
    validate(s);
    if (windows.estimation_end > windows.event_begin && windows.event_end > windows.estimation_begin)
        throw Error(ErrorKind::InvalidArgument, "estimation and event windows overlap");
    EventStudy out;
    out.windows = windows;
    out.fit = fit_market_model(s.slice(windows.estimation_begin, windows.estimation_end));
    const ReturnSeries event = s.slice(windows.event_begin, windows.event_end);
    out.event_dates = event.dates;
    out.event_abnormal_returns = abnormal_returns(event, out.fit);
    return out;
}

// --- takeover regression ---------------------------------------------------

namespace {

void require_cols(const Eigen::MatrixXd& m, Eigen::Index lo, Eigen::Index hi, const char* what) {
    if (m.cols() < lo || m.cols() > hi)
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " must have " + std::to_string(lo) + ".." +
                                                    std::to_string(hi) + " columns, got " + std::to_string(m.cols()));
}

std::string name_or(const std::vector<std::string>& names, Eigen::Index i, const std::string& fallback) {
    return static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)] : fallback;
}

}  // namespace

void validate(const TakeoverRegressionSpec& spec) {
    require_cols(spec.institutional, 1, 5, "institutional variables");
    require_cols(spec.sectoral, 1, 2, "sectoral variables");
    require_cols(spec.technological, 1, 2, "technological variables");
    require_cols(spec.regime_dummies, 0, spec.technological.cols(), "regime dummies");
    const Eigen::Index n = spec.response.size();
    for (const auto* m : {&spec.institutional, &spec.sectoral, &spec.technological})
        if (m->rows() != n) throw Error(ErrorKind::InvalidArgument, "all variable blocks must share the response's row count");
    if (spec.regime_dummies.cols() > 0 && spec.regime_dummies.rows() != n)
        throw Error(ErrorKind::InvalidArgument, "regime dummies must share the response's row count");
    if (!((spec.regime_dummies.array() == 0.0) || (spec.regime_dummies.array() == 1.0)).all())
        throw Error(ErrorKind::InvalidArgument, "regime dummies must be 0 or 1");
}

Eigen::MatrixXd design_matrix(const TakeoverRegressionSpec& spec) {
    validate(spec);
    const Eigen::Index n = spec.response.size();
    const Eigen::Index k0 = spec.include_intercept ? 1 : 0;
    const Eigen::Index ki = spec.institutional.cols(), ks = spec.sectoral.cols(), kt = spec.technological.cols(),
                       kz = spec.regime_dummies.cols();
    Eigen::MatrixXd X(n, k0 + ki + ks + kt + kz);
    Eigen::Index c = 0;
    if (spec.include_intercept) X.col(c++).setOnes();
    X.middleCols(c, ki) = spec.institutional;
    c += ki;
    X.middleCols(c, ks) = spec.sectoral;
    c += ks;
    X.middleCols(c, kt) = spec.technological;
    c += kt;
    for (Eigen::Index z = 0; z < kz; ++z) X.col(c++) = spec.technological.col(z).cwiseProduct(spec.regime_dummies.col(z));
    return X;
}

std::vector<std::string> design_column_names(const TakeoverRegressionSpec& spec) {
    std::vector<std::string> names;
    if (spec.include_intercept) names.emplace_back("intercept");
    for (Eigen::Index i = 0; i < spec.institutional.cols(); ++i)
        names.push_back(name_or(spec.institutional_names, i, "I" + std::to_string(i + 1)));
    for (Eigen::Index i = 0; i < spec.sectoral.cols(); ++i)
        names.push_back(name_or(spec.sectoral_names, i, "S" + std::to_string(i + 1)));
    for (Eigen::Index i = 0; i < spec.technological.cols(); ++i)
        names.push_back(name_or(spec.technological_names, i, "TEC" + std::to_string(i + 1)));
    for (Eigen::Index z = 0; z < spec.regime_dummies.cols(); ++z)
        names.push_back(name_or(spec.technological_names, z, "TEC" + std::to_string(z + 1)) + "*" +
                        name_or(spec.regime_names, z, "TR" + std::to_string(z + 1)));
    return names;
}

TakeoverFit fit_takeover_regression(const TakeoverRegressionSpec& spec) {
    const Eigen::MatrixXd X = design_matrix(spec);
    const auto names = design_column_names(spec);
    const auto ls = least_squares(X, spec.response, names);

    TakeoverFit fit;
    fit.coefficients = ls.coefficients;
    fit.standard_errors = ls.standard_errors;
    fit.sigma = std::sqrt(ls.sigma2);
    fit.observations = X.rows();
    const double tss = (spec.response.array() - spec.response.mean()).square().sum();
    fit.r_squared = tss > 0.0 ? std::clamp(1.0 - ls.residual_sum_of_squares / tss, 0.0, 1.0) : 0.0;

    Eigen::Index c = 0;
    auto take = [&](std::vector<Coefficient>& into, Eigen::Index count) {
        for (Eigen::Index i = 0; i < count; ++i, ++c)
            into.push_back({names[static_cast<std::size_t>(c)], ls.coefficients(c), ls.standard_errors(c)});
    };
    if (spec.include_intercept) {
        fit.intercept = Coefficient{names[0], ls.coefficients(0), ls.standard_errors(0)};
        ++c;
    }
    take(fit.institutional, spec.institutional.cols());
    take(fit.sectoral, spec.sectoral.cols());
    take(fit.technological, spec.technological.cols());
    take(fit.interactions, spec.regime_dummies.cols());
    return fit;
}

}  // namespace dealdesk::economics
