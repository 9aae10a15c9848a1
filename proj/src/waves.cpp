#include "dealdesk/waves.hpp"

#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <complex>
#include <thread>

#include "dealdesk/csv.hpp"
#include "dealdesk/error.hpp"
#include "dealdesk/random.hpp"

namespace dealdesk::waves {

void validate(const CountSeries& s, bool counts) {
    if (!s.timestamps.empty() && static_cast<Index>(s.timestamps.size()) != s.size())
        throw Error(ErrorKind::InvalidArgument, "timestamps and values differ in length");
    if (!s.values.allFinite()) throw Error(ErrorKind::InvalidArgument, "series values must be finite");
    if (counts && (s.values.array() < 0.0).any()) throw Error(ErrorKind::InvalidArgument, "counts must be >= 0");
}

std::vector<std::string> index_labels(Index n) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Index i = 1; i <= n; ++i) out.push_back(std::to_string(i));
    return out;
}

// --- generation ------------------------------------------------------------

void validate(const TrendModel& model) {
    static constexpr std::size_t kArity[] = {1, 2, 3, 2};
    const auto need = kArity[static_cast<int>(model.kind)];
    if (model.parameters.size() != need)
        throw Error(ErrorKind::InvalidArgument, "trend model needs " + std::to_string(need) + " parameters, got " +
                                                    std::to_string(model.parameters.size()));
    for (double p : model.parameters)
        if (!std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "trend parameters must be finite");
    if (!(model.noise_sigma >= 0.0) || !std::isfinite(model.noise_sigma))
        throw Error(ErrorKind::InvalidArgument, "noise_sigma must be finite and >= 0");
}

double trend_value(const TrendModel& model, double t) {
    const auto& p = model.parameters;
    switch (model.kind) {
        case TrendKind::Ideal: return p[0];
        case TrendKind::Linear: return p[0] * t + p[1];
        case TrendKind::Quadratic: return (p[0] * t + p[1]) * t + p[2];
        case TrendKind::Exponential: return p[0] * std::exp(p[1] * t);
    }
    return 0.0;
}

CountSeries generate_series(const TrendModel& model, Index length) {
    validate(model);
    if (length < 2) throw Error(ErrorKind::TooShort, "series length must be >= 2");
    Rng rng(model.seed);
    CountSeries s;
    s.timestamps = index_labels(length);
    s.values.resize(length);
    for (Index i = 0; i < length; ++i) {
        const double base = trend_value(model, static_cast<double>(i + 1));
        double v;
        if (model.noise == NoiseKind::Poisson)
            v = static_cast<double>(rng.poisson(std::max(base, 0.0)));
        else
            v = model.noise_sigma > 0.0 ? base + model.noise_sigma * rng.normal() : base;
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "trend overflowed at t = " + std::to_string(i + 1));
        s.values(i) = model.clamp_at_zero ? std::max(v, 0.0) : v;
    }
    return s;
}

// --- smoothing and diagnostics ---------------------------------------------

CountSeries moving_average(const CountSeries& s, Index window) {
    validate(s);
    const Index n = s.size();
    if (window < 1) throw Error(ErrorKind::InvalidArgument, "window must be >= 1");
    if (window > n)
        throw Error(ErrorKind::WindowTooLarge,
                    "window " + std::to_string(window) + " exceeds series length " + std::to_string(n));
    CountSeries out;
    const Index m = n - window + 1;
    out.values.resize(m);
    for (Index i = 0; i < m; ++i) out.values(i) = s.values.segment(i, window).mean();
    const auto labels = s.timestamps.empty() ? index_labels(n) : s.timestamps;
    out.timestamps.assign(labels.begin() + (window - 1), labels.end());
    return out;
}

namespace {

Eigen::VectorXd centered_or_throw(const Eigen::VectorXd& v) {
    if (v.size() == 0 || v.maxCoeff() == v.minCoeff())
        throw Error(ErrorKind::ZeroVariance, "series is constant");
    Eigen::VectorXd d = v.array() - v.mean();
    if (d.squaredNorm() == 0.0) throw Error(ErrorKind::ZeroVariance, "series is constant");
    return d;
}

}  // namespace

Eigen::VectorXd autocorrelation(const CountSeries& s, Index max_lag) {
    validate(s);
    const Index n = s.size();
    if (max_lag < 1 || max_lag >= n)
        throw Error(ErrorKind::InvalidArgument, "max_lag must satisfy 1 <= L < length");
    const Eigen::VectorXd d = centered_or_throw(s.values);
    const double denom = d.squaredNorm();
    Eigen::VectorXd r(max_lag);
    for (Index j = 1; j <= max_lag; ++j) r(j - 1) = d.head(n - j).dot(d.tail(n - j)) / denom;
    return r;
}

Eigen::VectorXd detrend_linear(const Eigen::VectorXd& values) {
    const Index n = values.size();
    if (n < 2) return values.array() - values.mean();
    Eigen::MatrixXd X(n, 2);
    X.col(0).setOnes();
    X.col(1) = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
    const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(values);
    return values - X * beta;
}

Eigen::VectorXd periodogram(const Eigen::VectorXd& values) {
    const Index n = values.size();
    Eigen::FFT<double> fft;
    std::vector<double> in(values.data(), values.data() + n);
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, in);
    const Index half = n / 2;
    Eigen::VectorXd p(half);
    for (Index k = 1; k <= half; ++k) p(k - 1) = std::norm(spectrum[static_cast<std::size_t>(k)]);
    return p;
}

PeriodEstimate dominant_period(const CountSeries& s) {
    validate(s);
    const Index n = s.size();
    if (n < 8) throw Error(ErrorKind::TooShort, "dominant period needs at least 8 observations");
    centered_or_throw(s.values);
    const Eigen::VectorXd p = periodogram(detrend_linear(s.values));
    const double total = p.sum();
    if (!(total > 0.0)) throw Error(ErrorKind::ZeroVariance, "series has no variation around its linear trend");
    Index k = 0;
    const double peak = p.maxCoeff(&k);
    PeriodEstimate out;
    out.frequency_index = k + 1;
    out.period = static_cast<double>(n) / static_cast<double>(out.frequency_index);
    out.power_fraction = peak / total;
    return out;
}

PolynomialFit fit_polynomial(const CountSeries& s, Index degree) {
    validate(s);
    const Index n = s.size();
    if (degree < 0) throw Error(ErrorKind::InvalidArgument, "degree must be >= 0");
    if (degree > kMaxPolynomialDegree)
        throw Error(ErrorKind::IllConditioned, "degree " + std::to_string(degree) + " exceeds the supported maximum of " +
                                                   std::to_string(kMaxPolynomialDegree));
    if (n <= degree) throw Error(ErrorKind::TooShort, "series length must exceed the polynomial degree");

    PolynomialFit fit;
    fit.degree = degree;
    fit.center = 0.5 * static_cast<double>(n + 1);
    fit.half_width = n > 1 ? 0.5 * static_cast<double>(n - 1) : 1.0;

    const Eigen::VectorXd x = (Eigen::VectorXd::LinSpaced(n, 1.0, static_cast<double>(n)).array() - fit.center) / fit.half_width;
    Eigen::MatrixXd V(n, degree + 1);
    V.col(0).setOnes();
    for (Index j = 1; j <= degree; ++j) V.col(j) = V.col(j - 1).cwiseProduct(x);
    fit.normalized_coefficients = V.colPivHouseholderQr().solve(s.values);
    fit.fitted = V * fit.normalized_coefficients;
    fit.rms_error = std::sqrt((s.values - fit.fitted).squaredNorm() / static_cast<double>(n));

    // expand sum_j a_j ((t - c) / h)^j into powers of t
    fit.coefficients = Eigen::VectorXd::Zero(degree + 1);
    for (Index j = 0; j <= degree; ++j) {
        const double scale = fit.normalized_coefficients(j) / std::pow(fit.half_width, static_cast<double>(j));
        double binom = 1.0;
        for (Index k = 0; k <= j; ++k) {
            fit.coefficients(k) += scale * binom * std::pow(-fit.center, static_cast<double>(j - k));
            binom = binom * static_cast<double>(j - k) / static_cast<double>(k + 1);
        }
    }
    return fit;
}

WaveDiagnostics analyze(const CountSeries& s, Index window, Index max_lag, Index degree) {
    WaveDiagnostics d;
    d.window = window;
    d.smoothed = moving_average(s, window);
    d.raw_autocorrelation = autocorrelation(s, max_lag);
    d.raw_dominant = dominant_period(s);
    d.autocorrelation = autocorrelation(d.smoothed, max_lag);
    d.dominant = dominant_period(d.smoothed);
    d.polynomial_fit = fit_polynomial(d.smoothed, degree);
    for (Index k = 1; k <= 8 && k < d.smoothed.size(); ++k)
        d.rms_by_degree.emplace_back(k, fit_polynomial(d.smoothed, k).rms_error);
    return d;
}

SlutskyYuleSummary slutsky_yule_experiment(const TrendModel& model, Index length, Index window, Index runs,
                                           std::uint64_t master_seed, unsigned threads) {
    validate(model);
    if (runs < 1) throw Error(ErrorKind::InvalidArgument, "runs must be >= 1");
    SlutskyYuleSummary summary;
    summary.runs = runs;
    summary.trials.resize(static_cast<std::size_t>(runs));

    auto run_one = [&](Index r) {
        TrendModel m = model;
        m.seed = derive_seed(master_seed, static_cast<std::uint64_t>(r));
        const CountSeries raw = generate_series(m, length);
        const CountSeries smooth = moving_average(raw, window);
        SlutskyYuleTrial t;
        t.seed = m.seed;
        t.raw_lag1 = autocorrelation(raw, 1)(0);
        t.smoothed_lag1 = autocorrelation(smooth, 1)(0);
        const auto pr = dominant_period(raw);
        const auto ps = dominant_period(smooth);
        t.raw_power_fraction = pr.power_fraction;
        t.smoothed_power_fraction = ps.power_fraction;
        t.smoothed_period = ps.period;
        summary.trials[static_cast<std::size_t>(r)] = t;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(runs)));
    if (workers == 1) {
        for (Index r = 0; r < runs; ++r) run_one(r);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (Index r = w; r < runs; r += workers) run_one(r);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    for (const auto& t : summary.trials) {
        summary.mean_raw_lag1 += t.raw_lag1;
        summary.mean_smoothed_lag1 += t.smoothed_lag1;
        summary.mean_raw_power_fraction += t.raw_power_fraction;
        summary.mean_smoothed_power_fraction += t.smoothed_power_fraction;
        if (t.smoothed_power_fraction > t.raw_power_fraction) ++summary.smoothed_more_concentrated;
    }
    const double n = static_cast<double>(runs);
    summary.mean_raw_lag1 /= n;
    summary.mean_smoothed_lag1 /= n;
    summary.mean_raw_power_fraction /= n;
    summary.mean_smoothed_power_fraction /= n;
    return summary;
}

// --- CSV -------------------------------------------------------------------

CountSeries load_count_series(std::istream& in) {
    const csv::Table t = csv::read_table(in);
    const auto cp = t.column("period"), cv = t.column("value");
    if (!cp || !cv) throw Error(ErrorKind::HeaderMismatch, "count series needs columns period,value");
    CountSeries s;
    s.values.resize(static_cast<Index>(t.rows.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() <= std::max(*cp, *cv))
            throw Error(ErrorKind::ParseError, "line " + std::to_string(t.lines[r]) + ": missing cells");
        s.timestamps.push_back(csv::trim(row[*cp]));
        auto v = csv::parse_optional_number(row[*cv]);
        if (!v) throw Error(ErrorKind::ParseError, "line " + std::to_string(t.lines[r]) + ": blank value");
        s.values(static_cast<Index>(r)) = *v;
    }
    validate(s);
    return s;
}

void write_count_series(std::ostream& out, const CountSeries& s) {
    const auto labels = s.timestamps.empty() ? index_labels(s.size()) : s.timestamps;
    out << "period,value\n";
    for (Index i = 0; i < s.size(); ++i)
        csv::write_row(out, {labels[static_cast<std::size_t>(i)], csv::format_number(s.values(i))});
}

void write_plot_data(std::ostream& out, const CountSeries& raw, const WaveDiagnostics& d) {
    const auto labels = raw.timestamps.empty() ? index_labels(raw.size()) : raw.timestamps;
    const Index offset = d.window - 1;
    out << "period,raw,smoothed,poly_fit\n";
    for (Index i = 0; i < raw.size(); ++i) {
        csv::Row row{labels[static_cast<std::size_t>(i)], csv::format_number(raw.values(i)), "", ""};
        if (i >= offset) {
            row[2] = csv::format_number(d.smoothed.values(i - offset));
            row[3] = csv::format_number(d.polynomial_fit.fitted(i - offset));
        }
        csv::write_row(out, row);
    }
}

}  // namespace dealdesk::waves
