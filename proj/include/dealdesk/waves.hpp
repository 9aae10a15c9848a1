#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace dealdesk::waves {

using Eigen::Index;

/// Time-indexed deal counts or aggregate values.
struct CountSeries {
    std::vector<std::string> timestamps;
    Eigen::VectorXd values;

    Index size() const noexcept { return values.size(); }
};

/// Equal lengths and finite values; with `counts`, values must also be >= 0.
void validate(const CountSeries& s, bool counts = false);

/// Labels "1".."n".
std::vector<std::string> index_labels(Index n);

enum class TrendKind { Ideal, Linear, Quadratic, Exponential };
enum class NoiseKind { Gaussian, Poisson };

/// Parameters by kind, t = 1..length:
///   ideal        {c}          c
///   linear       {a, b}       a t + b
///   quadratic    {a, b, c}    a t^2 + b t + c
///   exponential  {a, b}       a e^(b t)
struct TrendModel {
    TrendKind kind = TrendKind::Ideal;
    std::vector<double> parameters;
    double noise_sigma = 0.0;
    NoiseKind noise = NoiseKind::Gaussian;
    std::uint64_t seed = 0;
    bool clamp_at_zero = true;
};

void validate(const TrendModel& model);
double trend_value(const TrendModel& model, double t);

/// trend(t) + noise, clamped at zero when the model asks for it. Poisson noise
/// draws each value with mean max(trend(t), 0) and ignores noise_sigma.
CountSeries generate_series(const TrendModel& model, Index length);

/// Trailing equal-weight average: out[i] = mean(values[i .. i+k-1]), labelled
/// with the window's last timestamp.
CountSeries moving_average(const CountSeries& s, Index window);

/// Sample autocorrelation at lags 1..max_lag, mean removed, normalized by the
/// lag-0 sum of squares.
Eigen::VectorXd autocorrelation(const CountSeries& s, Index max_lag);

/// Periodogram |X_k|^2 of a series at Fourier bins k = 1..n/2.
Eigen::VectorXd periodogram(const Eigen::VectorXd& values);

/// `values` minus its least-squares line.
Eigen::VectorXd detrend_linear(const Eigen::VectorXd& values);

struct PeriodEstimate {
    double period = 0.0;
    double power_fraction = 0.0;
    Index frequency_index = 0;
};

/// Peak of the periodogram of the linearly detrended series.
PeriodEstimate dominant_period(const CountSeries& s);

inline constexpr Index kMaxPolynomialDegree = 12;

struct PolynomialFit {
    Index degree = 0;
    /// Ascending powers of t, with t = 1..n.
    Eigen::VectorXd coefficients;
    /// Ascending powers of x = (t - center) / half_width, which maps t onto [-1, 1].
    Eigen::VectorXd normalized_coefficients;
    double center = 0.0;
    double half_width = 1.0;
    Eigen::VectorXd fitted;
    double rms_error = 0.0;
};

PolynomialFit fit_polynomial(const CountSeries& s, Index degree);

struct WaveDiagnostics {
    Index window = 1;
    CountSeries smoothed;
    Eigen::VectorXd raw_autocorrelation;
    Eigen::VectorXd autocorrelation;
    PeriodEstimate raw_dominant;
    PeriodEstimate dominant;
    PolynomialFit polynomial_fit;
    /// (degree, rms) for degrees 1..8 that the smoothed length allows.
    std::vector<std::pair<Index, double>> rms_by_degree;
};

/// moving_average, then autocorrelation, dominant period and polynomial fit
/// of the smoothed series. The raw series' autocorrelation and dominant period
/// are reported alongside for comparison.
WaveDiagnostics analyze(const CountSeries& s, Index window, Index max_lag, Index degree);

struct SlutskyYuleTrial {
    std::uint64_t seed = 0;
    double raw_lag1 = 0.0;
    double smoothed_lag1 = 0.0;
    double raw_power_fraction = 0.0;
    double smoothed_power_fraction = 0.0;
    double smoothed_period = 0.0;
};

struct SlutskyYuleSummary {
    Index runs = 0;
    Index smoothed_more_concentrated = 0;
    double mean_raw_lag1 = 0.0;
    double mean_smoothed_lag1 = 0.0;
    double mean_raw_power_fraction = 0.0;
    double mean_smoothed_power_fraction = 0.0;
    std::vector<SlutskyYuleTrial> trials;
};

/// Repeats generate -> smooth -> diagnose over `runs` seeds derived from
/// `master_seed`. Results do not depend on `threads`.
SlutskyYuleSummary slutsky_yule_experiment(const TrendModel& model, Index length, Index window, Index runs,
                                           std::uint64_t master_seed, unsigned threads = 1);

// --- CSV -------------------------------------------------------------------

/// Columns period,value.
CountSeries load_count_series(std::istream& in);
void write_count_series(std::ostream& out, const CountSeries& s);

/// Columns period,raw,smoothed,poly_fit aligned on the raw timestamps.
void write_plot_data(std::ostream& out, const CountSeries& raw, const WaveDiagnostics& diagnostics);

}  // namespace dealdesk::waves
