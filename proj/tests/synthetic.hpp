#pragma once

// Synthetic data generators shared by the unit tests and the acceptance binary.

#include <cstdint>

#include "dealdesk/economics.hpp"
#include "dealdesk/random.hpp"

namespace synthetic {

struct TakeoverTruth {
    dealdesk::economics::TakeoverRegressionSpec spec;
    Eigen::VectorXd beta;  ///< in design-column order
};

/// 400 rows: intercept, 5 I, 2 S, 2 TEC, 2 TEC x TR, Gaussian noise of `sigma`.
inline TakeoverTruth takeover(std::uint64_t seed, double sigma, Eigen::Index rows = 400) {
    dealdesk::Rng rng(seed);
    TakeoverTruth t;
    auto& s = t.spec;
    auto fill = [&](Eigen::MatrixXd& m, Eigen::Index cols) {
        m.resize(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    };
    fill(s.institutional, 5);
    fill(s.sectoral, 2);
    fill(s.technological, 2);
    s.regime_dummies.resize(rows, 2);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) s.regime_dummies(i, j) = rng.uniform() < 0.5 ? 0.0 : 1.0;

    t.beta.resize(12);
    t.beta << 0.5, 1.0, -0.8, 0.3, 0.0, 2.0, -1.2, 0.7, 0.9, -0.4, 0.6, -0.25;
    s.response = Eigen::VectorXd::Zero(rows);
    s.response = dealdesk::economics::design_matrix(s) * t.beta;
    for (Eigen::Index i = 0; i < rows; ++i) s.response(i) += sigma * rng.normal();
    return t;
}

/// Firm = alpha + beta * market + sigma * noise over `n` periods.
inline dealdesk::economics::ReturnSeries market_model(std::uint64_t seed, Eigen::Index n, double alpha, double beta,
                                                      double sigma) {
    dealdesk::Rng rng(seed);
    dealdesk::economics::ReturnSeries s;
    s.market_returns.resize(n);
    s.firm_returns.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s.market_returns(i) = 0.01 * rng.normal();
        s.firm_returns(i) = alpha + beta * s.market_returns(i) + sigma * rng.normal();
    }
    return s;
}

}  // namespace synthetic
