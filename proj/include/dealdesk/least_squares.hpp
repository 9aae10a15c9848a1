#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "dealdesk/error.hpp"

namespace dealdesk {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct LeastSquaresFit {
    Vector<Scalar> coefficients;
    Vector<Scalar> standard_errors;
    Vector<Scalar> residuals;
    Matrix<Scalar> covariance;
    Scalar residual_sum_of_squares{0};
    Scalar sigma2{0};
    Eigen::Index degrees_of_freedom = 0;
};

/// Relative pivot threshold below which a column is treated as linearly dependent.
inline constexpr double kRankThreshold = 1e-10;

/// Ordinary least squares through a column-pivoting Householder QR.
///
/// Throws Error(TooFewRows) unless rows > columns, and Error(RankDeficient)
/// naming the dependent columns (by `names` when supplied, else by index).
/// Standard errors are the classical homoskedastic ones: sigma^2 (X'X)^-1
/// with sigma^2 = RSS / (n - p).
template <typename DerivedX, typename DerivedY>
LeastSquaresFit<typename DerivedX::Scalar> least_squares(const Eigen::MatrixBase<DerivedX>& X,
                                                         const Eigen::MatrixBase<DerivedY>& y,
                                                         const std::vector<std::string>& names = {}) {
    using Scalar = typename DerivedX::Scalar;
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (y.size() != n) throw Error(ErrorKind::InvalidArgument, "response length does not match design rows");
    if (p == 0) throw Error(ErrorKind::InvalidArgument, "design matrix has no columns");
    if (n <= p)
        throw Error(ErrorKind::TooFewRows,
                    std::to_string(n) + " rows for " + std::to_string(p) + " columns; need rows > columns");
    if (!X.allFinite() || !y.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite value in regression data");

    Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(X);
    qr.setThreshold(Scalar(kRankThreshold));
    if (qr.rank() < p) {
        std::string cols;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < p; ++k) {
            const auto idx = static_cast<std::size_t>(perm(k));
            if (!cols.empty()) cols += ", ";
            cols += idx < names.size() ? names[idx] : "column " + std::to_string(idx);
        }
        throw Error(ErrorKind::RankDeficient, "design is rank deficient; dependent columns: " + cols);
    }

    LeastSquaresFit<Scalar> fit;
    fit.coefficients = qr.solve(y.derived());
    fit.residuals = y - X * fit.coefficients;
    fit.residual_sum_of_squares = fit.residuals.squaredNorm();
    fit.degrees_of_freedom = n - p;
    fit.sigma2 = fit.residual_sum_of_squares / Scalar(fit.degrees_of_freedom);

    // (X'X)^-1 = P R^-1 R^-T P'
    const Matrix<Scalar> R = qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
    const Matrix<Scalar> Rinv = R.template triangularView<Eigen::Upper>().solve(Matrix<Scalar>::Identity(p, p));
    const Matrix<Scalar> inner = Rinv * Rinv.transpose();
    const auto& P = qr.colsPermutation();
    fit.covariance = fit.sigma2 * (P * inner * P.transpose());
    fit.standard_errors = fit.covariance.diagonal().cwiseMax(Scalar(0)).cwiseSqrt();
    return fit;
}

}  // namespace dealdesk
