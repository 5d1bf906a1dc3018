#pragma once

// Brute-force reference implementations used as test oracles. These stay
// deliberately naive and independent of the library's computation paths.

#include "arise/kalman.hpp"
#include "arise/types.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using arise::Complex;
using arise::MatrixXd;
using arise::TimeSeriesMatrix;
using arise::VectorXd;

// Direct O(T^2) DFT with the positive-exponent convention.
inline std::vector<Complex> dft_direct(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            double ang = 2.0 * arise::kPi * static_cast<double>(t) * static_cast<double>(j) /
                         static_cast<double>(n);
            acc += x[t] * Complex(std::cos(ang), std::sin(ang));
        }
        out[j] = acc;
    }
    return out;
}

inline double sample_mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double sample_variance(const std::vector<double>& x) {
    double m = sample_mean(x), s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

inline double excess_kurtosis(const std::vector<double>& x) {
    double m = sample_mean(x);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        double c = v - m;
        m2 += c * c;
        m4 += c * c * c * c;
    }
    m2 /= static_cast<double>(x.size());
    m4 /= static_cast<double>(x.size());
    return m4 / (m2 * m2) - 3.0;
}

// Biased sample autocovariance at lag k.
inline double autocovariance(const std::vector<double>& x, std::size_t k) {
    double m = sample_mean(x), s = 0.0;
    for (std::size_t t = k; t < x.size(); ++t) s += (x[t] - m) * (x[t - k] - m);
    return s / static_cast<double>(x.size());
}

// Least-squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = sample_mean(x), my = sample_mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// Spectral density of fractionally integrated unit-variance white noise:
// f(lambda) = |1 - e^{i lambda}|^{-2d} / (2 pi).
inline double arfima_spectrum(double d, double lambda) {
    double s = 2.0 * std::sin(lambda / 2.0);
    return std::pow(s, -2.0 * d) / (2.0 * arise::kPi);
}

// Joint Gaussian log-density of the stacked observations implied by a
// state-space model, assembled covariance block by block.
inline double joint_gaussian_loglik(const arise::StateSpace& ss, const TimeSeriesMatrix& X) {
    const int T = static_cast<int>(X.rows());
    const int l = ss.obs_dim();

    std::vector<VectorXd> mean(static_cast<std::size_t>(T));
    std::vector<MatrixXd> var(static_cast<std::size_t>(T));
    mean[0] = ss.a1;
    var[0] = ss.P1;
    const MatrixXd noise = ss.R * ss.Q * ss.R.transpose();
    for (int t = 1; t < T; ++t) {
        mean[static_cast<std::size_t>(t)] = ss.c + ss.T * mean[static_cast<std::size_t>(t) - 1];
        var[static_cast<std::size_t>(t)] =
            ss.T * var[static_cast<std::size_t>(t) - 1] * ss.T.transpose() + noise;
    }

    VectorXd mu(T * l);
    MatrixXd cov = MatrixXd::Zero(T * l, T * l);
    for (int t = 0; t < T; ++t) {
        mu.segment(t * l, l) = ss.Z * mean[static_cast<std::size_t>(t)];
        for (int s = t; s < T; ++s) {
            // Cov(x_t, x_s) = Z Var(alpha_t) (T^{s-t})' Z'  (+ H on the diagonal)
            MatrixXd cross = var[static_cast<std::size_t>(t)];
            for (int k = t; k < s; ++k) cross = cross * ss.T.transpose();
            MatrixXd block = ss.Z * cross * ss.Z.transpose();
            if (s == t) block += ss.H;
            cov.block(t * l, s * l, l, l) = block;
            cov.block(s * l, t * l, l, l) = block.transpose();
        }
    }

    VectorXd x(T * l);
    for (int t = 0; t < T; ++t) x.segment(t * l, l) = X.row(t).transpose();

    Eigen::LLT<MatrixXd> llt(cov);
    VectorXd diff = x - mu;
    VectorXd solved = llt.solve(diff);
    double logdet = 0.0;
    for (int i = 0; i < T * l; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
    return -0.5 * (T * l * std::log(2.0 * arise::kPi) + logdet + diff.dot(solved));
}

} // namespace oracle
