#include "arise/fracdiff.hpp"

#include <cmath>
#include <stdexcept>

namespace arise {

FracCoeffs frac_coeffs(double d, int truncation, FracDirection direction) {
    if (truncation < 0) throw std::invalid_argument("frac_coeffs: truncation must be >= 0");
    if (!std::isfinite(d)) throw std::invalid_argument("frac_coeffs: d must be finite");
    FracCoeffs out;
    out.d = d;
    out.direction = direction;
    out.coeffs.resize(static_cast<std::size_t>(truncation) + 1);
    out.coeffs[0] = 1.0;
    for (int j = 1; j <= truncation; ++j) {
        double ratio = (direction == FracDirection::inverse) ? (d + j - 1.0) / j : (j - 1.0 - d) / j;
        out.coeffs[static_cast<std::size_t>(j)] = out.coeffs[static_cast<std::size_t>(j) - 1] * ratio;
    }
    return out;
}

std::vector<double> apply_fracdiff(const std::vector<double>& series, const FracCoeffs& coeffs) {
    if (series.empty()) throw std::invalid_argument("apply_fracdiff: empty series");
    const std::size_t n = series.size();
    const std::size_t m = coeffs.coeffs.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        std::size_t jmax = std::min(t + 1, m);
        for (std::size_t j = 0; j < jmax; ++j) acc += coeffs.coeffs[j] * series[t - j];
        out[t] = acc;
    }
    return out;
}

Eigen::VectorXd apply_fracdiff(const Eigen::VectorXd& series, const FracCoeffs& coeffs) {
    std::vector<double> x(series.data(), series.data() + series.size());
    std::vector<double> y = apply_fracdiff(x, coeffs);
    return Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
}

Complex phase_operator(double d, double lambda) {
    if (!(lambda > 0.0 && lambda <= kPi))
        throw std::invalid_argument("phase_operator: lambda must lie in (0, pi]");
    double modulus = std::pow(lambda, -d);
    double arg = (kPi - lambda) * d / 2.0;
    return std::polar(modulus, arg);
}

} // namespace arise
