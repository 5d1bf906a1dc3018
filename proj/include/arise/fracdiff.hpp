#pragma once

#include "arise/types.hpp"

#include <vector>

namespace arise {

enum class FracDirection {
    difference, // (1-B)^d applied forward
    inverse     // (1-B)^{-d} moving-average expansion
};

// Truncated fractional-differencing coefficients c_0..c_M.
//
// c_0 = 1 and the ratio recursion holds exactly:
//   inverse:    c_j = c_{j-1} * (d + j - 1) / j
//   difference: c_j = c_{j-1} * (j - 1 - d) / j
// The recursion avoids Gamma-function overflow for large j.
struct FracCoeffs {
    double d = 0.0;
    FracDirection direction = FracDirection::difference;
    std::vector<double> coeffs;

    int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
};

FracCoeffs frac_coeffs(double d, int truncation, FracDirection direction);

// Causal convolution output_t = sum_{j=0..min(t,M)} c_j * x_{t-j};
// values before t=0 are treated as zero (type-II convention).
std::vector<double> apply_fracdiff(const std::vector<double>& series, const FracCoeffs& coeffs);
Eigen::VectorXd apply_fracdiff(const Eigen::VectorXd& series, const FracCoeffs& coeffs);

// Frequency-domain phase operator lambda^{-d} * exp(i (pi - lambda) d / 2),
// the diagonal entry of Psi_j(d). Requires 0 < lambda <= pi.
Complex phase_operator(double d, double lambda);

} // namespace arise
