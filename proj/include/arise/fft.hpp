#pragma once

#include "arise/types.hpp"

#include <vector>

namespace arise {

// DFT with positive-exponent convention: X_j = sum_t x_t exp(+i t lambda_j),
// lambda_j = 2 pi j / N. Thread-safe (FFTW planner access is serialized).
std::vector<Complex> dft_forward(const std::vector<Complex>& x);

// Inverse of dft_forward (includes the 1/N factor).
std::vector<Complex> dft_inverse(const std::vector<Complex>& x);

} // namespace arise
