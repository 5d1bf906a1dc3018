#pragma once

#include <string>
#include <vector>

namespace arise {

enum class WaveletFamily { haar, db4 };

WaveletFamily wavelet_from_string(const std::string& name);
std::string wavelet_to_string(WaveletFamily f);

enum class ThresholdRule { soft, hard };

ThresholdRule threshold_rule_from_string(const std::string& name);
std::string threshold_rule_to_string(ThresholdRule r);

// Hard/soft threshold function tau(alpha; rho).
double threshold(double alpha, double rho, ThresholdRule rule);

// Periodized orthogonal pyramid transform of a real signal.
//
// The band at scale i holds 2^i coefficients (shift kappa = 0..2^i-1); detail
// bands run from scale 0 up to the finest scale log2(n)-1, plus one coarsest
// scaling value. Signals whose length is not a power of two are padded by
// symmetric reflection; the padded length and per-level scaling bands are kept
// so thresholds can be built from the same pyramid.
struct WaveletCoeffSet {
    WaveletFamily family = WaveletFamily::db4;
    int padded_n = 0;
    int original_n = 0;
    int min_scale = 0; // coarsest detail scale retained
    std::vector<std::vector<double>> detail;    // detail[s], scale = min_scale + s, size 2^scale
    std::vector<std::vector<double>> scaling;   // same-level scaling (father) coefficients
    std::vector<std::vector<double>> threshold; // rho_{i,kappa} >= 0; empty until computed
    std::vector<double> approx;                 // coarsest scaling band, never thresholded

    // Admissibility of the detail index set: 2^i <= C * T^(1-delta).
    double adm_C = 1.0;
    double adm_delta = 0.01;
    long long source_T = 0;

    int max_scale() const { return min_scale + static_cast<int>(detail.size()) - 1; }
    bool admissible(int scale) const;
    long long index_set_size() const; // |J_T|, counting admissible detail coefficients
    double sum_squares() const;       // details + coarsest approx
};

WaveletCoeffSet dwt_forward(const std::vector<double>& signal, WaveletFamily family,
                            double adm_C = 1.0, double adm_delta = 0.01, long long source_T = 0);

// Plain inverse pyramid (thresholds, if any, are ignored).
std::vector<double> dwt_inverse(const WaveletCoeffSet& coeffs);

// rho_{i,kappa} = c_scale * T^{-1/2} * |s_{i,kappa}(series)| * sqrt(2 log |J_T|),
// where s are the scaling-band coefficients of the supplied periodogram series.
WaveletCoeffSet compute_thresholds(WaveletCoeffSet coeffs, const std::vector<double>& periodogram_series,
                                   double c_scale);

// Thresholds admissible detail coefficients in place and zeroes the rest.
WaveletCoeffSet apply_thresholds(WaveletCoeffSet coeffs, ThresholdRule rule);

} // namespace arise
