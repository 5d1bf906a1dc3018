#pragma once

#include "arise/estimators.hpp"

#include <string>

namespace arise {

enum class HypothesisKind { efficiency, memorability };

struct TestReport {
    HypothesisKind hypothesis = HypothesisKind::efficiency;
    double statistic = 0.0; // d_bar, or d_bar - d_bar* for memorability
    double std_error = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    double level = 0.05;
    bool reject = false;
    MemoryEstimate estimate;
};

// d_bar = mean(d_hat); se = sqrt(1' Sigma^-1 1) / (l sqrt(m)).
std::pair<double, double> averaged_memory(const MemoryEstimate& est);

// H0: d_bar = 0 against H1: d_bar > 0 (upper-tail normal p-value).
TestReport test_efficiency(const TimeSeriesMatrix& X, const EstimatorConfig& config,
                           double level = 0.05);

// H0: d_bar - d_bar* = 0 against H1: d_bar - d_bar* < 0 on a transformed series.
TestReport test_memorability(const TimeSeriesMatrix& transformed, double reference_dbar,
                             const EstimatorConfig& config, double level = 0.05);

} // namespace arise
