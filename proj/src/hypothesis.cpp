#include "arise/hypothesis.hpp"

#include "arise/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace arise {

std::pair<double, double> averaged_memory(const MemoryEstimate& est) {
    const int l = static_cast<int>(est.d_hat.size());
    if (est.sigma.rows() != l || est.sigma.cols() != l)
        throw std::invalid_argument("averaged_memory: covariance unavailable");
    double dbar = est.d_hat.mean();
    // est.sigma already holds Sigma^-1 / m.
    VectorXd ones = VectorXd::Ones(l);
    double quad = ones.dot(est.sigma * ones);
    if (!(quad > 0.0) || !std::isfinite(quad))
        throw std::invalid_argument("averaged_memory: singular asymptotic covariance");
    double se = std::sqrt(quad) / l;
    return {dbar, se};
}

namespace {

TestReport build_report(HypothesisKind kind, MemoryEstimate est, double offset, bool lower_tail,
                        double level) {
    auto [dbar, se] = averaged_memory(est);
    TestReport r;
    r.hypothesis = kind;
    r.estimate = std::move(est);
    r.statistic = dbar - offset;
    r.std_error = se;
    r.z = r.statistic / se;
    r.p_value = lower_tail ? normal_cdf(r.z) : 1.0 - normal_cdf(r.z);
    r.level = level;
    r.reject = r.p_value < level;
    return r;
}

} // namespace

TestReport test_efficiency(const TimeSeriesMatrix& X, const EstimatorConfig& config, double level) {
    MemoryEstimate est = estimate(X, config, EstimatorMethod::ase);
    return build_report(HypothesisKind::efficiency, std::move(est), 0.0, false, level);
}

TestReport test_memorability(const TimeSeriesMatrix& transformed, double reference_dbar,
                             const EstimatorConfig& config, double level) {
    if (!std::isfinite(reference_dbar))
        throw std::invalid_argument("test_memorability: reference d_bar must be finite");
    MemoryEstimate est = estimate(transformed, config, EstimatorMethod::ase);
    return build_report(HypothesisKind::memorability, std::move(est), reference_dbar, true, level);
}

} // namespace arise
