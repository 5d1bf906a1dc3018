#pragma once

#include "arise/estimators.hpp"
#include "arise/kalman.hpp"
#include "arise/optimize.hpp"
#include "arise/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace arise {

enum class LdssInit { stationary, diffuse };

// Long-dependent state space: the latent process follows
//   phi(B) diag{(1-B)^{d_i}}_k h_t = psi(B) eps_t,  eps_t ~ N(mu, Sigma_eps)
// with the fractional difference truncated at lag k, observed through
//   X_t ~ N(U h_t, Sigma_h).
struct LdssModel {
    VectorXd d;
    int k = 4;
    int p = 0;
    int q = 0;
    VectorXd mu;
    MatrixXd sigma_eps;
    std::vector<MatrixXd> W; // W_0..W_p, W_0 = I
    std::vector<MatrixXd> V; // V_0..V_q, V_0 = I
    MatrixXd U;
    MatrixXd sigma_h;
    double loglik = 0.0;
    LdssInit init = LdssInit::stationary;
    double diffuse_kappa = 1e6;

    int dim() const { return static_cast<int>(d.size()); }
    int state_dim() const { return dim() * (std::max(k + p, 1) + q); }

    // Composed AR polynomial A_0..A_{k+p}: phi(B) times the truncated
    // fractional difference, A_0 = I.
    std::vector<MatrixXd> composed_ar() const;
    double composed_spectral_radius() const;

    // Companion realization; stationary init falls back to a diffuse prior
    // (kappa * I) when the composed polynomial is not safely stable.
    StateSpace to_state_space() const;
};

struct LdssFitConfig {
    int k = 4;
    int p = 0;
    int q = 0;
    std::optional<VectorXd> fix_d; // skip the ASE step when set
    bool fit_mu = true;
    bool diagonal = true; // diagonal W/V blocks: components fit independently
    LdssInit init = LdssInit::stationary;
    double diffuse_kappa = 1e6;
    EstimatorConfig estimator; // ASE settings for step 1
    QuasiNewtonOptions optim;
    int threads = 0;
};

LdssModel ldss_fit(const TimeSeriesMatrix& X, const LdssFitConfig& config = {});

struct ForecastInterval {
    double percentile; // central mass, e.g. 95.45
    TimeSeriesMatrix lo;
    TimeSeriesMatrix hi;
};

struct ForecastDistribution {
    int horizon = 0;
    int K = 0;
    std::vector<TimeSeriesMatrix> samples; // K paths, horizon x l each
    TimeSeriesMatrix mean;
    std::vector<ForecastInterval> intervals; // 68.27 / 95.45 / 99.73
};

// Filters to the posterior state at T, then simulates K joint sample paths
// with per-path derived seeds; summaries are empirical quantiles.
ForecastDistribution ldss_forecast(const LdssModel& model, const TimeSeriesMatrix& X, int horizon,
                                   int K, std::uint64_t seed, int threads = 0);

// Percentage of observations inside the one-step-ahead central predictive
// interval at the given percentile (pooled over components).
double coverage_percentage(const TimeSeriesMatrix& truth, const LdssModel& model, double percentile);

} // namespace arise
