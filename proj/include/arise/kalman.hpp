#pragma once

#include "arise/types.hpp"

namespace arise {

// Time-invariant linear-Gaussian state space:
//   alpha_{t+1} = c + T alpha_t + R eps_t,  eps_t ~ N(0, Q)
//   x_t         = Z alpha_t + eta_t,        eta_t ~ N(0, H)
//   alpha_1     ~ N(a1, P1)
struct StateSpace {
    MatrixXd T;
    VectorXd c;
    MatrixXd R;
    MatrixXd Q;
    MatrixXd Z;
    MatrixXd H;
    VectorXd a1;
    MatrixXd P1;

    int state_dim() const { return static_cast<int>(T.rows()); }
    int obs_dim() const { return static_cast<int>(Z.rows()); }
};

struct FilterResult {
    double loglik = 0.0;
    VectorXd filtered_mean;   // E[alpha_T | x_{1:T}]
    MatrixXd filtered_cov;
    TimeSeriesMatrix pred_mean; // one-step-ahead observation means, T x l
    TimeSeriesMatrix pred_var;  // diagonal of the innovation covariance, T x l
};

// Exact Gaussian likelihood via the Kalman recursion (Joseph-form updates).
// Singular innovation covariances yield loglik = -inf rather than throwing.
FilterResult kalman_filter(const StateSpace& ss, const TimeSeriesMatrix& X);

} // namespace arise
