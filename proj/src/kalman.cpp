#include "arise/kalman.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace arise {

FilterResult kalman_filter(const StateSpace& ss, const TimeSeriesMatrix& X) {
    const int n = ss.state_dim();
    const int l = ss.obs_dim();
    const int T = static_cast<int>(X.rows());
    if (static_cast<int>(X.cols()) != l) throw std::invalid_argument("kalman_filter: dimension mismatch");
    if (T < 1) throw std::invalid_argument("kalman_filter: empty observations");

    const MatrixXd noise = ss.R * ss.Q * ss.R.transpose();
    const MatrixXd eye = MatrixXd::Identity(n, n);

    FilterResult out;
    out.pred_mean.resize(T, l);
    out.pred_var.resize(T, l);

    VectorXd a = ss.a1;
    MatrixXd P = ss.P1;
    double ll = 0.0;
    const double log2pi = std::log(2.0 * kPi);

    for (int t = 0; t < T; ++t) {
        VectorXd mean = ss.Z * a;
        MatrixXd F = ss.Z * P * ss.Z.transpose() + ss.H;
        F = 0.5 * (F + F.transpose());
        out.pred_mean.row(t) = mean.transpose();
        out.pred_var.row(t) = F.diagonal().transpose();

        VectorXd innov = X.row(t).transpose() - mean;
        Eigen::LLT<MatrixXd> llt(F);
        MatrixXd f_inv;
        if (llt.info() == Eigen::Success) {
            f_inv = llt.solve(MatrixXd::Identity(l, l));
            double logdet = 0.0;
            for (int i = 0; i < l; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
            ll += -0.5 * (l * log2pi + logdet + innov.dot(f_inv * innov));
        } else {
            // Singular innovation covariance: the likelihood is degenerate but
            // filtering continues through the pseudo-inverse gain.
            ll = -std::numeric_limits<double>::infinity();
            Eigen::SelfAdjointEigenSolver<MatrixXd> eig(F);
            VectorXd vals = eig.eigenvalues();
            double tol = 1e-12 * std::max(vals.maxCoeff(), 0.0);
            VectorXd inv_vals = VectorXd::Zero(l);
            for (int i = 0; i < l; ++i) inv_vals(i) = vals(i) > tol ? 1.0 / vals(i) : 0.0;
            f_inv = eig.eigenvectors() * inv_vals.asDiagonal() * eig.eigenvectors().transpose();
        }

        MatrixXd K = P * ss.Z.transpose() * f_inv;
        a += K * innov;
        MatrixXd ikz = eye - K * ss.Z;
        P = ikz * P * ikz.transpose() + K * ss.H * K.transpose();
        P = 0.5 * (P + P.transpose());

        if (t == T - 1) {
            out.filtered_mean = a;
            out.filtered_cov = P;
        } else {
            a = ss.c + ss.T * a;
            P = ss.T * P * ss.T.transpose() + noise;
            P = 0.5 * (P + P.transpose());
        }
    }
    out.loglik = ll;
    return out;
}

} // namespace arise
