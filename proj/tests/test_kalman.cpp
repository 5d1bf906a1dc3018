#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arise/kalman.hpp"
#include "arise/rng.hpp"
#include "helpers.hpp"

#include <cmath>
#include <random>

using namespace arise;

namespace {

// Random stable state-space instance with moderate initial covariance.
StateSpace random_instance(Rng& rng, int n, int l) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.2, 0.9);
    auto randn = [&](int r, int c) {
        MatrixXd m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = gauss(rng);
        return m;
    };

    StateSpace ss;
    MatrixXd raw = randn(n, n);
    // scale to a target spectral radius below one
    double radius = raw.eigenvalues().cwiseAbs().maxCoeff();
    ss.T = raw * (unif(rng) / std::max(radius, 1e-9));
    ss.c = randn(n, 1);
    ss.R = randn(n, l);
    MatrixXd q = randn(l, l);
    ss.Q = q * q.transpose() + 0.1 * MatrixXd::Identity(l, l);
    ss.Z = randn(l, n);
    MatrixXd h = randn(l, l);
    ss.H = h * h.transpose() + 0.1 * MatrixXd::Identity(l, l);
    ss.a1 = randn(n, 1);
    MatrixXd p = randn(n, n);
    ss.P1 = p * p.transpose() + 0.5 * MatrixXd::Identity(n, n);
    return ss;
}

TimeSeriesMatrix simulate_from(const StateSpace& ss, int T, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&](const MatrixXd& cov) {
        Eigen::LLT<MatrixXd> llt(cov);
        VectorXd z(cov.rows());
        for (int i = 0; i < z.size(); ++i) z(i) = gauss(rng);
        return VectorXd(llt.matrixL() * z);
    };
    VectorXd alpha = ss.a1 + draw(ss.P1);
    TimeSeriesMatrix X(T, ss.obs_dim());
    for (int t = 0; t < T; ++t) {
        X.row(t) = (ss.Z * alpha + draw(ss.H)).transpose();
        alpha = ss.c + ss.T * alpha + ss.R * draw(ss.Q);
    }
    return X;
}

} // namespace

TEST_CASE("filter log-likelihood equals the brute-force joint Gaussian density") {
    Rng rng = make_rng(20260808);
    std::uniform_int_distribution<int> pick_T(2, 8);
    std::uniform_int_distribution<int> pick_n(1, 6);
    std::uniform_int_distribution<int> pick_l(1, 2);
    for (int rep = 0; rep < 40; ++rep) {
        int n = pick_n(rng), l = pick_l(rng), T = pick_T(rng);
        StateSpace ss = random_instance(rng, n, l);
        TimeSeriesMatrix X = simulate_from(ss, T, rng);
        double kalman = kalman_filter(ss, X).loglik;
        double joint = oracle::joint_gaussian_loglik(ss, X);
        CHECK(kalman == doctest::Approx(joint).epsilon(1e-10));
        CHECK(std::abs(kalman - joint) < 1e-8);
    }
}

TEST_CASE("filtered covariance stays symmetric PSD") {
    Rng rng = make_rng(5150);
    StateSpace ss = random_instance(rng, 4, 2);
    TimeSeriesMatrix X = simulate_from(ss, 50, rng);
    FilterResult f = kalman_filter(ss, X);
    CHECK((f.filtered_cov - f.filtered_cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(f.filtered_cov);
    CHECK(eig.eigenvalues().minCoeff() > -1e-12);
    CHECK(std::isfinite(f.loglik));
}

TEST_CASE("iid observation model reproduces the closed-form likelihood") {
    // T = 0 transition makes x_t iid N(mu, q + h)
    StateSpace ss;
    ss.T = MatrixXd::Zero(1, 1);
    ss.c = VectorXd::Zero(1);
    ss.R = MatrixXd::Identity(1, 1);
    ss.Q = MatrixXd::Constant(1, 1, 0.8);
    ss.Z = MatrixXd::Identity(1, 1);
    ss.H = MatrixXd::Constant(1, 1, 0.2);
    ss.a1 = VectorXd::Zero(1);
    ss.P1 = MatrixXd::Constant(1, 1, 0.8); // stationary for the zero transition

    Rng rng = make_rng(77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TimeSeriesMatrix X(200, 1);
    for (int t = 0; t < 200; ++t) X(t, 0) = gauss(rng);

    double got = kalman_filter(ss, X).loglik;
    double expect = 0.0;
    for (int t = 0; t < 200; ++t)
        expect += -0.5 * (std::log(2.0 * kPi) + std::log(1.0) + X(t, 0) * X(t, 0));
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
}
