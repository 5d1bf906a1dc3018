#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arise/fracdiff.hpp"
#include "arise/ldss.hpp"
#include "arise/rng.hpp"
#include "arise/simulate.hpp"
#include "helpers.hpp"

#include <cmath>
#include <random>

using namespace arise;

namespace {

LdssModel scalar_model(double d, int k, int p, int q, double mu, double sig_eps, double sig_h) {
    LdssModel m;
    m.d = VectorXd::Constant(1, d);
    m.k = k;
    m.p = p;
    m.q = q;
    m.mu = VectorXd::Constant(1, mu);
    m.sigma_eps = MatrixXd::Constant(1, 1, sig_eps * sig_eps);
    m.sigma_h = MatrixXd::Constant(1, 1, sig_h * sig_h);
    m.W.assign(static_cast<std::size_t>(p) + 1, MatrixXd::Identity(1, 1));
    m.V.assign(static_cast<std::size_t>(q) + 1, MatrixXd::Identity(1, 1));
    m.U = MatrixXd::Identity(1, 1);
    return m;
}

TimeSeriesMatrix simulate_ldss(const LdssModel& model, int T, std::uint64_t seed) {
    StateSpace ss = model.to_state_space();
    Rng rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&](const MatrixXd& cov) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
        VectorXd z(cov.rows());
        for (int i = 0; i < z.size(); ++i) z(i) = gauss(rng);
        return VectorXd(eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * z);
    };
    VectorXd alpha = ss.a1 + draw(ss.P1);
    TimeSeriesMatrix X(T, model.dim());
    for (int t = 0; t < T; ++t) {
        X.row(t) = (ss.Z * alpha + draw(ss.H)).transpose();
        alpha = ss.c + ss.T * alpha + ss.R * draw(ss.Q);
    }
    return X;
}

} // namespace

TEST_CASE("d = 0 collapses the composed polynomial to the plain ARMA") {
    LdssModel m = scalar_model(0.0, 4, 1, 0, 0.0, 1.0, 0.5);
    m.W[1](0, 0) = -0.6;
    std::vector<MatrixXd> a = m.composed_ar();
    REQUIRE(a.size() == 6u); // order k + p = 5
    CHECK(a[0](0, 0) == doctest::Approx(1.0));
    CHECK(a[1](0, 0) == doctest::Approx(-0.6));
    for (std::size_t s = 2; s < a.size(); ++s) CHECK(a[s](0, 0) == doctest::Approx(0.0));
}

TEST_CASE("composed polynomial multiplies the fractional row into the AR part") {
    LdssModel m = scalar_model(0.4, 4, 1, 0, 0.0, 1.0, 0.5);
    m.W[1](0, 0) = -0.5;
    std::vector<MatrixXd> a = m.composed_ar();
    FracCoeffs frac = frac_coeffs(0.4, 4, FracDirection::difference);
    // (1 - 0.5 B) * sum_b frac_b B^b
    for (int s = 0; s <= 5; ++s) {
        double expect = (s <= 4 ? frac.coeffs[static_cast<std::size_t>(s)] : 0.0) -
                        0.5 * (s >= 1 ? frac.coeffs[static_cast<std::size_t>(s) - 1] : 0.0);
        CHECK(a[static_cast<std::size_t>(s)](0, 0) == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK(m.composed_spectral_radius() < 1.0);
}

TEST_CASE("ldss likelihood equals the brute-force joint Gaussian on small instances") {
    Rng rng = make_rng(424242);
    std::uniform_real_distribution<double> unif(-0.45, 0.45);
    std::uniform_real_distribution<double> pos(0.3, 1.5);
    std::uniform_real_distribution<double> ar(-0.7, 0.7);
    for (int rep = 0; rep < 25; ++rep) {
        LdssModel m = scalar_model(unif(rng), 3, 1, 1, unif(rng), pos(rng), pos(rng));
        m.W[1](0, 0) = ar(rng);
        m.V[1](0, 0) = ar(rng);
        if (m.composed_spectral_radius() >= 0.999) continue;
        TimeSeriesMatrix X = simulate_ldss(m, 8, 1000 + static_cast<std::uint64_t>(rep));
        StateSpace ss = m.to_state_space();
        double kalman = kalman_filter(ss, X).loglik;
        double joint = oracle::joint_gaussian_loglik(ss, X);
        CHECK(std::abs(kalman - joint) < 1e-8);
    }
}

TEST_CASE("MA(1) realization reproduces the closed-form autocovariance") {
    // d = 0, p = 0, q = 1: h_t = eps_t + v1 eps_{t-1}, X_t = h_t + eta_t
    const double v1 = 0.6, sig_eps = 1.3, sig_h = 0.4;
    LdssModel m = scalar_model(0.0, 2, 0, 1, 0.0, sig_eps, sig_h);
    m.V[1](0, 0) = v1;
    TimeSeriesMatrix X = simulate_ldss(m, 200000, 12345);
    std::vector<double> v(X.col(0).data(), X.col(0).data() + X.rows());

    double var_expect = sig_eps * sig_eps * (1.0 + v1 * v1) + sig_h * sig_h;
    double cov1_expect = sig_eps * sig_eps * v1;
    CHECK(oracle::autocovariance(v, 0) == doctest::Approx(var_expect).epsilon(0.03));
    CHECK(oracle::autocovariance(v, 1) == doctest::Approx(cov1_expect).epsilon(0.05));
    CHECK(std::abs(oracle::autocovariance(v, 2)) < 0.03);
}

TEST_CASE("white-noise fit recovers the total variance and the iid likelihood") {
    Rng rng = make_rng(31337);
    std::normal_distribution<double> gauss(0.0, 1.5);
    TimeSeriesMatrix X(512, 1);
    for (int t = 0; t < 512; ++t) X(t, 0) = gauss(rng);

    LdssFitConfig cfg;
    cfg.k = 4;
    cfg.p = 0;
    cfg.q = 0;
    cfg.fix_d = VectorXd::Zero(1);
    LdssModel m = ldss_fit(X, cfg);

    double sample_var = (X.col(0).array() - X.col(0).mean()).square().sum() / 512.0;
    double model_var = m.sigma_eps(0, 0) + m.sigma_h(0, 0);
    CHECK(model_var == doctest::Approx(sample_var).epsilon(0.02));

    // closed-form iid Gaussian log-likelihood at the fitted parameters
    double mu = m.mu(0);
    double expect = 0.0;
    for (int t = 0; t < 512; ++t)
        expect += -0.5 * (std::log(2.0 * kPi * model_var) + (X(t, 0) - mu) * (X(t, 0) - mu) / model_var);
    CHECK(m.loglik == doctest::Approx(expect).epsilon(1e-9));
    CHECK(std::abs(m.loglik - expect) < 1e-6);
}

TEST_CASE("fit recovers the AR coefficient of a known generator") {
    LdssModel truth = scalar_model(0.3, 4, 1, 0, 0.0, 1.0, 0.25);
    truth.W[1](0, 0) = -0.5;
    TimeSeriesMatrix X = simulate_ldss(truth, 1 << 12, 8080);

    LdssFitConfig cfg;
    cfg.k = 4;
    cfg.p = 1;
    cfg.q = 0;
    cfg.fix_d = VectorXd::Constant(1, 0.3);
    LdssModel fitted = ldss_fit(X, cfg);
    CHECK(fitted.W[1](0, 0) == doctest::Approx(-0.5).epsilon(0.1 / 0.5));
    CHECK(fitted.loglik >= kalman_filter(truth.to_state_space(), X).loglik - 1e-3);
    CHECK(fitted.composed_spectral_radius() < 1.0 + 1e-6); // near-stationarity guard
}

TEST_CASE("noiseless dynamics forecast with zero-width intervals") {
    LdssModel m = scalar_model(0.2, 4, 1, 0, 0.0, 0.0, 0.0);
    m.W[1](0, 0) = -0.4;
    m.init = LdssInit::diffuse;
    m.diffuse_kappa = 0.0; // fully deterministic posterior
    TimeSeriesMatrix X = TimeSeriesMatrix::Ones(32, 1);
    ForecastDistribution fc = ldss_forecast(m, X, 5, 64, 99);
    for (const auto& iv : fc.intervals) {
        CHECK((iv.hi - iv.lo).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    }
    for (int k = 1; k < fc.K; ++k)
        CHECK((fc.samples[static_cast<std::size_t>(k)] - fc.samples[0]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("iid Gaussian model: the 95.45% interval sits near mean +- 2 sigma") {
    LdssModel m = scalar_model(0.0, 1, 0, 0, 0.0, 0.8, 0.6);
    TimeSeriesMatrix X = simulate_ldss(m, 64, 5);
    ForecastDistribution fc = ldss_forecast(m, X, 1, 100000, 17);
    double sigma = std::sqrt(m.sigma_eps(0, 0) + m.sigma_h(0, 0));
    const ForecastInterval& iv95 = fc.intervals[1];
    CHECK(iv95.percentile == doctest::Approx(95.45));
    double width = iv95.hi(0, 0) - iv95.lo(0, 0);
    CHECK(width == doctest::Approx(4.0 * sigma).epsilon(0.02));
}

TEST_CASE("forecast intervals nest and parallel sampling matches serial") {
    LdssModel m = scalar_model(0.35, 4, 1, 0, 0.1, 1.0, 0.4);
    m.W[1](0, 0) = -0.3;
    TimeSeriesMatrix X = simulate_ldss(m, 256, 2122);
    ForecastDistribution fc = ldss_forecast(m, X, 12, 400, 3, 1);
    for (int h = 0; h < fc.horizon; ++h) {
        CHECK(fc.intervals[0].lo(h, 0) >= fc.intervals[1].lo(h, 0));
        CHECK(fc.intervals[1].lo(h, 0) >= fc.intervals[2].lo(h, 0));
        CHECK(fc.intervals[0].hi(h, 0) <= fc.intervals[1].hi(h, 0));
        CHECK(fc.intervals[1].hi(h, 0) <= fc.intervals[2].hi(h, 0));
    }
    ForecastDistribution fc_par = ldss_forecast(m, X, 12, 400, 3, 4);
    CHECK((fc.mean - fc_par.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(ldss_forecast(m, X, 0, 10, 1), std::invalid_argument);
}

TEST_CASE("coverage is calibrated for a correctly specified model") {
    LdssModel m = scalar_model(0.25, 4, 1, 0, 0.0, 1.0, 0.5);
    m.W[1](0, 0) = -0.35;
    TimeSeriesMatrix X = simulate_ldss(m, 2000, 616);
    double cp = coverage_percentage(X, m, 95.45);
    CHECK(cp >= 93.5);
    CHECK(cp <= 97.5);
    CHECK(coverage_percentage(X, m, 100.0) == 100.0);
    CHECK_THROWS_AS(coverage_percentage(TimeSeriesMatrix(0, 1), m, 95.0), std::invalid_argument);
}

TEST_CASE("diagonal multivariate model factorizes over components") {
    LdssModel a = scalar_model(0.2, 4, 1, 0, 0.3, 1.0, 0.4);
    a.W[1](0, 0) = -0.3;
    LdssModel b = scalar_model(-0.1, 4, 1, 0, -0.5, 0.7, 0.2);
    b.W[1](0, 0) = 0.25;

    LdssModel joint = scalar_model(0.0, 4, 1, 0, 0.0, 1.0, 1.0);
    joint.d = VectorXd(2);
    joint.d << 0.2, -0.1;
    joint.mu = VectorXd(2);
    joint.mu << 0.3, -0.5;
    joint.sigma_eps = VectorXd({{1.0, 0.49}}).asDiagonal();
    joint.sigma_h = VectorXd({{0.16, 0.04}}).asDiagonal();
    joint.U = MatrixXd::Identity(2, 2);
    joint.W = {MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2)};
    joint.W[1](0, 0) = -0.3;
    joint.W[1](1, 1) = 0.25;
    joint.V = {MatrixXd::Identity(2, 2)};

    TimeSeriesMatrix Xa = simulate_ldss(a, 64, 10);
    TimeSeriesMatrix Xb = simulate_ldss(b, 64, 11);
    TimeSeriesMatrix X(64, 2);
    X.col(0) = Xa.col(0);
    X.col(1) = Xb.col(0);

    double sum = kalman_filter(a.to_state_space(), Xa).loglik + kalman_filter(b.to_state_space(), Xb).loglik;
    double whole = kalman_filter(joint.to_state_space(), X).loglik;
    CHECK(whole == doctest::Approx(sum).epsilon(1e-10));
}

TEST_CASE("long-memory forecaster beats a short-memory AR(1) baseline at long horizons") {
    const int T = 1 << 10, horizon = 12;
    double mse_ldss = 0.0, mse_ar1 = 0.0;
    int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        SourceSpec src{1, Marginal::gaussian, 0.0, 40000 + static_cast<std::uint64_t>(s)};
        TimeSeriesMatrix full =
            gen_arise(VectorXd::Constant(1, 0.3), gen_source(src, 2 * (T + horizon)), T + horizon);
        TimeSeriesMatrix train = full.topRows(T);
        TimeSeriesMatrix test = full.bottomRows(horizon);

        LdssFitConfig cfg;
        cfg.p = 0;
        cfg.q = 0;
        cfg.fix_d = VectorXd::Constant(1, 0.3);
        LdssModel model = ldss_fit(train, cfg);
        ForecastDistribution fc = ldss_forecast(model, train, horizon, 500, 2);
        for (int h = 0; h < horizon; ++h) mse_ldss += std::pow(fc.mean(h, 0) - test(h, 0), 2);

        // Yule-Walker AR(1) baseline with iterated plug-in forecasts
        std::vector<double> v(train.col(0).data(), train.col(0).data() + T);
        double mean = oracle::sample_mean(v);
        double rho = oracle::autocovariance(v, 1) / oracle::autocovariance(v, 0);
        double level = train(T - 1, 0) - mean;
        for (int h = 0; h < horizon; ++h) {
            level *= rho;
            mse_ar1 += std::pow(mean + level - test(h, 0), 2);
        }
    }
    CHECK(mse_ldss < mse_ar1);
}
