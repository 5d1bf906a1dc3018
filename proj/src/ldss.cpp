#include "arise/ldss.hpp"

#include "arise/distributions.hpp"
#include "arise/fracdiff.hpp"
#include "arise/rng.hpp"
#include "arise/simulate.hpp"
#include "arise/threading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace arise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Discrete Lyapunov solve P = T P T' + Q by doubling; requires spectral radius < 1.
MatrixXd solve_lyapunov(const MatrixXd& T, const MatrixXd& Q) {
    MatrixXd P = Q;
    MatrixXd A = T;
    for (int it = 0; it < 64; ++it) {
        MatrixXd next = P + A * P * A.transpose();
        A = A * A;
        double delta = (next - P).norm();
        P = next;
        if (delta <= 1e-14 * (1.0 + P.norm()) && A.norm() < 1e-14) break;
        if (A.norm() < 1e-300) break;
    }
    return 0.5 * (P + P.transpose());
}

// Symmetric square root with negative eigenvalues clipped to zero.
MatrixXd psd_sqrt(const MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (m + m.transpose()));
    VectorXd vals = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * vals.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
}

double type7_quantile(std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    double pos = p * static_cast<double>(n - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo >= n - 1) return sorted[n - 1];
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

} // namespace

std::vector<MatrixXd> LdssModel::composed_ar() const {
    const int l = dim();
    // D_b = diag over components of the b-th truncated (1-B)^{d_i} coefficient.
    std::vector<VectorXd> frac(static_cast<std::size_t>(k) + 1, VectorXd::Zero(l));
    for (int i = 0; i < l; ++i) {
        FracCoeffs c = frac_coeffs(d(i), k, FracDirection::difference);
        for (int b = 0; b <= k; ++b) frac[static_cast<std::size_t>(b)](i) = c.coeffs[static_cast<std::size_t>(b)];
    }
    std::vector<MatrixXd> A(static_cast<std::size_t>(k + p) + 1, MatrixXd::Zero(l, l));
    for (int a = 0; a <= p; ++a)
        for (int b = 0; b <= k; ++b)
            A[static_cast<std::size_t>(a + b)] += W[static_cast<std::size_t>(a)] * frac[static_cast<std::size_t>(b)].asDiagonal();
    return A;
}

double LdssModel::composed_spectral_radius() const { return companion_spectral_radius(composed_ar()); }

StateSpace LdssModel::to_state_space() const {
    const int l = dim();
    const int ra = std::max(k + p, 1);
    const int n = l * (ra + q);

    std::vector<MatrixXd> A = composed_ar();
    MatrixXd a0_inv = A.front().inverse();
    const int order = static_cast<int>(A.size()) - 1;

    StateSpace ss;
    ss.T = MatrixXd::Zero(n, n);
    for (int s = 1; s <= order; ++s)
        ss.T.block(0, (s - 1) * l, l, l) = -a0_inv * A[static_cast<std::size_t>(s)];
    if (ra > 1)
        ss.T.block(l, 0, (ra - 1) * l, (ra - 1) * l) = MatrixXd::Identity((ra - 1) * l, (ra - 1) * l);
    for (int j = 1; j <= q; ++j)
        ss.T.block(0, (ra + j - 1) * l, l, l) = a0_inv * V[static_cast<std::size_t>(j)];
    if (q > 1)
        ss.T.block((ra + 1) * l, ra * l, (q - 1) * l, (q - 1) * l) =
            MatrixXd::Identity((q - 1) * l, (q - 1) * l);

    ss.R = MatrixXd::Zero(n, l);
    ss.R.block(0, 0, l, l) = a0_inv * V.front();
    if (q > 0) ss.R.block(ra * l, 0, l, l) = MatrixXd::Identity(l, l);
    ss.Q = sigma_eps;
    ss.c = ss.R * mu;

    ss.Z = MatrixXd::Zero(l, n);
    ss.Z.block(0, 0, l, l) = U;
    ss.H = sigma_h;

    // Stationary mean per block: a(1) h_bar = psi(1) mu.
    MatrixXd a1_poly = MatrixXd::Zero(l, l);
    for (const auto& m : A) a1_poly += m;
    MatrixXd psi1 = MatrixXd::Zero(l, l);
    for (const auto& m : V) psi1 += m;
    ss.a1 = VectorXd::Zero(n);
    Eigen::FullPivLU<MatrixXd> lu(a1_poly);
    if (lu.isInvertible()) {
        VectorXd h_bar = lu.solve(psi1 * mu);
        for (int b = 0; b < ra; ++b) ss.a1.segment(b * l, l) = h_bar;
    }
    for (int j = 0; j < q; ++j) ss.a1.segment((ra + j) * l, l) = mu;

    bool stationary_ok = init == LdssInit::stationary && composed_spectral_radius() < 1.0 - 1e-6;
    if (stationary_ok) {
        ss.P1 = solve_lyapunov(ss.T, ss.R * ss.Q * ss.R.transpose());
    } else {
        ss.P1 = diffuse_kappa * MatrixXd::Identity(n, n);
    }
    return ss;
}

namespace {

// Free-parameter packing for the scalar (per-component) fit:
// [mu?] [log sig_eps] [w_1..w_p] [v_1..v_q] [log sig_h]
struct ScalarPacking {
    const LdssFitConfig* cfg;
    double d_i;

    int size() const { return (cfg->fit_mu ? 1 : 0) + 1 + cfg->p + cfg->q + 1; }

    LdssModel unpack(const VectorXd& theta) const {
        LdssModel m;
        m.d = VectorXd::Constant(1, d_i);
        m.k = cfg->k;
        m.p = cfg->p;
        m.q = cfg->q;
        m.init = cfg->init;
        m.diffuse_kappa = cfg->diffuse_kappa;
        int at = 0;
        m.mu = VectorXd::Constant(1, cfg->fit_mu ? theta(at++) : 0.0);
        double log_se = theta(at++);
        m.W.assign(static_cast<std::size_t>(cfg->p) + 1, MatrixXd::Identity(1, 1));
        for (int j = 1; j <= cfg->p; ++j) m.W[static_cast<std::size_t>(j)](0, 0) = theta(at++);
        m.V.assign(static_cast<std::size_t>(cfg->q) + 1, MatrixXd::Identity(1, 1));
        for (int j = 1; j <= cfg->q; ++j) m.V[static_cast<std::size_t>(j)](0, 0) = theta(at++);
        double log_sh = theta(at++);
        m.sigma_eps = MatrixXd::Constant(1, 1, std::exp(2.0 * log_se));
        m.sigma_h = MatrixXd::Constant(1, 1, std::exp(2.0 * log_sh));
        m.U = MatrixXd::Identity(1, 1);
        return m;
    }
};

// Joint packing with full W/V matrices and diagonal noise covariances:
// [mu (l)?] [log sig_eps (l)] [vec W_1..W_p] [vec V_1..V_q] [log sig_h (l)]
struct JointPacking {
    const LdssFitConfig* cfg;
    VectorXd d;

    int l() const { return static_cast<int>(d.size()); }
    int size() const {
        int n = l();
        return (cfg->fit_mu ? n : 0) + n + (cfg->p + cfg->q) * n * n + n;
    }

    LdssModel unpack(const VectorXd& theta) const {
        const int n = l();
        LdssModel m;
        m.d = d;
        m.k = cfg->k;
        m.p = cfg->p;
        m.q = cfg->q;
        m.init = cfg->init;
        m.diffuse_kappa = cfg->diffuse_kappa;
        int at = 0;
        m.mu = VectorXd::Zero(n);
        if (cfg->fit_mu)
            for (int i = 0; i < n; ++i) m.mu(i) = theta(at++);
        VectorXd log_se(n);
        for (int i = 0; i < n; ++i) log_se(i) = theta(at++);
        m.W.assign(static_cast<std::size_t>(cfg->p) + 1, MatrixXd::Identity(n, n));
        for (int j = 1; j <= cfg->p; ++j) {
            MatrixXd w(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) w(r, c) = theta(at++);
            m.W[static_cast<std::size_t>(j)] = w;
        }
        m.V.assign(static_cast<std::size_t>(cfg->q) + 1, MatrixXd::Identity(n, n));
        for (int j = 1; j <= cfg->q; ++j) {
            MatrixXd v(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) v(r, c) = theta(at++);
            m.V[static_cast<std::size_t>(j)] = v;
        }
        VectorXd log_sh(n);
        for (int i = 0; i < n; ++i) log_sh(i) = theta(at++);
        m.sigma_eps = (2.0 * log_se).array().exp().matrix().asDiagonal();
        m.sigma_h = (2.0 * log_sh).array().exp().matrix().asDiagonal();
        m.U = MatrixXd::Identity(n, n);
        return m;
    }
};

template <typename Packing>
double negative_loglik(const Packing& pack, const VectorXd& theta, const TimeSeriesMatrix& X) {
    for (int i = 0; i < theta.size(); ++i)
        if (!std::isfinite(theta(i)) || std::abs(theta(i)) > 40.0) return kInf;
    LdssModel m = pack.unpack(theta);
    if (m.composed_spectral_radius() >= 1.0 + 1e-6) return kInf;
    FilterResult f = kalman_filter(m.to_state_space(), X);
    return std::isfinite(f.loglik) ? -f.loglik : kInf;
}

std::string theta_to_string(const VectorXd& theta) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < theta.size(); ++i) os << (i ? ", " : "") << theta(i);
    os << "]";
    return os.str();
}

// Start values: mu from the sample mean, sigma_eps from the residual scale of
// the composed filter, sigma_h at a fraction of it, ARMA coefficients at zero.
VectorXd scalar_start(const LdssFitConfig& cfg, double d_i, const VectorXd& x) {
    FracCoeffs frac = frac_coeffs(d_i, cfg.k, FracDirection::difference);
    VectorXd resid = apply_fracdiff(VectorXd(x.array() - x.mean()), frac);
    double sd = std::sqrt(resid.squaredNorm() / std::max<int>(1, static_cast<int>(resid.size()) - 1));
    if (!(sd > 0.0)) sd = 1.0;
    double frac_sum = 0.0;
    for (double c : frac.coeffs) frac_sum += c;
    VectorXd theta(VectorXd::Zero((cfg.fit_mu ? 1 : 0) + 1 + cfg.p + cfg.q + 1));
    int at = 0;
    if (cfg.fit_mu) theta(at++) = x.mean() * frac_sum;
    theta(at++) = std::log(0.9 * sd);
    at += cfg.p + cfg.q;
    theta(at) = std::log(0.3 * sd);
    return theta;
}

LdssModel fit_scalar(const TimeSeriesMatrix& X, int component, double d_i, const LdssFitConfig& cfg) {
    ScalarPacking pack{&cfg, d_i};
    VectorXd x = X.col(component);
    TimeSeriesMatrix xm = x;
    Objective f = [&](const VectorXd& theta) { return negative_loglik(pack, theta, xm); };
    VectorXd start = scalar_start(cfg, d_i, x);
    if (!std::isfinite(f(start)))
        throw std::runtime_error("ldss_fit: non-finite likelihood at theta = " + theta_to_string(start));
    OptimResult opt = quasi_newton(f, start, cfg.optim);
    LdssModel m = pack.unpack(opt.x);
    m.loglik = -opt.value;
    return m;
}

} // namespace

LdssModel ldss_fit(const TimeSeriesMatrix& X, const LdssFitConfig& config) {
    const int T = static_cast<int>(X.rows());
    const int l = static_cast<int>(X.cols());
    if (config.p < 0 || config.p > 2 || config.q < 0 || config.q > 2)
        throw std::invalid_argument("ldss_fit: p and q must lie in 0..2");
    if (config.k < 0) throw std::invalid_argument("ldss_fit: k must be >= 0");

    VectorXd d;
    if (config.fix_d) {
        if (config.fix_d->size() != l) throw std::invalid_argument("ldss_fit: fix_d dimension mismatch");
        d = *config.fix_d;
    } else {
        d = estimate(X, config.estimator, EstimatorMethod::ase).d_hat;
    }

    const int state_dim = l * (std::max(config.k + config.p, 1) + config.q);
    if (T <= state_dim) throw std::invalid_argument("ldss_fit: series shorter than the state dimension");

    if (config.diagonal) {
        // Diagonal blocks decouple the components; fit each one independently.
        std::vector<LdssModel> parts(static_cast<std::size_t>(l));
        const int threads = effective_threads(config.threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (l > 1)
        for (int i = 0; i < l; ++i)
            parts[static_cast<std::size_t>(i)] = fit_scalar(X, i, d(i), config);

        LdssModel m;
        m.d = d;
        m.k = config.k;
        m.p = config.p;
        m.q = config.q;
        m.init = config.init;
        m.diffuse_kappa = config.diffuse_kappa;
        m.mu = VectorXd::Zero(l);
        m.sigma_eps = MatrixXd::Zero(l, l);
        m.sigma_h = MatrixXd::Zero(l, l);
        m.U = MatrixXd::Identity(l, l);
        m.W.assign(static_cast<std::size_t>(config.p) + 1, MatrixXd::Identity(l, l));
        m.V.assign(static_cast<std::size_t>(config.q) + 1, MatrixXd::Identity(l, l));
        for (int j = 1; j <= config.p; ++j) m.W[static_cast<std::size_t>(j)].setZero();
        for (int j = 1; j <= config.q; ++j) m.V[static_cast<std::size_t>(j)].setZero();
        m.loglik = 0.0;
        for (int i = 0; i < l; ++i) {
            const LdssModel& s = parts[static_cast<std::size_t>(i)];
            m.mu(i) = s.mu(0);
            m.sigma_eps(i, i) = s.sigma_eps(0, 0);
            m.sigma_h(i, i) = s.sigma_h(0, 0);
            for (int j = 1; j <= config.p; ++j) m.W[static_cast<std::size_t>(j)](i, i) = s.W[static_cast<std::size_t>(j)](0, 0);
            for (int j = 1; j <= config.q; ++j) m.V[static_cast<std::size_t>(j)](i, i) = s.V[static_cast<std::size_t>(j)](0, 0);
            m.loglik += s.loglik;
        }
        return m;
    }

    JointPacking pack{&config, d};
    Objective f = [&](const VectorXd& theta) { return negative_loglik(pack, theta, X); };
    VectorXd start = VectorXd::Zero(pack.size());
    for (int i = 0; i < l; ++i) {
        VectorXd s = scalar_start(config, d(i), VectorXd(X.col(i)));
        if (config.fit_mu) start(i) = s(0);
        start((config.fit_mu ? l : 0) + i) = s(config.fit_mu ? 1 : 0);
        start(pack.size() - l + i) = s(s.size() - 1);
    }
    if (!std::isfinite(f(start)))
        throw std::runtime_error("ldss_fit: non-finite likelihood at theta = " + theta_to_string(start));
    OptimResult opt = quasi_newton(f, start, config.optim);
    LdssModel m = pack.unpack(opt.x);
    m.loglik = -opt.value;
    return m;
}

ForecastDistribution ldss_forecast(const LdssModel& model, const TimeSeriesMatrix& X, int horizon,
                                   int K, std::uint64_t seed, int threads) {
    if (horizon < 1) throw std::invalid_argument("ldss_forecast: horizon must be >= 1");
    if (K < 1) throw std::invalid_argument("ldss_forecast: K must be >= 1");
    const int l = model.dim();
    if (static_cast<int>(X.cols()) != l) throw std::invalid_argument("ldss_forecast: dimension mismatch");

    StateSpace ss = model.to_state_space();
    FilterResult filt = kalman_filter(ss, X);
    if (!filt.filtered_mean.allFinite())
        throw std::runtime_error("ldss_forecast: filter diverged on the conditioning series");

    const MatrixXd post_sqrt = psd_sqrt(filt.filtered_cov);
    const MatrixXd eps_sqrt = psd_sqrt(ss.Q);
    const MatrixXd obs_sqrt = psd_sqrt(ss.H);
    const int n = ss.state_dim();

    ForecastDistribution out;
    out.horizon = horizon;
    out.K = K;
    out.samples.assign(static_cast<std::size_t>(K), TimeSeriesMatrix(horizon, l));

    const int n_threads = effective_threads(threads);
#pragma omp parallel for schedule(static) num_threads(n_threads)
    for (int path = 0; path < K; ++path) {
        Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(path)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        auto draw = [&](int dim) {
            VectorXd z(dim);
            for (int i = 0; i < dim; ++i) z(i) = gauss(rng);
            return z;
        };
        VectorXd alpha = filt.filtered_mean + post_sqrt * draw(n);
        TimeSeriesMatrix& dst = out.samples[static_cast<std::size_t>(path)];
        for (int h = 0; h < horizon; ++h) {
            alpha = ss.c + ss.T * alpha + ss.R * (eps_sqrt * draw(l));
            dst.row(h) = (ss.Z * alpha + obs_sqrt * draw(l)).transpose();
        }
    }

    out.mean = TimeSeriesMatrix::Zero(horizon, l);
    for (const auto& s : out.samples) out.mean += s;
    out.mean /= K;

    for (double pct : {68.27, 95.45, 99.73}) {
        ForecastInterval iv;
        iv.percentile = pct;
        iv.lo.resize(horizon, l);
        iv.hi.resize(horizon, l);
        double tail = (1.0 - pct / 100.0) / 2.0;
        std::vector<double> vals(static_cast<std::size_t>(K));
        for (int h = 0; h < horizon; ++h) {
            for (int i = 0; i < l; ++i) {
                for (int kk = 0; kk < K; ++kk) vals[static_cast<std::size_t>(kk)] = out.samples[static_cast<std::size_t>(kk)](h, i);
                std::sort(vals.begin(), vals.end());
                iv.lo(h, i) = type7_quantile(vals, tail);
                iv.hi(h, i) = type7_quantile(vals, 1.0 - tail);
            }
        }
        out.intervals.push_back(std::move(iv));
    }
    return out;
}

double coverage_percentage(const TimeSeriesMatrix& truth, const LdssModel& model, double percentile) {
    if (truth.rows() < 1) throw std::invalid_argument("coverage_percentage: empty truth");
    if (!(percentile > 0.0 && percentile <= 100.0))
        throw std::invalid_argument("coverage_percentage: percentile must lie in (0, 100]");
    if (percentile >= 100.0) return 100.0;

    StateSpace ss = model.to_state_space();
    FilterResult filt = kalman_filter(ss, truth);
    const double z = normal_quantile(0.5 + percentile / 200.0);
    long long inside = 0, total = 0;
    for (int t = 0; t < truth.rows(); ++t) {
        for (int i = 0; i < truth.cols(); ++i) {
            double half = z * std::sqrt(std::max(filt.pred_var(t, i), 0.0));
            if (std::abs(truth(t, i) - filt.pred_mean(t, i)) <= half) ++inside;
            ++total;
        }
    }
    return 100.0 * static_cast<double>(inside) / static_cast<double>(total);
}

} // namespace arise
