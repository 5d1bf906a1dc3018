#include "arise/simulate.hpp"

#include "arise/distributions.hpp"
#include "arise/fracdiff.hpp"
#include "arise/rng.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace arise {

Marginal marginal_from_string(const std::string& name) {
    if (name == "gaussian") return Marginal::gaussian;
    if (name == "t3") return Marginal::student_t3;
    if (name == "t7") return Marginal::student_t7;
    if (name == "logistic") return Marginal::standard_logistic;
    if (name == "sech") return Marginal::hyperbolic_secant;
    throw std::invalid_argument("unknown marginal: " + name);
}

std::string marginal_to_string(Marginal m) {
    switch (m) {
        case Marginal::gaussian: return "gaussian";
        case Marginal::student_t3: return "t3";
        case Marginal::student_t7: return "t7";
        case Marginal::standard_logistic: return "logistic";
        case Marginal::hyperbolic_secant: return "sech";
    }
    return "?";
}

namespace {

double marginal_sd(Marginal m) {
    switch (m) {
        case Marginal::gaussian: return 1.0;
        case Marginal::student_t3: return std::sqrt(3.0);       // nu/(nu-2)
        case Marginal::student_t7: return std::sqrt(7.0 / 5.0);
        case Marginal::standard_logistic: return kPi / std::sqrt(3.0);
        case Marginal::hyperbolic_secant: return 1.0;
    }
    return 1.0;
}

double marginal_inverse_cdf(Marginal m, double u) {
    switch (m) {
        case Marginal::gaussian: return normal_quantile(u);
        case Marginal::student_t3: return student_t_quantile(u, 3.0);
        case Marginal::student_t7: return student_t_quantile(u, 7.0);
        case Marginal::standard_logistic: return std::log(u / (1.0 - u));
        case Marginal::hyperbolic_secant: return (2.0 / kPi) * std::log(std::tan(kPi * u / 2.0));
    }
    return 0.0;
}

} // namespace

TimeSeriesMatrix gen_source(const SourceSpec& spec, int T) {
    if (T < 1) throw std::invalid_argument("gen_source: T must be >= 1");
    if (spec.l < 1) throw std::invalid_argument("gen_source: l must be >= 1");
    const int l = spec.l;
    const double tau = spec.copula_corr;
    double lo = (l >= 2) ? -1.0 / (l - 1.0) : -1.0;
    if (!(tau > lo && tau < 1.0))
        throw std::invalid_argument("gen_source: copula correlation leaves the matrix indefinite");

    MatrixXd corr = MatrixXd::Constant(l, l, tau);
    corr.diagonal().setOnes();
    Eigen::LLT<MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("gen_source: copula correlation matrix not positive definite");
    MatrixXd chol = llt.matrixL();

    Rng rng = make_rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    TimeSeriesMatrix out(T, l);
    VectorXd z(l);
    const double sd = marginal_sd(spec.marginal);
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < l; ++i) z(i) = gauss(rng);
        VectorXd zc = chol * z;
        for (int i = 0; i < l; ++i) {
            if (spec.marginal == Marginal::gaussian) {
                out(t, i) = zc(i);
                continue;
            }
            double u = normal_cdf(zc(i));
            // Guard the open interval; |z| beyond ~8.2 underflows the CDF.
            u = std::min(std::max(u, 1e-16), 1.0 - 1e-16);
            out(t, i) = marginal_inverse_cdf(spec.marginal, u) / sd;
        }
    }
    return out;
}

void ArmaSpec::validate() const {
    if (W.empty() || V.empty()) throw std::invalid_argument("ArmaSpec: W_0 and V_0 required");
    const int l = dim();
    for (const auto& m : W)
        if (m.rows() != l || m.cols() != l) throw std::invalid_argument("ArmaSpec: ragged W");
    for (const auto& m : V)
        if (m.rows() != l || m.cols() != l) throw std::invalid_argument("ArmaSpec: ragged V");
    if (std::abs(W.front().determinant()) < 1e-12 || std::abs(V.front().determinant()) < 1e-12)
        throw std::invalid_argument("ArmaSpec: W_0 and V_0 must be invertible");
    if (companion_spectral_radius(W) >= 1.0)
        throw std::invalid_argument("ArmaSpec: phi companion spectral radius must be < 1");
    if (companion_spectral_radius(V) >= 1.0)
        throw std::invalid_argument("ArmaSpec: psi companion spectral radius must be < 1");
}

double companion_spectral_radius(const std::vector<MatrixXd>& coeffs) {
    const int order = static_cast<int>(coeffs.size()) - 1;
    if (order <= 0) return 0.0;
    const int l = static_cast<int>(coeffs.front().rows());
    MatrixXd lead_inv = coeffs.front().inverse();
    const int n = order * l;
    MatrixXd companion = MatrixXd::Zero(n, n);
    for (int k = 1; k <= order; ++k)
        companion.block(0, (k - 1) * l, l, l) = -lead_inv * coeffs[static_cast<std::size_t>(k)];
    if (order > 1)
        companion.block(l, 0, n - l, n - l) = MatrixXd::Identity(n - l, n - l);
    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

TimeSeriesMatrix gen_arise(const VectorXd& d, const TimeSeriesMatrix& source, int burn_in) {
    const int total = static_cast<int>(source.rows());
    const int l = static_cast<int>(source.cols());
    if (d.size() != l) throw std::invalid_argument("gen_arise: dimension mismatch");
    if (burn_in < 0 || burn_in >= total) throw std::invalid_argument("gen_arise: invalid burn_in");
    for (int i = 0; i < l; ++i)
        if (!(std::abs(d(i)) < 0.5)) throw std::invalid_argument("gen_arise: |d_i| must be < 1/2");

    const int T = total - burn_in;
    TimeSeriesMatrix out(T, l);
    for (int i = 0; i < l; ++i) {
        FracCoeffs c = frac_coeffs(d(i), total - 1, FracDirection::inverse);
        Eigen::VectorXd filtered = apply_fracdiff(Eigen::VectorXd(source.col(i)), c);
        out.col(i) = filtered.tail(T);
    }
    return out;
}

TimeSeriesMatrix gen_arise_arma(const VectorXd& d, const ArmaSpec& arma, int T, int burn_in,
                                std::uint64_t seed) {
    arma.validate();
    const int l = arma.dim();
    if (d.size() != l) throw std::invalid_argument("gen_arise_arma: dimension mismatch");
    if (T < 1) throw std::invalid_argument("gen_arise_arma: T must be >= 1");
    const int total = T + burn_in;
    const int p = arma.p();
    const int q = arma.q();

    Rng rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TimeSeriesMatrix eps(total, l);
    for (int t = 0; t < total; ++t)
        for (int i = 0; i < l; ++i) eps(t, i) = gauss(rng);

    MatrixXd w0_inv = arma.W.front().inverse();
    TimeSeriesMatrix zeta(total, l);
    for (int t = 0; t < total; ++t) {
        VectorXd u = arma.V.front() * eps.row(t).transpose();
        for (int k = 1; k <= q && t - k >= 0; ++k)
            u += arma.V[static_cast<std::size_t>(k)] * eps.row(t - k).transpose();
        for (int k = 1; k <= p && t - k >= 0; ++k)
            u -= arma.W[static_cast<std::size_t>(k)] * zeta.row(t - k).transpose();
        zeta.row(t) = (w0_inv * u).transpose();
    }
    return gen_arise(d, zeta, burn_in);
}

namespace {

Eigen::Vector3d lorenz_rhs(const Eigen::Vector3d& s, const LorenzParams& p) {
    return {p.a * (s.y() - s.x()), s.x() * (p.b - s.z()) - s.y(), s.x() * s.y() - p.c * s.z()};
}

} // namespace

TimeSeriesMatrix gen_lorenz(int T, double dt, const Eigen::Vector3d& init, const LorenzParams& params) {
    if (T < 1) throw std::invalid_argument("gen_lorenz: T must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("gen_lorenz: dt must be > 0");
    TimeSeriesMatrix out(T, 3);
    Eigen::Vector3d s = init;
    for (int t = 0; t < T; ++t) {
        Eigen::Vector3d k1 = lorenz_rhs(s, params);
        Eigen::Vector3d k2 = lorenz_rhs(s + 0.5 * dt * k1, params);
        Eigen::Vector3d k3 = lorenz_rhs(s + 0.5 * dt * k2, params);
        Eigen::Vector3d k4 = lorenz_rhs(s + dt * k3, params);
        s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.row(t) = s.transpose();
    }
    return out;
}

} // namespace arise
