#include "arise/estimators.hpp"

#include "arise/optimize.hpp"

#include <cmath>
#include <limits>

namespace arise {

EstimatorMethod method_from_string(const std::string& name) {
    if (name == "ase") return EstimatorMethod::ase;
    if (name == "gse") return EstimatorMethod::gse;
    if (name == "tse") return EstimatorMethod::tse;
    throw std::invalid_argument("unknown estimator method: " + name);
}

std::string method_to_string(EstimatorMethod m) {
    switch (m) {
        case EstimatorMethod::ase: return "ase";
        case EstimatorMethod::gse: return "gse";
        case EstimatorMethod::tse: return "tse";
    }
    return "?";
}

int EstimatorConfig::resolve_bandwidth(int T) const {
    int m = bandwidth > 0 ? bandwidth : static_cast<int>(std::floor(std::pow(T, 0.65)));
    return std::min(m, T / 2);
}

namespace {

// Contiguous per-frequency entry views so the objective stays allocation-free.
struct SpectrumView {
    int m = 0;
    int l = 0;
    std::vector<double> log_lambda;             // log lambda_j
    std::vector<double> half_pi_minus_lambda;   // (pi - lambda_j) / 2
    std::vector<Complex> entries;               // entries[(j * l + p) * l + q]
    double sum_log_lambda = 0.0;

    explicit SpectrumView(const SpectralMatrixSeries& spec) {
        m = spec.size();
        l = spec.dim();
        log_lambda.resize(static_cast<std::size_t>(m));
        half_pi_minus_lambda.resize(static_cast<std::size_t>(m));
        entries.resize(static_cast<std::size_t>(m) * l * l);
        for (int j = 0; j < m; ++j) {
            log_lambda[static_cast<std::size_t>(j)] = std::log(spec.lambda[static_cast<std::size_t>(j)]);
            half_pi_minus_lambda[static_cast<std::size_t>(j)] = 0.5 * (kPi - spec.lambda[static_cast<std::size_t>(j)]);
            sum_log_lambda += log_lambda[static_cast<std::size_t>(j)];
            for (int p = 0; p < l; ++p)
                for (int q = 0; q < l; ++q)
                    entries[(static_cast<std::size_t>(j) * l + p) * l + q] = spec.mats[static_cast<std::size_t>(j)](p, q);
        }
    }

    //   [Psi_j(d)^-1 M_j conj(Psi_j(d))^-1]_{pq}
    // = lambda^{d_p+d_q} e^{i (pi-lambda)(d_q-d_p)/2} M_{pq}
    MatrixXd g_hat(const VectorXd& d) const {
        MatrixXd acc = MatrixXd::Zero(l, l);
        for (int j = 0; j < m; ++j) {
            double ll = log_lambda[static_cast<std::size_t>(j)];
            double ph = half_pi_minus_lambda[static_cast<std::size_t>(j)];
            for (int p = 0; p < l; ++p) {
                for (int q = p; q < l; ++q) {
                    double amp = std::exp((d(p) + d(q)) * ll);
                    Complex mpq = entries[(static_cast<std::size_t>(j) * l + p) * l + q];
                    double re;
                    if (p == q) {
                        re = amp * mpq.real();
                    } else {
                        double theta = ph * (d(q) - d(p));
                        re = amp * (std::cos(theta) * mpq.real() - std::sin(theta) * mpq.imag());
                    }
                    acc(p, q) += re;
                }
            }
        }
        acc /= m;
        // Hermitian input makes the mirrored entries equal, so symmetrize by copy.
        for (int p = 0; p < l; ++p)
            for (int q = p + 1; q < l; ++q) acc(q, p) = acc(p, q);
        return acc;
    }
};

double objective_impl(const SpectrumView& view, const VectorXd& d) {
    MatrixXd g = view.g_hat(d);
    Eigen::LLT<MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    double logdet = 0.0;
    for (int i = 0; i < g.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
    if (!std::isfinite(logdet)) return std::numeric_limits<double>::infinity();
    return logdet - (2.0 / view.m) * d.sum() * view.sum_log_lambda;
}

std::vector<VectorXd> build_starts(const EstimatorConfig& config, const SpectrumView& view) {
    const int l = view.l;
    std::vector<VectorXd> starts;
    if (l <= 2) {
        // 9^l grid over the box.
        int nper = config.grid_starts;
        std::vector<double> axis(static_cast<std::size_t>(nper));
        for (int i = 0; i < nper; ++i)
            axis[static_cast<std::size_t>(i)] =
                config.search_lo + (config.search_hi - config.search_lo) * (i + 0.5) / nper;
        if (l == 1) {
            for (double a : axis) starts.push_back(VectorXd::Constant(1, a));
        } else {
            for (double a : axis)
                for (double b : axis) {
                    VectorXd s(2);
                    s << a, b;
                    starts.push_back(s);
                }
        }
        return starts;
    }
    // Coordinate-wise univariate warm start: scan each component's marginal
    // Whittle objective on its own diagonal entry series.
    VectorXd warm = VectorXd::Zero(l);
    const int nscan = 49;
    for (int i = 0; i < l; ++i) {
        double best_v = std::numeric_limits<double>::infinity();
        double best_d = 0.0;
        for (int s = 0; s < nscan; ++s) {
            double di = config.search_lo + (config.search_hi - config.search_lo) * (s + 0.5) / nscan;
            double acc = 0.0;
            for (int j = 0; j < view.m; ++j) {
                double ll = view.log_lambda[static_cast<std::size_t>(j)];
                acc += std::exp(2.0 * di * ll) *
                       view.entries[(static_cast<std::size_t>(j) * view.l + i) * view.l + i].real();
            }
            double v = std::log(acc / view.m) - (2.0 / view.m) * di * view.sum_log_lambda;
            if (v < best_v) {
                best_v = v;
                best_d = di;
            }
        }
        warm(i) = best_d;
    }
    starts.push_back(warm);
    starts.push_back(VectorXd::Zero(l));
    return starts;
}

MemoryEstimate finalize(const SpectrumView& view, const OptimResult& opt, EstimatorMethod method, int T) {
    MemoryEstimate est;
    est.d_hat = opt.x;
    est.g_hat = view.g_hat(opt.x);
    est.objective_value = opt.value;
    est.method = method;
    est.m = view.m;
    est.T = T;
    MatrixXd sigma = asymptotic_sigma(est.g_hat);
    est.sigma = sigma.inverse() / view.m;
    return est;
}

} // namespace

MatrixXd g_hat(const VectorXd& d, const SpectralMatrixSeries& spec) {
    return SpectrumView(spec).g_hat(d);
}

double ase_objective(const VectorXd& d, const SpectralMatrixSeries& spec) {
    return objective_impl(SpectrumView(spec), d);
}

MatrixXd asymptotic_sigma(const MatrixXd& G) {
    if (std::abs(G.determinant()) < 1e-300) throw std::invalid_argument("asymptotic_sigma: singular G");
    MatrixXd g_inv = G.inverse();
    const int l = static_cast<int>(G.rows());
    MatrixXd sigma(l, l);
    for (int p = 0; p < l; ++p)
        for (int q = 0; q < l; ++q)
            sigma(p, q) = 0.5 * (4.0 + kPi * kPi) * G(p, q) * g_inv(p, q) + 0.5 * (4.0 - kPi * kPi);
    return sigma;
}

MemoryEstimate estimate_from_spectrum(const SpectralMatrixSeries& spec, const EstimatorConfig& config,
                                      EstimatorMethod method) {
    if (!(config.search_lo < config.search_hi) || config.search_lo <= -0.5 || config.search_hi >= 0.5)
        throw std::invalid_argument("estimate: search box must lie inside (-1/2, 1/2)");
    SpectrumView view(spec);
    Objective f = [&view](const VectorXd& d) { return objective_impl(view, d); };

    const int l = view.l;
    VectorXd lower = VectorXd::Constant(l, config.search_lo);
    VectorXd upper = VectorXd::Constant(l, config.search_hi);
    NelderMeadOptions nm;
    nm.tolerance = config.tolerance;
    OptimResult opt = config.optimizer == BoxOptimizer::nelder_mead_multistart
                          ? multistart_nelder_mead(f, build_starts(config, view), lower, upper, nm,
                                                   config.threads)
                          : multistart_projected_gradient(f, build_starts(config, view), lower, upper, nm,
                                                          config.threads);
    if (!opt.converged)
        throw EstimationError("estimate: optimizer exhausted its iteration budget",
                              finalize(view, opt, method, spec.T));
    return finalize(view, opt, method, spec.T);
}

MemoryEstimate estimate(const TimeSeriesMatrix& X, const EstimatorConfig& config, EstimatorMethod method) {
    const int T = static_cast<int>(X.rows());
    if (T < 64) throw std::invalid_argument("estimate: T must be >= 64");
    for (int i = 0; i < X.cols(); ++i) {
        double var = (X.col(i).array() - X.col(i).mean()).square().sum();
        if (!(var > 0.0)) throw std::invalid_argument("estimate: zero-variance component");
    }

    const int m = config.resolve_bandwidth(T);
    std::vector<int> freqs;
    for (int j = 1; j <= m; ++j) freqs.push_back(j);

    SpectralTag backend = SpectralTag::wavelet;
    switch (method) {
        case EstimatorMethod::ase: backend = SpectralTag::wavelet; break;
        case EstimatorMethod::gse: backend = SpectralTag::periodogram; break;
        case EstimatorMethod::tse: backend = SpectralTag::tapered; break;
    }
    if (config.backend_override) backend = *config.backend_override;

    SpectralMatrixSeries spec;
    switch (backend) {
        case SpectralTag::wavelet: {
            WaveletSpectrumOptions w = config.wavelet;
            w.threads = config.threads;
            spec = wavelet_spectrum(X, freqs, w);
            break;
        }
        case SpectralTag::periodogram: spec = periodogram(X, freqs); break;
        case SpectralTag::tapered: spec = tapered_periodogram(X, freqs); break;
    }
    return estimate_from_spectrum(spec, config, method);
}

} // namespace arise
