#include "arise/spectral.hpp"

#include "arise/fft.hpp"
#include "arise/threading.hpp"

#include <cmath>
#include <stdexcept>

namespace arise {

std::vector<int> full_grid(int T) {
    std::vector<int> freqs;
    for (int j = 1; j <= T / 2; ++j) freqs.push_back(j);
    return freqs;
}

namespace {

void check_freqs(int T, const std::vector<int>& freqs) {
    if (T < 2) throw std::invalid_argument("periodogram: T must be >= 2");
    for (int j : freqs)
        if (j < 1 || j > T / 2) throw std::invalid_argument("periodogram: frequency index out of range");
}

// Column-wise DFT values W_p(j) = sum_t x_p(t) e^{i t lambda_j}.
std::vector<std::vector<Complex>> column_dfts(const TimeSeriesMatrix& X) {
    const int T = static_cast<int>(X.rows());
    const int l = static_cast<int>(X.cols());
    std::vector<std::vector<Complex>> w(static_cast<std::size_t>(l));
    for (int p = 0; p < l; ++p) {
        std::vector<Complex> col(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) col[static_cast<std::size_t>(t)] = Complex(X(t, p), 0.0);
        w[static_cast<std::size_t>(p)] = dft_forward(col);
    }
    return w;
}

SpectralMatrixSeries outer_products(const std::vector<std::vector<Complex>>& w, int T, int l,
                                    const std::vector<int>& freqs, double scale, SpectralTag tag) {
    SpectralMatrixSeries out;
    out.T = T;
    out.tag = tag;
    out.index = freqs;
    out.lambda.reserve(freqs.size());
    out.mats.reserve(freqs.size());
    for (int j : freqs) {
        out.lambda.push_back(2.0 * kPi * j / T);
        MatrixXcd m(l, l);
        for (int p = 0; p < l; ++p)
            for (int q = 0; q < l; ++q)
                m(p, q) = w[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)] *
                          std::conj(w[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)]) * scale;
        out.mats.push_back(std::move(m));
    }
    return out;
}

TimeSeriesMatrix center_columns(const TimeSeriesMatrix& X) {
    TimeSeriesMatrix c = X;
    c.rowwise() -= X.colwise().mean();
    return c;
}

} // namespace

SpectralMatrixSeries periodogram(const TimeSeriesMatrix& X, const std::vector<int>& freqs) {
    const int T = static_cast<int>(X.rows());
    const int l = static_cast<int>(X.cols());
    check_freqs(T, freqs);
    TimeSeriesMatrix c = center_columns(X);
    auto w = column_dfts(c);
    return outer_products(w, T, l, freqs, 1.0 / (2.0 * kPi * T), SpectralTag::periodogram);
}

SpectralMatrixSeries tapered_periodogram(const TimeSeriesMatrix& X, const std::vector<int>& freqs) {
    const int T = static_cast<int>(X.rows());
    const int l = static_cast<int>(X.cols());
    check_freqs(T, freqs);
    TimeSeriesMatrix c = center_columns(X);

    // hbar(t) = (1 - cos(2 pi t / T)) / 2 for t = 1..T, normalized to unit energy.
    VectorXd taper(T);
    for (int t = 1; t <= T; ++t) taper(t - 1) = 0.5 * (1.0 - std::cos(2.0 * kPi * t / T));
    taper /= std::sqrt(taper.squaredNorm());
    c.array().colwise() *= taper.array();

    auto w = column_dfts(c);
    return outer_products(w, T, l, freqs, 1.0 / (2.0 * kPi), SpectralTag::tapered);
}

MatrixXcd psd_repair(const MatrixXcd& m) {
    MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(herm);
    VectorXd vals = eig.eigenvalues();
    double floor = 1e-12 * std::max(vals.maxCoeff(), 0.0);
    for (int i = 0; i < vals.size(); ++i) vals(i) = std::max(vals(i), floor);
    return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
}

SpectralMatrixSeries wavelet_spectrum(const TimeSeriesMatrix& X, const std::vector<int>& freqs,
                                      const WaveletSpectrumOptions& opts) {
    const int T = static_cast<int>(X.rows());
    const int l = static_cast<int>(X.cols());
    check_freqs(T, freqs);
    if (!(opts.adm_C > 0.0) || !(opts.adm_delta > 0.0))
        throw std::invalid_argument("wavelet_spectrum: C and delta must be > 0");

    const std::vector<int> grid = full_grid(T);
    const int m = static_cast<int>(grid.size());
    SpectralMatrixSeries raw = periodogram(X, grid);

    // Smooth each upper-triangular entry's real and imaginary parts; the
    // mirrored entries follow by conjugation since both threshold rules are odd.
    struct Job {
        int p, q;
        bool imag;
    };
    std::vector<Job> jobs;
    for (int p = 0; p < l; ++p)
        for (int q = p; q < l; ++q) {
            jobs.push_back({p, q, false});
            if (q > p) jobs.push_back({p, q, true});
        }

    std::vector<std::vector<double>> smoothed(jobs.size());
    const int threads = effective_threads(opts.threads);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int jidx = 0; jidx < static_cast<int>(jobs.size()); ++jidx) {
        const Job& job = jobs[static_cast<std::size_t>(jidx)];
        std::vector<double> series(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            Complex v = raw.mats[static_cast<std::size_t>(k)](job.p, job.q);
            series[static_cast<std::size_t>(k)] = job.imag ? v.imag() : v.real();
        }
        WaveletCoeffSet coeffs = dwt_forward(series, opts.family, opts.adm_C, opts.adm_delta, T);
        coeffs = compute_thresholds(std::move(coeffs), series, opts.c_scale);
        coeffs = apply_thresholds(std::move(coeffs), opts.rule);
        smoothed[static_cast<std::size_t>(jidx)] = dwt_inverse(coeffs);
    }

    std::vector<MatrixXcd> grid_mats(static_cast<std::size_t>(m), MatrixXcd::Zero(l, l));
    for (std::size_t jidx = 0; jidx < jobs.size(); ++jidx) {
        const Job& job = jobs[jidx];
        for (int k = 0; k < m; ++k) {
            Complex add = job.imag ? Complex(0.0, smoothed[jidx][static_cast<std::size_t>(k)])
                                   : Complex(smoothed[jidx][static_cast<std::size_t>(k)], 0.0);
            grid_mats[static_cast<std::size_t>(k)](job.p, job.q) += add;
            if (job.q > job.p) grid_mats[static_cast<std::size_t>(k)](job.q, job.p) += std::conj(add);
        }
    }

    SpectralMatrixSeries out;
    out.T = T;
    out.tag = SpectralTag::wavelet;
    out.index = freqs;
    out.mats.resize(freqs.size());
    for (int j : freqs) out.lambda.push_back(2.0 * kPi * j / T);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < static_cast<int>(freqs.size()); ++i) {
        const MatrixXcd& mat = grid_mats[static_cast<std::size_t>(freqs[static_cast<std::size_t>(i)] - 1)];
        out.mats[static_cast<std::size_t>(i)] = opts.psd_repair ? psd_repair(mat) : mat;
    }
    return out;
}

} // namespace arise
