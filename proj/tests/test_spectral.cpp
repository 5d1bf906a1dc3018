#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arise/simulate.hpp"
#include "arise/spectral.hpp"
#include "helpers.hpp"

#include <cmath>
#include <vector>

using namespace arise;

namespace {

double ise_against_truth(const SpectralMatrixSeries& spec, double d) {
    // integrated squared error over [lambda_1, pi/2], trapezoid on the grid
    double acc = 0.0;
    int count = 0;
    for (int i = 0; i < spec.size(); ++i) {
        double lam = spec.lambda[static_cast<std::size_t>(i)];
        if (lam > arise::kPi / 2.0) break;
        double diff = spec.mats[static_cast<std::size_t>(i)](0, 0).real() - oracle::arfima_spectrum(d, lam);
        acc += diff * diff;
        ++count;
    }
    return acc * (2.0 * arise::kPi / spec.T);
}

TimeSeriesMatrix arfima_draw(double d, int T, std::uint64_t seed) {
    SourceSpec s{1, Marginal::gaussian, 0.0, seed};
    return gen_arise(VectorXd::Constant(1, d), gen_source(s, 2 * T), T);
}

} // namespace

TEST_CASE("periodogram of zeros is zero and T < 2 is rejected") {
    TimeSeriesMatrix z = TimeSeriesMatrix::Zero(64, 2);
    SpectralMatrixSeries s = periodogram(z, full_grid(64));
    for (const auto& m : s.mats) CHECK(m.cwiseAbs().maxCoeff() == 0.0);
    TimeSeriesMatrix one_row = TimeSeriesMatrix::Zero(1, 1);
    CHECK_THROWS_AS(periodogram(one_row, {1}), std::invalid_argument);
    CHECK_THROWS_AS(periodogram(z, {33}), std::invalid_argument);
}

TEST_CASE("Fourier-aligned cosine concentrates at its own frequency") {
    const int T = 256, k = 9;
    TimeSeriesMatrix x(T, 1);
    for (int t = 0; t < T; ++t) x(t, 0) = std::cos(2.0 * arise::kPi * k * t / T);
    SpectralMatrixSeries s = periodogram(x, full_grid(T));
    for (int i = 0; i < s.size(); ++i) {
        double v = s.mats[static_cast<std::size_t>(i)](0, 0).real();
        if (s.index[static_cast<std::size_t>(i)] == k)
            CHECK(v == doctest::Approx(T / (8.0 * arise::kPi)).epsilon(1e-10));
        else
            CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("periodogram agrees with the direct DFT oracle") {
    SourceSpec spec{2, Marginal::gaussian, 0.5, 404};
    TimeSeriesMatrix x = gen_source(spec, 250); // odd-ish length, not a power of two
    SpectralMatrixSeries s = periodogram(x, full_grid(250));

    for (int c = 0; c < 2; ++c) {
        std::vector<double> v(x.col(c).data(), x.col(c).data() + x.rows());
        double mean = oracle::sample_mean(v);
        for (auto& vv : v) vv -= mean;
        auto w = oracle::dft_direct(v);
        for (int i = 0; i < s.size(); ++i) {
            int j = s.index[static_cast<std::size_t>(i)];
            double expect = std::norm(w[static_cast<std::size_t>(j)]) / (2.0 * arise::kPi * 250);
            CHECK(s.mats[static_cast<std::size_t>(i)](c, c).real() == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("Parseval: grid average of the periodogram equals variance / 2 pi") {
    const int T = 1 << 14;
    TimeSeriesMatrix x = gen_source(SourceSpec{1, Marginal::gaussian, 0.0, 55}, T);
    SpectralMatrixSeries s = periodogram(x, full_grid(T));
    // real series: sum over the full grid = I(T/2) + 2 sum_{j<T/2} I(j), plus the
    // zero term which centering removes
    double total = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        double v = s.mats[static_cast<std::size_t>(i)](0, 0).real();
        total += (s.index[static_cast<std::size_t>(i)] == T / 2) ? v : 2.0 * v;
    }
    std::vector<double> v(x.col(0).data(), x.col(0).data() + T);
    CHECK(total / T == doctest::Approx(oracle::sample_variance(v) / (2.0 * arise::kPi)).epsilon(1e-10));
}

TEST_CASE("Hermitian symmetry of emitted matrices") {
    SourceSpec spec{3, Marginal::student_t7, 0.2, 77};
    TimeSeriesMatrix x = gen_source(spec, 512);
    for (auto kind : {0, 1, 2}) {
        SpectralMatrixSeries s = kind == 0   ? periodogram(x, full_grid(512))
                                 : kind == 1 ? tapered_periodogram(x, full_grid(512))
                                             : wavelet_spectrum(x, full_grid(512));
        for (const auto& m : s.mats) {
            CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
            for (int i = 0; i < m.rows(); ++i) CHECK(m(i, i).real() >= -1e-12);
        }
    }
}

TEST_CASE("cosine-Hanning taper weights") {
    // (1 - cos(pi)) / 2 = 1 at t = T/2; the quadratic form matches a direct sum
    const int T = 64;
    double at_half = 0.5 * (1.0 - std::cos(2.0 * arise::kPi * (T / 2) / T));
    CHECK(at_half == doctest::Approx(1.0));

    TimeSeriesMatrix z = TimeSeriesMatrix::Zero(T, 1);
    SpectralMatrixSeries s = tapered_periodogram(z, full_grid(T));
    for (const auto& m : s.mats) CHECK(m.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("taper approximately preserves white-noise power") {
    const int T = 1 << 12;
    TimeSeriesMatrix x = gen_source(SourceSpec{1, Marginal::gaussian, 0.0, 91}, T);
    SpectralMatrixSeries plain = periodogram(x, full_grid(T));
    SpectralMatrixSeries tap = tapered_periodogram(x, full_grid(T));
    double mean_plain = 0.0, mean_tap = 0.0;
    for (int i = 0; i < plain.size(); ++i) {
        mean_plain += plain.mats[static_cast<std::size_t>(i)](0, 0).real();
        mean_tap += tap.mats[static_cast<std::size_t>(i)](0, 0).real();
    }
    CHECK(mean_tap / mean_plain == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("zero thresholds reproduce the periodogram exactly") {
    SourceSpec spec{2, Marginal::gaussian, 0.3, 13};
    TimeSeriesMatrix x = gen_source(spec, 300); // padding path exercised (150 grid points)
    WaveletSpectrumOptions opts;
    opts.c_scale = 0.0;
    opts.psd_repair = false;
    SpectralMatrixSeries smooth = wavelet_spectrum(x, full_grid(300), opts);
    SpectralMatrixSeries raw = periodogram(x, full_grid(300));
    for (int i = 0; i < raw.size(); ++i)
        CHECK((smooth.mats[static_cast<std::size_t>(i)] - raw.mats[static_cast<std::size_t>(i)])
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
}

TEST_CASE("wavelet spectrum of a zero series is zero") {
    TimeSeriesMatrix z = TimeSeriesMatrix::Zero(128, 1);
    SpectralMatrixSeries s = wavelet_spectrum(z, full_grid(128));
    for (const auto& m : s.mats) CHECK(m.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("PSD repair clips negative eigenvalues and fixes Hermitian structure") {
    MatrixXcd bad(2, 2);
    bad << Complex(1.0, 0.0), Complex(0.9, 0.4), Complex(0.9, -0.4), Complex(-0.5, 0.0);
    MatrixXcd fixed = psd_repair(bad);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(fixed);
    CHECK(eig.eigenvalues().minCoeff() >= 0.0);
    CHECK((fixed - fixed.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(psd_repair(MatrixXcd::Zero(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("smoothing beats the raw periodogram on a known spectrum") {
    const int T = 1 << 12;
    const double d = 0.3;
    TimeSeriesMatrix x = arfima_draw(d, T, 2024);
    SpectralMatrixSeries raw = periodogram(x, full_grid(T));
    SpectralMatrixSeries smooth = wavelet_spectrum(x, full_grid(T));
    CHECK(ise_against_truth(smooth, d) < ise_against_truth(raw, d));
}

TEST_CASE("wavelet smoothing is identical across thread counts") {
    SourceSpec spec{2, Marginal::gaussian, 0.2, 33};
    TimeSeriesMatrix x = gen_source(spec, 512);
    WaveletSpectrumOptions serial;
    serial.threads = 1;
    WaveletSpectrumOptions parallel;
    parallel.threads = 4;
    SpectralMatrixSeries a = wavelet_spectrum(x, full_grid(512), serial);
    SpectralMatrixSeries b = wavelet_spectrum(x, full_grid(512), parallel);
    for (int i = 0; i < a.size(); ++i)
        CHECK((a.mats[static_cast<std::size_t>(i)] - b.mats[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff() ==
              0.0);
}
