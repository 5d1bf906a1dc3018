#include "arise/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arise {

WaveletFamily wavelet_from_string(const std::string& name) {
    if (name == "haar") return WaveletFamily::haar;
    if (name == "db4") return WaveletFamily::db4;
    throw std::invalid_argument("unknown wavelet family: " + name);
}

std::string wavelet_to_string(WaveletFamily f) {
    return f == WaveletFamily::haar ? "haar" : "db4";
}

ThresholdRule threshold_rule_from_string(const std::string& name) {
    if (name == "soft") return ThresholdRule::soft;
    if (name == "hard") return ThresholdRule::hard;
    throw std::invalid_argument("unknown threshold rule: " + name);
}

std::string threshold_rule_to_string(ThresholdRule r) {
    return r == ThresholdRule::soft ? "soft" : "hard";
}

double threshold(double alpha, double rho, ThresholdRule rule) {
    if (rho < 0.0) throw std::invalid_argument("threshold: rho must be >= 0");
    if (rule == ThresholdRule::soft) {
        double mag = std::abs(alpha) - rho;
        return mag > 0.0 ? std::copysign(mag, alpha) : 0.0;
    }
    return std::abs(alpha) > rho ? alpha : 0.0;
}

namespace {

const std::vector<double>& lowpass(WaveletFamily f) {
    static const std::vector<double> haar = {0.7071067811865475244, 0.7071067811865475244};
    static const std::vector<double> db4 = []() {
        const double s3 = std::sqrt(3.0), s2 = std::sqrt(2.0);
        return std::vector<double>{(1.0 + s3) / (4.0 * s2), (3.0 + s3) / (4.0 * s2),
                                   (3.0 - s3) / (4.0 * s2), (1.0 - s3) / (4.0 * s2)};
    }();
    return f == WaveletFamily::haar ? haar : db4;
}

std::vector<double> highpass(const std::vector<double>& h) {
    const std::size_t L = h.size();
    std::vector<double> g(L);
    for (std::size_t k = 0; k < L; ++k) {
        double v = h[L - 1 - k];
        g[k] = (k % 2 == 0) ? v : -v;
    }
    return g;
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

bool WaveletCoeffSet::admissible(int scale) const {
    double bound = adm_C * std::pow(static_cast<double>(source_T), 1.0 - adm_delta);
    return std::pow(2.0, scale) <= bound;
}

long long WaveletCoeffSet::index_set_size() const {
    long long count = 0;
    for (int s = 0; s < static_cast<int>(detail.size()); ++s)
        if (admissible(min_scale + s)) count += static_cast<long long>(detail[static_cast<std::size_t>(s)].size());
    return count;
}

double WaveletCoeffSet::sum_squares() const {
    double acc = 0.0;
    for (const auto& band : detail)
        for (double v : band) acc += v * v;
    for (double v : approx) acc += v * v;
    return acc;
}

WaveletCoeffSet dwt_forward(const std::vector<double>& signal, WaveletFamily family,
                            double adm_C, double adm_delta, long long source_T) {
    if (signal.empty()) throw std::invalid_argument("dwt_forward: empty signal");
    WaveletCoeffSet out;
    out.family = family;
    out.original_n = static_cast<int>(signal.size());
    out.adm_C = adm_C;
    out.adm_delta = adm_delta;
    out.source_T = source_T > 0 ? source_T : static_cast<long long>(signal.size());

    std::vector<double> cur = signal;
    int n = next_pow2(out.original_n);
    cur.reserve(static_cast<std::size_t>(n));
    for (int j = out.original_n; j < n; ++j)
        cur.push_back(signal[static_cast<std::size_t>(2 * out.original_n - 1 - j)]);
    out.padded_n = n;

    const auto& h = lowpass(family);
    const auto g = highpass(h);
    const int L = static_cast<int>(h.size());

    // Finest detail band has n/2 coefficients (scale log2(n)-1); recurse to scale 0.
    while (static_cast<int>(cur.size()) >= 2) {
        const int len = static_cast<int>(cur.size());
        const int half = len / 2;
        std::vector<double> a(static_cast<std::size_t>(half), 0.0);
        std::vector<double> d(static_cast<std::size_t>(half), 0.0);
        for (int k = 0; k < half; ++k) {
            double sa = 0.0, sd = 0.0;
            for (int m = 0; m < L; ++m) {
                double v = cur[static_cast<std::size_t>((2 * k + m) % len)];
                sa += h[static_cast<std::size_t>(m)] * v;
                sd += g[static_cast<std::size_t>(m)] * v;
            }
            a[static_cast<std::size_t>(k)] = sa;
            d[static_cast<std::size_t>(k)] = sd;
        }
        out.detail.push_back(std::move(d));
        out.scaling.push_back(a);
        cur = std::move(a);
    }
    // Bands were produced finest-first; store coarsest-first so index s maps to
    // scale min_scale + s.
    std::reverse(out.detail.begin(), out.detail.end());
    std::reverse(out.scaling.begin(), out.scaling.end());
    out.min_scale = 0;
    out.approx = cur; // single coarsest scaling value
    return out;
}

std::vector<double> dwt_inverse(const WaveletCoeffSet& coeffs) {
    const auto& h = lowpass(coeffs.family);
    const auto g = highpass(h);
    const int L = static_cast<int>(h.size());

    std::vector<double> cur = coeffs.approx;
    for (const auto& d : coeffs.detail) {
        const int half = static_cast<int>(cur.size());
        if (static_cast<int>(d.size()) != half)
            throw std::invalid_argument("dwt_inverse: inconsistent band sizes");
        const int len = 2 * half;
        std::vector<double> next(static_cast<std::size_t>(len), 0.0);
        for (int k = 0; k < half; ++k) {
            for (int m = 0; m < L; ++m) {
                std::size_t idx = static_cast<std::size_t>((2 * k + m) % len);
                next[idx] += h[static_cast<std::size_t>(m)] * cur[static_cast<std::size_t>(k)] +
                             g[static_cast<std::size_t>(m)] * d[static_cast<std::size_t>(k)];
            }
        }
        cur = std::move(next);
    }
    cur.resize(static_cast<std::size_t>(coeffs.original_n));
    return cur;
}

WaveletCoeffSet compute_thresholds(WaveletCoeffSet coeffs, const std::vector<double>& periodogram_series,
                                   double c_scale) {
    WaveletCoeffSet ref = dwt_forward(periodogram_series, coeffs.family, coeffs.adm_C, coeffs.adm_delta,
                                      coeffs.source_T);
    if (ref.detail.size() != coeffs.detail.size())
        throw std::invalid_argument("compute_thresholds: series length mismatch");
    const long long set_size = coeffs.index_set_size();
    const double log_factor = set_size > 1 ? std::sqrt(2.0 * std::log(static_cast<double>(set_size))) : 0.0;
    // The threshold is T^{-1/2} times the local weighted average of the
    // periodogram, stated in continuous-integral units. Mapping both sides to
    // discrete orthonormal coefficients (divide by sqrt(grid spacing 2 pi / T),
    // recover the local level from the scaling coefficient via the band
    // support) cancels the T^{-1/2} and leaves a level-proportional rule:
    //   rho_{i,kappa} = C |s_{i,kappa}| sqrt(2^i / n) sqrt(2 log |J_T|) / sqrt(2 pi).
    const double base = c_scale * log_factor / std::sqrt(2.0 * 3.14159265358979323846);
    coeffs.threshold.clear();
    for (std::size_t s = 0; s < coeffs.detail.size(); ++s) {
        const double support = static_cast<double>(coeffs.padded_n) /
                               static_cast<double>(coeffs.detail[s].size());
        std::vector<double> rho(coeffs.detail[s].size(), 0.0);
        for (std::size_t k = 0; k < rho.size(); ++k)
            rho[k] = base * std::abs(ref.scaling[s][k]) / std::sqrt(support);
        coeffs.threshold.push_back(std::move(rho));
    }
    return coeffs;
}

WaveletCoeffSet apply_thresholds(WaveletCoeffSet coeffs, ThresholdRule rule) {
    if (coeffs.threshold.size() != coeffs.detail.size())
        throw std::invalid_argument("apply_thresholds: thresholds not computed");
    for (std::size_t s = 0; s < coeffs.detail.size(); ++s) {
        const int scale = coeffs.min_scale + static_cast<int>(s);
        auto& band = coeffs.detail[s];
        if (!coeffs.admissible(scale)) {
            std::fill(band.begin(), band.end(), 0.0);
            continue;
        }
        for (std::size_t k = 0; k < band.size(); ++k)
            band[k] = threshold(band[k], coeffs.threshold[s][k], rule);
    }
    return coeffs;
}

} // namespace arise
