#pragma once

#include "arise/spectral.hpp"
#include "arise/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace arise {

enum class EstimatorMethod { ase, gse, tse };

EstimatorMethod method_from_string(const std::string& name);
std::string method_to_string(EstimatorMethod m);

enum class BoxOptimizer { nelder_mead_multistart, projected_gradient };

struct EstimatorConfig {
    int bandwidth = 0;           // m; 0 = floor(T^0.65)
    double search_lo = -0.49;
    double search_hi = 0.49;
    BoxOptimizer optimizer = BoxOptimizer::nelder_mead_multistart;
    int grid_starts = 9;         // per-coordinate starts for l <= 2
    double tolerance = 1e-10;
    WaveletSpectrumOptions wavelet;                 // ASE backend settings
    std::optional<SpectralTag> backend_override;    // force a backend for any method
    int threads = 0;

    int resolve_bandwidth(int T) const;
};

struct MemoryEstimate {
    VectorXd d_hat;
    MatrixXd g_hat;
    MatrixXd sigma; // asymptotic covariance of d_hat: Sigma^{-1} / m
    double objective_value = 0.0;
    EstimatorMethod method = EstimatorMethod::ase;
    int m = 0;
    int T = 0;
};

// Thrown when the optimizer exhausts its budget; carries the best point seen.
class EstimationError : public std::runtime_error {
public:
    EstimationError(const std::string& what, MemoryEstimate best)
        : std::runtime_error(what), best_so_far(std::move(best)) {}
    MemoryEstimate best_so_far;
};

// G_hat(d) = (1/m) sum_j Re[Psi_j(d)^-1 M_j conj(Psi_j(d))^-1], symmetrized.
MatrixXd g_hat(const VectorXd& d, const SpectralMatrixSeries& spec);

// R(d) = log det G_hat(d) - (2/m) sum_i sum_j d_i log lambda_j; +inf when
// G_hat is not positive definite.
double ase_objective(const VectorXd& d, const SpectralMatrixSeries& spec);

// Sigma = (4+pi^2)/2 * G .* G^-1 + (4-pi^2)/2 * ones.
MatrixXd asymptotic_sigma(const MatrixXd& G);

MemoryEstimate estimate(const TimeSeriesMatrix& X, const EstimatorConfig& config, EstimatorMethod method);

// Minimizes the objective over the precomputed spectral series (the backend
// selection and bandwidth slicing already applied). Exposed for reuse.
MemoryEstimate estimate_from_spectrum(const SpectralMatrixSeries& spec, const EstimatorConfig& config,
                                      EstimatorMethod method);

} // namespace arise
