#pragma once

#include "arise/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace arise {

enum class Marginal { gaussian, student_t3, student_t7, standard_logistic, hyperbolic_secant };

Marginal marginal_from_string(const std::string& name);
std::string marginal_to_string(Marginal m);

// i.i.d. source rows: correlated standard normals mapped through the normal
// CDF, then through the inverse CDF of the target marginal, then standardized
// to unit variance (Gaussian copula with equicorrelation tau).
struct SourceSpec {
    int l = 1;
    Marginal marginal = Marginal::gaussian;
    double copula_corr = 0.0; // tau, must keep the copula matrix positive definite
    std::uint64_t seed = 0;
};

TimeSeriesMatrix gen_source(const SourceSpec& spec, int T);

// Matrix ARMA lag polynomials phi(B) = W_0 + sum W_k B^k, psi(B) = V_0 + sum V_k B^k.
struct ArmaSpec {
    std::vector<MatrixXd> W; // W_0..W_p, W_0 invertible
    std::vector<MatrixXd> V; // V_0..V_q, V_0 invertible

    int p() const { return static_cast<int>(W.size()) - 1; }
    int q() const { return static_cast<int>(V.size()) - 1; }
    int dim() const { return W.empty() ? 0 : static_cast<int>(W.front().rows()); }

    // Throws unless both companion spectral radii are strictly below one.
    void validate() const;
};

// Companion spectral radius of the normalized lag polynomial C_0 + sum C_k B^k.
double companion_spectral_radius(const std::vector<MatrixXd>& coeffs);

// Truncated MA(inf) filter of the inverse fractional expansion applied per
// component; the first burn_in outputs are discarded. Requires |d_i| < 1/2.
TimeSeriesMatrix gen_arise(const VectorXd& d, const TimeSeriesMatrix& source, int burn_in);

// ARMA recursion driven by standard Gaussian noise, then fractional integration.
TimeSeriesMatrix gen_arise_arma(const VectorXd& d, const ArmaSpec& arma, int T, int burn_in,
                                std::uint64_t seed);

struct LorenzParams {
    double a = 10.0;
    double b = 28.0;
    double c = 8.0 / 3.0;
};

// Classical RK4 integration of the Lorenz system; returns T rows (x, y, z).
TimeSeriesMatrix gen_lorenz(int T, double dt, const Eigen::Vector3d& init, const LorenzParams& params);

} // namespace arise
