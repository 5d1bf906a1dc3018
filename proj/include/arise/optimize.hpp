#pragma once

#include "arise/types.hpp"

#include <functional>
#include <vector>

namespace arise {

using Objective = std::function<double(const VectorXd&)>;

struct OptimResult {
    VectorXd x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct NelderMeadOptions {
    double tolerance = 1e-10;  // spread of simplex values
    double step = 0.02;        // initial simplex edge
    int max_iterations = 400;
};

// Nelder-Mead on a box: points outside are evaluated at their clamped image
// plus a quadratic pull-back, so the returned minimizer lies inside the box.
OptimResult nelder_mead_box(const Objective& f, const VectorXd& start, const VectorXd& lower,
                            const VectorXd& upper, const NelderMeadOptions& opts = {});

// Runs Nelder-Mead from every start (optionally in parallel) and picks the
// winner by (value, norm, lexicographic) so scheduling cannot change the result.
OptimResult multistart_nelder_mead(const Objective& f, const std::vector<VectorXd>& starts,
                                   const VectorXd& lower, const VectorXd& upper,
                                   const NelderMeadOptions& opts = {}, int threads = 0);

// Projected gradient descent on a box with numerical gradients and a
// backtracking line search.
OptimResult projected_gradient_box(const Objective& f, const VectorXd& start, const VectorXd& lower,
                                   const VectorXd& upper, const NelderMeadOptions& opts = {});

OptimResult multistart_projected_gradient(const Objective& f, const std::vector<VectorXd>& starts,
                                          const VectorXd& lower, const VectorXd& upper,
                                          const NelderMeadOptions& opts = {}, int threads = 0);

struct QuasiNewtonOptions {
    double tolerance = 1e-9;  // relative improvement
    double grad_step = 1e-5;  // central-difference step
    int max_iterations = 250;
};

// BFGS with numerical gradients and backtracking line search; the objective
// may return +inf to reject a point (accepted values are monotone).
OptimResult quasi_newton(const Objective& f, const VectorXd& start,
                         const QuasiNewtonOptions& opts = {});

} // namespace arise
