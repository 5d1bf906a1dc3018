#include "arise/optimize.hpp"

#include "arise/threading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double boxed_eval(const Objective& f, const VectorXd& x, const VectorXd& lo, const VectorXd& hi,
                  VectorXd& clamped) {
    clamped = x.cwiseMax(lo).cwiseMin(hi);
    double penalty = 1e3 * (x - clamped).squaredNorm();
    double v = f(clamped);
    return std::isfinite(v) ? v + penalty : kInf;
}

bool lex_less(const VectorXd& a, const VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

} // namespace

OptimResult nelder_mead_box(const Objective& f, const VectorXd& start, const VectorXd& lower,
                            const VectorXd& upper, const NelderMeadOptions& opts) {
    const int n = static_cast<int>(start.size());
    if (lower.size() != n || upper.size() != n)
        throw std::invalid_argument("nelder_mead_box: bound dimension mismatch");

    struct Vertex {
        VectorXd x;
        double v;
    };
    std::vector<Vertex> simplex;
    int evals = 0;
    VectorXd clamped(n);
    auto eval = [&](const VectorXd& x) {
        ++evals;
        return boxed_eval(f, x, lower, upper, clamped);
    };

    simplex.push_back({start, eval(start)});
    for (int i = 0; i < n; ++i) {
        VectorXd x = start;
        double step = opts.step;
        if (x(i) + step > upper(i)) step = -step;
        x(i) += step;
        simplex.push_back({x, eval(x)});
    }

    auto order = [&]() {
        std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    };
    order();

    bool converged = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (std::abs(simplex.back().v - simplex.front().v) <=
            opts.tolerance * (1.0 + std::abs(simplex.front().v))) {
            converged = true;
            break;
        }
        VectorXd centroid = VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += simplex[static_cast<std::size_t>(i)].x;
        centroid /= n;

        Vertex& worst = simplex.back();
        VectorXd xr = centroid + (centroid - worst.x);
        double vr = eval(xr);
        if (vr < simplex.front().v) {
            VectorXd xe = centroid + 2.0 * (centroid - worst.x);
            double ve = eval(xe);
            worst = ve < vr ? Vertex{xe, ve} : Vertex{xr, vr};
        } else if (vr < simplex[static_cast<std::size_t>(n) - 1].v) {
            worst = {xr, vr};
        } else {
            VectorXd xc = centroid + 0.5 * (worst.x - centroid);
            double vc = eval(xc);
            if (vc < worst.v) {
                worst = {xc, vc};
            } else {
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    simplex[i].x = simplex.front().x + 0.5 * (simplex[i].x - simplex.front().x);
                    simplex[i].v = eval(simplex[i].x);
                }
            }
        }
        order();
    }

    OptimResult out;
    out.x = simplex.front().x.cwiseMax(lower).cwiseMin(upper);
    out.value = simplex.front().v;
    out.evaluations = evals;
    out.converged = converged;
    return out;
}

OptimResult multistart_nelder_mead(const Objective& f, const std::vector<VectorXd>& starts,
                                   const VectorXd& lower, const VectorXd& upper,
                                   const NelderMeadOptions& opts, int threads) {
    if (starts.empty()) throw std::invalid_argument("multistart_nelder_mead: no starts");
    std::vector<OptimResult> results(starts.size());
    const int n_threads = effective_threads(threads);
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
    for (int i = 0; i < static_cast<int>(starts.size()); ++i)
        results[static_cast<std::size_t>(i)] =
            nelder_mead_box(f, starts[static_cast<std::size_t>(i)], lower, upper, opts);

    // Deterministic reduction: objective, then Euclidean norm, then lexicographic.
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const OptimResult& a = results[i];
        const OptimResult& b = results[best];
        if (a.value < b.value ||
            (a.value == b.value &&
             (a.x.norm() < b.x.norm() || (a.x.norm() == b.x.norm() && lex_less(a.x, b.x)))))
            best = i;
    }
    OptimResult out = results[best];
    for (const auto& r : results) out.evaluations += (&r == &results[best]) ? 0 : r.evaluations;
    out.converged = std::any_of(results.begin(), results.end(), [](const OptimResult& r) { return r.converged; });
    return out;
}

OptimResult projected_gradient_box(const Objective& f, const VectorXd& start, const VectorXd& lower,
                                   const VectorXd& upper, const NelderMeadOptions& opts) {
    const int n = static_cast<int>(start.size());
    int evals = 0;
    auto eval = [&](const VectorXd& x) {
        ++evals;
        double v = f(x);
        return std::isfinite(v) ? v : kInf;
    };
    auto project = [&](VectorXd x) { return x.cwiseMax(lower).cwiseMin(upper); };

    VectorXd x = project(start);
    double fx = eval(x);
    bool converged = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
        VectorXd g(n);
        for (int i = 0; i < n; ++i) {
            double h = 1e-6 * (1.0 + std::abs(x(i)));
            VectorXd xp = project(x + h * VectorXd::Unit(n, i));
            VectorXd xm = project(x - h * VectorXd::Unit(n, i));
            double denom = xp(i) - xm(i);
            g(i) = denom != 0.0 ? (eval(xp) - eval(xm)) / denom : 0.0;
        }
        double step = 1.0;
        bool accepted = false;
        VectorXd xn;
        double fn = kInf;
        for (int ls = 0; ls < 50; ++ls) {
            xn = project(x - step * g);
            fn = eval(xn);
            // Armijo condition on the projected step
            if (fn <= fx - 1e-4 * (x - xn).squaredNorm() / step && fn < fx) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || std::abs(fx - fn) <= opts.tolerance * (1.0 + std::abs(fn))) {
            if (accepted) {
                x = xn;
                fx = fn;
            }
            converged = true;
            break;
        }
        x = xn;
        fx = fn;
    }
    OptimResult out;
    out.x = x;
    out.value = fx;
    out.evaluations = evals;
    out.converged = converged;
    return out;
}

OptimResult multistart_projected_gradient(const Objective& f, const std::vector<VectorXd>& starts,
                                          const VectorXd& lower, const VectorXd& upper,
                                          const NelderMeadOptions& opts, int threads) {
    if (starts.empty()) throw std::invalid_argument("multistart_projected_gradient: no starts");
    std::vector<OptimResult> results(starts.size());
    const int n_threads = effective_threads(threads);
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
    for (int i = 0; i < static_cast<int>(starts.size()); ++i)
        results[static_cast<std::size_t>(i)] =
            projected_gradient_box(f, starts[static_cast<std::size_t>(i)], lower, upper, opts);
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const OptimResult& a = results[i];
        const OptimResult& b = results[best];
        if (a.value < b.value ||
            (a.value == b.value &&
             (a.x.norm() < b.x.norm() || (a.x.norm() == b.x.norm() && lex_less(a.x, b.x)))))
            best = i;
    }
    return results[best];
}

OptimResult quasi_newton(const Objective& f, const VectorXd& start, const QuasiNewtonOptions& opts) {
    const int n = static_cast<int>(start.size());
    int evals = 0;
    auto eval = [&](const VectorXd& x) {
        ++evals;
        double v = f(x);
        return std::isfinite(v) ? v : kInf;
    };

    VectorXd x = start;
    double fx = eval(x);
    if (!std::isfinite(fx)) throw std::invalid_argument("quasi_newton: start point infeasible");

    auto gradient = [&](const VectorXd& at, double fat) {
        VectorXd g(n);
        for (int i = 0; i < n; ++i) {
            double h = opts.grad_step * (1.0 + std::abs(at(i)));
            VectorXd xp = at, xm = at;
            xp(i) += h;
            xm(i) -= h;
            double fp = eval(xp), fm = eval(xm);
            if (std::isfinite(fp) && std::isfinite(fm)) {
                g(i) = (fp - fm) / (2.0 * h);
            } else if (std::isfinite(fp)) {
                g(i) = (fp - fat) / h;
            } else if (std::isfinite(fm)) {
                g(i) = (fat - fm) / h;
            } else {
                g(i) = 0.0;
            }
        }
        return g;
    };

    MatrixXd hess_inv = MatrixXd::Identity(n, n);
    VectorXd g = gradient(x, fx);
    bool converged = false;

    for (int it = 0; it < opts.max_iterations; ++it) {
        VectorXd dir = -hess_inv * g;
        if (dir.dot(g) >= 0.0) dir = -g; // reset on loss of descent
        double step = 1.0;
        double fnew = kInf;
        VectorXd xnew;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            xnew = x + step * dir;
            fnew = eval(xnew);
            if (std::isfinite(fnew) && fnew <= fx + 1e-4 * step * g.dot(dir)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            converged = true; // no usable descent direction left
            break;
        }
        VectorXd gnew = gradient(xnew, fnew);
        VectorXd s = xnew - x;
        VectorXd y = gnew - g;
        double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            MatrixXd eye = MatrixXd::Identity(n, n);
            MatrixXd left = eye - s * y.transpose() / sy;
            hess_inv = left * hess_inv * left.transpose() + s * s.transpose() / sy;
        }
        double improvement = fx - fnew;
        x = xnew;
        fx = fnew;
        g = gnew;
        if (improvement <= opts.tolerance * (1.0 + std::abs(fx))) {
            converged = true;
            break;
        }
    }

    OptimResult out;
    out.x = x;
    out.value = fx;
    out.evaluations = evals;
    out.converged = converged;
    return out;
}

} // namespace arise
