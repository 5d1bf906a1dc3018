// Timing comparison of the serial reference paths (threads = 1) against the
// OpenMP kernels for the three data-parallel hot spots: Monte Carlo trials,
// entry-wise wavelet smoothing, and forecast path sampling.

#include "arise/ldss.hpp"
#include "arise/montecarlo.hpp"
#include "arise/simulate.hpp"
#include "arise/spectral.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double time_ms(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main() {
#ifdef _OPENMP
    int hw = omp_get_max_threads();
#else
    int hw = 1;
#endif
    std::printf("hardware threads: %d\n\n", hw);

    {
        arise::ExperimentPlan plan;
        plan.trials = 24;
        plan.master_seed = 7;
        arise::ScenarioCell cell;
        cell.tau = 0.2;
        cell.d0 = arise::VectorXd::Zero(2);
        cell.d0 << 0.1, 0.3;
        cell.marginal = arise::Marginal::student_t3;
        cell.T = 1024;
        cell.method = arise::EstimatorMethod::ase;
        plan.cells = {cell};
        plan.estimator.bandwidth = 512;
        plan.threads = 1;
        double serial = time_ms([&] { arise::run_table1(plan); });
        plan.threads = hw;
        double parallel = time_ms([&] { arise::run_table1(plan); });
        report("montecarlo trials", serial, parallel);
    }

    {
        // wide matrix: 2 l^2 - l entry series keep the smoothing loop busy
        const int l = 8;
        arise::SourceSpec src{l, arise::Marginal::gaussian, 0.1, 11};
        arise::TimeSeriesMatrix noise = arise::gen_source(src, 2 * 4096);
        arise::VectorXd d = arise::VectorXd::LinSpaced(l, 0.05, 0.4);
        arise::TimeSeriesMatrix X = arise::gen_arise(d, noise, 4096);
        arise::WaveletSpectrumOptions opts;
        auto grid = arise::full_grid(static_cast<int>(X.rows()));
        opts.threads = 1;
        double serial = time_ms([&] {
            for (int rep = 0; rep < 20; ++rep) arise::wavelet_spectrum(X, grid, opts);
        });
        opts.threads = hw;
        double parallel = time_ms([&] {
            for (int rep = 0; rep < 20; ++rep) arise::wavelet_spectrum(X, grid, opts);
        });
        report("wavelet spectrum smoothing", serial, parallel);
    }

    {
        arise::SourceSpec src{1, arise::Marginal::gaussian, 0.0, 3};
        arise::TimeSeriesMatrix noise = arise::gen_source(src, 2048);
        arise::VectorXd d1 = arise::VectorXd::Constant(1, 0.3);
        arise::TimeSeriesMatrix X = arise::gen_arise(d1, noise, 1024);
        arise::LdssFitConfig cfg;
        cfg.p = 1;
        cfg.fix_d = d1;
        arise::LdssModel model = arise::ldss_fit(X, cfg);
        double serial = time_ms([&] { arise::ldss_forecast(model, X, 24, 20000, 5, 1); });
        double parallel = time_ms([&] { arise::ldss_forecast(model, X, 24, 20000, 5, hw); });
        report("forecast path sampling", serial, parallel);
    }
    return 0;
}
