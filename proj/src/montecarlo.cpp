#include "arise/montecarlo.hpp"

#include "arise/csv.hpp"
#include "arise/hypothesis.hpp"
#include "arise/rng.hpp"
#include "arise/threading.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace arise {

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "table1") return ExperimentKind::table1;
    if (name == "size") return ExperimentKind::size;
    if (name == "power") return ExperimentKind::power;
    if (name == "consistency") return ExperimentKind::consistency;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

std::string experiment_kind_to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::table1: return "table1";
        case ExperimentKind::size: return "size";
        case ExperimentKind::power: return "power";
        case ExperimentKind::consistency: return "consistency";
    }
    return "?";
}

namespace {

TimeSeriesMatrix simulate_cell(const ScenarioCell& cell, int burn_in, std::uint64_t seed) {
    SourceSpec src;
    src.l = static_cast<int>(cell.d0.size());
    src.marginal = cell.marginal;
    src.copula_corr = cell.tau;
    src.seed = seed;
    int burn = burn_in < 0 ? cell.T : burn_in;
    TimeSeriesMatrix source = gen_source(src, cell.T + burn);
    return gen_arise(cell.d0, source, burn);
}

} // namespace

Table1Result run_table1(const ExperimentPlan& plan) {
    if (plan.trials < 1) throw std::invalid_argument("run_table1: trials must be >= 1");
    Table1Result result;
    result.cells.reserve(plan.cells.size());
    const int threads = effective_threads(plan.threads);

    for (std::size_t cell_idx = 0; cell_idx < plan.cells.size(); ++cell_idx) {
        const ScenarioCell& cell = plan.cells[cell_idx];
        const int l = static_cast<int>(cell.d0.size());
        for (int i = 0; i < l; ++i)
            if (cell.d0(i) < plan.estimator.search_lo || cell.d0(i) > plan.estimator.search_hi)
                throw std::invalid_argument("run_table1: d0 outside the estimator search box");

        CellSummary summary;
        summary.cell = cell;
        summary.records.assign(static_cast<std::size_t>(plan.trials), VectorXd());

#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int trial = 0; trial < plan.trials; ++trial) {
            std::uint64_t seed = derive_seed(plan.master_seed, cell_idx, static_cast<std::uint64_t>(trial));
            try {
                TimeSeriesMatrix X = simulate_cell(cell, plan.burn_in, seed);
                EstimatorConfig cfg = plan.estimator;
                cfg.threads = 1; // trials are the parallel unit
                MemoryEstimate est = estimate(X, cfg, cell.method);
                summary.records[static_cast<std::size_t>(trial)] = est.d_hat;
            } catch (const std::exception&) {
                // failure recorded as an empty record; the cell is flagged below
            }
        }

        VectorXd sum = VectorXd::Zero(l), sumsq = VectorXd::Zero(l);
        for (const VectorXd& rec : summary.records) {
            if (rec.size() == 0) {
                ++summary.trials_failed;
                continue;
            }
            ++summary.trials_ok;
            sum += rec;
            sumsq += rec.cwiseProduct(rec);
        }
        if (summary.trials_ok > 0) {
            summary.mean = sum / summary.trials_ok;
            if (summary.trials_ok > 1) {
                VectorXd var =
                    (sumsq - summary.trials_ok * summary.mean.cwiseProduct(summary.mean)) / (summary.trials_ok - 1);
                summary.sd = var.cwiseMax(0.0).cwiseSqrt();
            } else {
                summary.sd = VectorXd::Zero(l);
            }
        } else {
            summary.mean = VectorXd::Constant(l, std::nan(""));
            summary.sd = VectorXd::Constant(l, std::nan(""));
        }
        summary.flagged = summary.trials_failed * 100 > plan.trials;
        result.cells.push_back(std::move(summary));
    }
    return result;
}

CalibrationResult run_calibration(const ExperimentPlan& plan) {
    CalibrationResult result;
    result.kind = plan.kind;
    const int threads = effective_threads(plan.threads);

    if (plan.kind == ExperimentKind::size || plan.kind == ExperimentKind::power) {
        const double d0 = plan.kind == ExperimentKind::power ? plan.power_d : 0.0;
        std::vector<int> outcome(static_cast<std::size_t>(plan.trials), -1);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int trial = 0; trial < plan.trials; ++trial) {
            std::uint64_t seed = derive_seed(plan.master_seed, 0, static_cast<std::uint64_t>(trial));
            try {
                SourceSpec src{1, Marginal::gaussian, 0.0, seed};
                int burn = plan.kind == ExperimentKind::power ? (plan.burn_in < 0 ? plan.T : plan.burn_in) : 0;
                TimeSeriesMatrix noise = gen_source(src, plan.T + burn);
                TimeSeriesMatrix X = plan.kind == ExperimentKind::power
                                         ? gen_arise(VectorXd::Constant(1, d0), noise, burn)
                                         : noise;
                EstimatorConfig cfg = plan.estimator;
                cfg.threads = 1;
                TestReport report = test_efficiency(X, cfg, plan.level);
                outcome[static_cast<std::size_t>(trial)] = report.reject ? 1 : 0;
            } catch (const std::exception&) {
            }
        }
        int rejections = 0;
        for (int o : outcome) {
            if (o < 0) ++result.trials_failed;
            else {
                ++result.trials_ok;
                rejections += o;
            }
        }
        result.rate = result.trials_ok > 0 ? static_cast<double>(rejections) / result.trials_ok : std::nan("");
        return result;
    }

    if (plan.kind != ExperimentKind::consistency)
        throw std::invalid_argument("run_calibration: unsupported kind");

    for (std::size_t size_idx = 0; size_idx < plan.consistency_T.size(); ++size_idx) {
        const int T = plan.consistency_T[size_idx];
        std::vector<double> errors(static_cast<std::size_t>(plan.trials), std::nan(""));
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int trial = 0; trial < plan.trials; ++trial) {
            std::uint64_t seed = derive_seed(plan.master_seed, size_idx + 1, static_cast<std::uint64_t>(trial));
            try {
                ScenarioCell cell;
                cell.tau = 0.0;
                cell.d0 = VectorXd::Constant(1, plan.consistency_d);
                cell.marginal = Marginal::gaussian;
                cell.T = T;
                cell.method = plan.method;
                TimeSeriesMatrix X = simulate_cell(cell, plan.burn_in, seed);
                EstimatorConfig cfg = plan.estimator;
                cfg.threads = 1;
                MemoryEstimate est = estimate(X, cfg, plan.method);
                errors[static_cast<std::size_t>(trial)] = std::abs(est.d_hat(0) - plan.consistency_d);
            } catch (const std::exception&) {
            }
        }
        std::vector<double> ok;
        for (double e : errors)
            if (std::isfinite(e)) ok.push_back(e);
        result.trials_ok += static_cast<int>(ok.size());
        result.trials_failed += plan.trials - static_cast<int>(ok.size());
        double median = std::nan("");
        if (!ok.empty()) {
            std::sort(ok.begin(), ok.end());
            std::size_t n = ok.size();
            median = n % 2 ? ok[n / 2] : 0.5 * (ok[n / 2 - 1] + ok[n / 2]);
        }
        result.medians.emplace_back(T, median);
    }
    return result;
}

std::string table1_to_csv(const Table1Result& result) {
    std::ostringstream os;
    os << "tau,marginal,T,method,component,d0,mean,sd,trials_ok,trials_failed,flagged\n";
    for (const CellSummary& c : result.cells) {
        for (int i = 0; i < c.cell.d0.size(); ++i) {
            os << format_double(c.cell.tau) << ',' << marginal_to_string(c.cell.marginal) << ','
               << c.cell.T << ',' << method_to_string(c.cell.method) << ',' << (i + 1) << ','
               << format_double(c.cell.d0(i)) << ',' << format_double(c.mean(i)) << ','
               << format_double(c.sd(i)) << ',' << c.trials_ok << ',' << c.trials_failed << ','
               << (c.flagged ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

std::string table1_records_to_csv(const Table1Result& result) {
    std::ostringstream os;
    os << "cell,trial,component,d_hat\n";
    for (std::size_t cell_idx = 0; cell_idx < result.cells.size(); ++cell_idx) {
        const CellSummary& c = result.cells[cell_idx];
        for (std::size_t trial = 0; trial < c.records.size(); ++trial) {
            const VectorXd& rec = c.records[trial];
            for (int i = 0; i < rec.size(); ++i)
                os << cell_idx << ',' << trial << ',' << (i + 1) << ',' << format_double(rec(i)) << '\n';
        }
    }
    return os.str();
}

std::string calibration_to_csv(const CalibrationResult& result) {
    std::ostringstream os;
    if (result.kind == ExperimentKind::consistency) {
        os << "T,median_abs_error,trials_ok,trials_failed\n";
        for (const auto& [T, med] : result.medians)
            os << T << ',' << format_double(med) << ',' << result.trials_ok << ',' << result.trials_failed
               << '\n';
        return os.str();
    }
    os << "kind,rejection_rate,trials_ok,trials_failed\n";
    os << experiment_kind_to_string(result.kind) << ',' << format_double(result.rate) << ','
       << result.trials_ok << ',' << result.trials_failed << '\n';
    return os.str();
}

} // namespace arise
