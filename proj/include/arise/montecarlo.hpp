#pragma once

#include "arise/estimators.hpp"
#include "arise/simulate.hpp"
#include "arise/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace arise {

struct ScenarioCell {
    double tau = 0.0;
    VectorXd d0;
    Marginal marginal = Marginal::gaussian;
    int T = 1024;
    EstimatorMethod method = EstimatorMethod::ase;
};

enum class ExperimentKind { table1, size, power, consistency };

ExperimentKind experiment_kind_from_string(const std::string& name);
std::string experiment_kind_to_string(ExperimentKind k);

struct ExperimentPlan {
    ExperimentKind kind = ExperimentKind::table1;
    std::vector<ScenarioCell> cells; // table1
    int trials = 500;
    std::uint64_t master_seed = 1;
    int burn_in = -1; // -1: burn_in = T
    EstimatorConfig estimator;

    // size / power / consistency settings
    int T = 4096;
    double level = 0.05;
    double power_d = 0.2;
    double consistency_d = 0.3;
    std::vector<int> consistency_T = {256, 1024, 4096};
    EstimatorMethod method = EstimatorMethod::ase;

    int threads = 0;
};

struct CellSummary {
    ScenarioCell cell;
    VectorXd mean;
    VectorXd sd;
    int trials_ok = 0;
    int trials_failed = 0;
    bool flagged = false;                 // more than 1% of trials failed
    std::vector<VectorXd> records;        // per-trial d_hat (empty entry on failure)
};

struct Table1Result {
    std::vector<CellSummary> cells;
};

// Per-cell generate -> estimate -> aggregate with per-trial derived seeds;
// deterministic for a fixed master seed regardless of worker count.
Table1Result run_table1(const ExperimentPlan& plan);

struct CalibrationResult {
    ExperimentKind kind = ExperimentKind::size;
    double rate = 0.0;                          // rejection rate (size/power)
    std::vector<std::pair<int, double>> medians; // consistency: (T, median |d_hat - d0|)
    int trials_ok = 0;
    int trials_failed = 0;
};

CalibrationResult run_calibration(const ExperimentPlan& plan);

// Long-format CSV emission (stable bytes for a fixed plan and seed).
std::string table1_to_csv(const Table1Result& result);
std::string table1_records_to_csv(const Table1Result& result);
std::string calibration_to_csv(const CalibrationResult& result);

} // namespace arise
