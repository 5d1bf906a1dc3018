#include "arise/csv.hpp"
#include "arise/hypothesis.hpp"
#include "arise/ldss.hpp"
#include "arise/montecarlo.hpp"
#include "arise/serialize.hpp"
#include "arise/simulate.hpp"
#include "arise/spectral.hpp"
#include "arise/threading.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using nlohmann::json;

struct GlobalOpts {
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    std::string output;
    std::string format = "default";
};

void emit(const GlobalOpts& g, const std::string& text) {
    if (g.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.output);
    if (!out) throw std::runtime_error(g.output + ": cannot open for writing");
    out << text;
}

void emit_table(const GlobalOpts& g, const arise::CsvTable& table) {
    if (g.format == "json") {
        json doc;
        doc["schema_version"] = arise::kSchemaVersion;
        doc["columns"] = table.header.empty() ? json::array() : json(table.header);
        json rows = json::array();
        for (int r = 0; r < table.values.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < table.values.cols(); ++c) row.push_back(table.values(r, c));
            rows.push_back(std::move(row));
        }
        doc["rows"] = std::move(rows);
        emit(g, doc.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    arise::write_csv(os, table);
    emit(g, os.str());
}

void require_format(const GlobalOpts& g, std::initializer_list<const char*> allowed) {
    if (g.format == "default") return;
    for (const char* a : allowed)
        if (g.format == a) return;
    throw CLI::ValidationError("--format", "format '" + g.format + "' not supported by this subcommand");
}

arise::EstimatorConfig make_config(const GlobalOpts& g, int bandwidth, const std::string& wavelet,
                                   const std::string& rule, double c_scale, double delta) {
    arise::EstimatorConfig cfg;
    cfg.bandwidth = bandwidth;
    cfg.wavelet.family = arise::wavelet_from_string(wavelet);
    cfg.wavelet.rule = arise::threshold_rule_from_string(rule);
    cfg.wavelet.c_scale = c_scale;
    cfg.wavelet.adm_delta = delta;
    cfg.threads = g.threads;
    return cfg;
}

arise::TimeSeriesMatrix load_series(const std::string& path) {
    return arise::read_csv_file(path).values;
}

arise::VectorXd parse_double_list(const std::string& text, const std::string& flag) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "cannot parse '" + item + "' as a number");
        }
    }
    if (vals.empty()) throw CLI::ValidationError(flag, "empty list");
    return Eigen::Map<arise::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"arise: long-memory time-series analysis (simulation, spectral estimation,\n"
                 "memory-parameter estimation, efficiency tests, LDSS forecasting)"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "RNG seed (fully determines stochastic output)")
        ->each([&g](const std::string&) { g.seed_given = true; });
    app.add_option("--threads", g.threads, "worker pool cap (default: available parallelism)");
    app.add_option("--output", g.output, "write to this file instead of stdout");
    app.add_option("--format", g.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json", "default"}));

    // shared estimator flags
    std::string method = "ase", wavelet = "db4", rule = "soft";
    int bandwidth = 0;
    double c_scale = 0.2, delta = 0.01;
    auto add_estimator_flags = [&](CLI::App* sub) {
        sub->add_option("--method", method, "estimator: ase, gse or tse")
            ->check(CLI::IsMember({"ase", "gse", "tse"}));
        sub->add_option("--bandwidth", bandwidth, "number of Fourier frequencies m (default floor(T^0.65))");
        sub->add_option("--wavelet", wavelet, "wavelet family")->check(CLI::IsMember({"db4", "haar"}));
        sub->add_option("--threshold", rule, "threshold rule")->check(CLI::IsMember({"soft", "hard"}));
        sub->add_option("--c-scale", c_scale, "threshold scale multiplier");
        sub->add_option("--delta", delta, "admissibility exponent delta");
    };

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "generate a fractionally integrated series (CSV)");
    std::string sim_d = "0.3";
    int sim_T = 1024, sim_burn = -1;
    double sim_tau = 0.0;
    std::string sim_marginal = "gaussian";
    sim->add_option("--d", sim_d, "memory parameter(s), comma separated for l >= 2");
    sim->add_option("--T", sim_T, "series length")->required();
    sim->add_option("--tau", sim_tau, "copula correlation for l >= 2");
    sim->add_option("--marginal", sim_marginal, "source marginal")
        ->check(CLI::IsMember({"gaussian", "t3", "t7", "logistic", "sech"}));
    sim->add_option("--burn-in", sim_burn, "burn-in length (default T)");

    // ---- lorenz ----
    auto* lor = app.add_subcommand("lorenz", "integrate a Lorenz trajectory (CSV)");
    int lor_T = 2000;
    double lor_dt = 0.01;
    std::vector<double> lor_init{1.0, 1.0, 1.0};
    std::vector<double> lor_params{10.0, 28.0, 8.0 / 3.0};
    lor->add_option("--T", lor_T, "number of points");
    lor->add_option("--dt", lor_dt, "integration step");
    lor->add_option("--init", lor_init, "initial state x,y,z")->delimiter(',')->expected(3);
    lor->add_option("--params", lor_params, "parameters a,b,c")->delimiter(',')->expected(3);

    // ---- spectrum ----
    auto* spec = app.add_subcommand("spectrum", "spectral matrix estimates (long CSV: j,lambda,p,q,re,im)");
    std::string spec_input, spec_backend = "wavelet";
    int spec_max_freq = 0;
    spec->add_option("input", spec_input, "input CSV")->required();
    spec->add_option("--backend", spec_backend, "periodogram, tapered or wavelet")
        ->check(CLI::IsMember({"periodogram", "tapered", "wavelet"}));
    spec->add_option("--max-freq", spec_max_freq, "emit frequencies 1..m (default T/2)");
    add_estimator_flags(spec);

    // ---- estimate ----
    auto* est = app.add_subcommand("estimate", "memory-parameter estimation (JSON)");
    std::string est_input;
    est->add_option("input", est_input, "input CSV")->required();
    add_estimator_flags(est);

    // ---- test-market ----
    auto* tm = app.add_subcommand("test-market", "market-efficiency test on a series (JSON)");
    std::string tm_input;
    double tm_level = 0.05;
    tm->add_option("input", tm_input, "input CSV")->required();
    tm->add_option("--level", tm_level, "test level");
    add_estimator_flags(tm);

    // ---- test-memorability ----
    auto* tmem = app.add_subcommand("test-memorability",
                                    "residual memorability test on a transformed series (JSON)");
    std::string tmem_input;
    double tmem_ref = 0.0, tmem_level = 0.05;
    tmem->add_option("input", tmem_input, "transformed series CSV")->required();
    tmem->add_option("--reference-dbar", tmem_ref, "d_bar* of the stimulus")->required();
    tmem->add_option("--level", tmem_level, "test level");
    add_estimator_flags(tmem);

    // ---- montecarlo ----
    auto* mc = app.add_subcommand("montecarlo", "run an experiment plan (CSV summary)");
    std::string mc_plan, mc_records;
    mc->add_option("--plan", mc_plan, "plan JSON (schema in README)")->required();
    mc->add_option("--out", g.output, "summary CSV path (alias of --output)");
    mc->add_option("--records", mc_records, "also write per-trial records CSV here");

    // ---- ldss-fit ----
    auto* lf = app.add_subcommand("ldss-fit", "fit the long-dependent state-space model (JSON)");
    std::string lf_input;
    int lf_k = 4, lf_p = 1, lf_q = 0;
    std::string lf_fix_d;
    lf->add_option("input", lf_input, "input CSV")->required();
    lf->add_option("--lag", lf_k, "fractional truncation lag k");
    lf->add_option("--p", lf_p, "AR order (0..2)");
    lf->add_option("--q", lf_q, "MA order (0..2)");
    lf->add_option("--fix-d", lf_fix_d, "skip the estimation step and use these comma-separated d values");
    add_estimator_flags(lf);

    // ---- ldss-forecast ----
    auto* lfc = app.add_subcommand("ldss-forecast", "Monte Carlo forecast from a fitted model (CSV)");
    std::string lfc_input, lfc_model, lfc_samples;
    int lfc_horizon = 12, lfc_K = 1000;
    lfc->add_option("input", lfc_input, "conditioning series CSV")->required();
    lfc->add_option("--model", lfc_model, "fitted model JSON from ldss-fit")->required();
    lfc->add_option("--horizon", lfc_horizon, "forecast steps");
    lfc->add_option("--samples", lfc_K, "Monte Carlo sample paths K");
    lfc->add_option("--samples-output", lfc_samples, "also write raw sample paths CSV here");

    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    arise::set_max_threads(g.threads);

    try {
        if (sim->parsed()) {
            require_format(g, {"csv", "json"});
            arise::VectorXd d = parse_double_list(sim_d, "--d");
            arise::SourceSpec src;
            src.l = static_cast<int>(d.size());
            src.marginal = arise::marginal_from_string(sim_marginal);
            src.copula_corr = sim_tau;
            src.seed = g.seed;
            int burn = sim_burn < 0 ? sim_T : sim_burn;
            arise::TimeSeriesMatrix source = arise::gen_source(src, sim_T + burn);
            emit_table(g, arise::make_table(arise::gen_arise(d, source, burn)));
        } else if (lor->parsed()) {
            require_format(g, {"csv", "json"});
            Eigen::Vector3d init(lor_init[0], lor_init[1], lor_init[2]);
            arise::LorenzParams params{lor_params[0], lor_params[1], lor_params[2]};
            emit_table(g, arise::make_table(arise::gen_lorenz(lor_T, lor_dt, init, params), {"x", "y", "z"}));
        } else if (spec->parsed()) {
            require_format(g, {"csv", "json"});
            arise::TimeSeriesMatrix X = load_series(spec_input);
            arise::EstimatorConfig cfg = make_config(g, bandwidth, wavelet, rule, c_scale, delta);
            int T = static_cast<int>(X.rows());
            int m = spec_max_freq > 0 ? std::min(spec_max_freq, T / 2) : T / 2;
            std::vector<int> freqs;
            for (int j = 1; j <= m; ++j) freqs.push_back(j);
            arise::SpectralMatrixSeries series;
            if (spec_backend == "periodogram") series = arise::periodogram(X, freqs);
            else if (spec_backend == "tapered") series = arise::tapered_periodogram(X, freqs);
            else {
                arise::WaveletSpectrumOptions w = cfg.wavelet;
                w.threads = g.threads;
                series = arise::wavelet_spectrum(X, freqs, w);
            }
            if (g.format == "json") {
                json rows = json::array();
                for (int idx = 0; idx < series.size(); ++idx)
                    for (int p = 0; p < series.dim(); ++p)
                        for (int q = 0; q < series.dim(); ++q)
                            rows.push_back({{"j", series.index[static_cast<std::size_t>(idx)]},
                                            {"lambda", series.lambda[static_cast<std::size_t>(idx)]},
                                            {"p", p + 1},
                                            {"q", q + 1},
                                            {"re", series.mats[static_cast<std::size_t>(idx)](p, q).real()},
                                            {"im", series.mats[static_cast<std::size_t>(idx)](p, q).imag()}});
                emit(g, json{{"schema_version", arise::kSchemaVersion}, {"entries", rows}}.dump(2) + "\n");
            } else {
                std::ostringstream os;
                os << "j,lambda,p,q,re,im\n";
                for (int idx = 0; idx < series.size(); ++idx)
                    for (int p = 0; p < series.dim(); ++p)
                        for (int q = 0; q < series.dim(); ++q)
                            os << series.index[static_cast<std::size_t>(idx)] << ','
                               << arise::format_double(series.lambda[static_cast<std::size_t>(idx)]) << ','
                               << (p + 1) << ',' << (q + 1) << ','
                               << arise::format_double(series.mats[static_cast<std::size_t>(idx)](p, q).real()) << ','
                               << arise::format_double(series.mats[static_cast<std::size_t>(idx)](p, q).imag())
                               << '\n';
                emit(g, os.str());
            }
        } else if (est->parsed()) {
            require_format(g, {"json"});
            arise::EstimatorConfig cfg = make_config(g, bandwidth, wavelet, rule, c_scale, delta);
            arise::MemoryEstimate result =
                arise::estimate(load_series(est_input), cfg, arise::method_from_string(method));
            emit(g, arise::to_json(result, cfg).dump(2) + "\n");
        } else if (tm->parsed()) {
            require_format(g, {"json"});
            arise::EstimatorConfig cfg = make_config(g, bandwidth, wavelet, rule, c_scale, delta);
            arise::TestReport report = arise::test_efficiency(load_series(tm_input), cfg, tm_level);
            emit(g, arise::to_json(report, cfg).dump(2) + "\n");
            std::cerr << (report.reject ? "reject H0: long-term memory detected (market efficiency holds)"
                                        : "fail to reject H0: no long-term memory detected")
                      << " [d_bar=" << report.statistic << ", p=" << report.p_value << "]\n";
        } else if (tmem->parsed()) {
            require_format(g, {"json"});
            arise::EstimatorConfig cfg = make_config(g, bandwidth, wavelet, rule, c_scale, delta);
            arise::TestReport report =
                arise::test_memorability(load_series(tmem_input), tmem_ref, cfg, tmem_level);
            emit(g, arise::to_json(report, cfg).dump(2) + "\n");
            std::cerr << (report.reject ? "reject H0: transformed series loses long-term memory"
                                        : "fail to reject H0: memory gap not significant")
                      << " [d_bar-d_bar*=" << report.statistic << ", p=" << report.p_value << "]\n";
        } else if (mc->parsed()) {
            require_format(g, {"csv"});
            arise::ExperimentPlan plan = arise::plan_from_json(arise::read_json_file(mc_plan));
            if (g.seed_given) plan.master_seed = g.seed;
            plan.threads = g.threads;
            if (plan.kind == arise::ExperimentKind::table1) {
                arise::Table1Result result = arise::run_table1(plan);
                emit(g, arise::table1_to_csv(result));
                if (!mc_records.empty()) {
                    std::ofstream rec(mc_records);
                    if (!rec) throw std::runtime_error(mc_records + ": cannot open for writing");
                    rec << arise::table1_records_to_csv(result);
                }
            } else {
                emit(g, arise::calibration_to_csv(arise::run_calibration(plan)));
            }
        } else if (lf->parsed()) {
            require_format(g, {"json"});
            arise::LdssFitConfig cfg;
            cfg.k = lf_k;
            cfg.p = lf_p;
            cfg.q = lf_q;
            cfg.estimator = make_config(g, bandwidth, wavelet, rule, c_scale, delta);
            cfg.threads = g.threads;
            if (!lf_fix_d.empty()) cfg.fix_d = parse_double_list(lf_fix_d, "--fix-d");
            arise::LdssModel model = arise::ldss_fit(load_series(lf_input), cfg);
            emit(g, arise::to_json(model).dump(2) + "\n");
        } else if (lfc->parsed()) {
            require_format(g, {"csv"});
            arise::LdssModel model = arise::ldss_model_from_json(arise::read_json_file(lfc_model));
            arise::ForecastDistribution fc =
                arise::ldss_forecast(model, load_series(lfc_input), lfc_horizon, lfc_K, g.seed, g.threads);
            std::ostringstream os;
            os << "step,component,mean,lo68_27,hi68_27,lo95_45,hi95_45,lo99_73,hi99_73\n";
            for (int h = 0; h < fc.horizon; ++h)
                for (int i = 0; i < fc.mean.cols(); ++i) {
                    os << (h + 1) << ',' << (i + 1) << ',' << arise::format_double(fc.mean(h, i));
                    for (const auto& iv : fc.intervals)
                        os << ',' << arise::format_double(iv.lo(h, i)) << ','
                           << arise::format_double(iv.hi(h, i));
                    os << '\n';
                }
            emit(g, os.str());
            if (!lfc_samples.empty()) {
                std::ofstream rec(lfc_samples);
                if (!rec) throw std::runtime_error(lfc_samples + ": cannot open for writing");
                rec << "path,step,component,value\n";
                for (int kpath = 0; kpath < fc.K; ++kpath)
                    for (int h = 0; h < fc.horizon; ++h)
                        for (int i = 0; i < fc.mean.cols(); ++i)
                            rec << (kpath + 1) << ',' << (h + 1) << ',' << (i + 1) << ','
                                << arise::format_double(fc.samples[static_cast<std::size_t>(kpath)](h, i)) << '\n';
            }
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
