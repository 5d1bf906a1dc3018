#include "arise/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace arise {

void write_json_file(const std::string& path, const nlohmann::json& document) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << document.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    return nlohmann::json::parse(in);
}

namespace {

nlohmann::json vector_to_json(const VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

nlohmann::json matrix_to_json(const MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

VectorXd vector_from_json(const nlohmann::json& a) {
    VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<int>(i)) = a[i].get<double>();
    return v;
}

MatrixXd matrix_from_json(const nlohmann::json& rows) {
    if (rows.empty()) return MatrixXd();
    MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != static_cast<std::size_t>(m.cols()))
            throw std::invalid_argument("ragged matrix in JSON document");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c].get<double>();
    }
    return m;
}

nlohmann::json config_to_json(const EstimatorConfig& config) {
    return {{"bandwidth", config.bandwidth},
            {"search_lo", config.search_lo},
            {"search_hi", config.search_hi},
            {"wavelet", wavelet_to_string(config.wavelet.family)},
            {"threshold", threshold_rule_to_string(config.wavelet.rule)},
            {"c_scale", config.wavelet.c_scale},
            {"delta", config.wavelet.adm_delta}};
}

} // namespace

nlohmann::json to_json(const MemoryEstimate& est, const EstimatorConfig& config) {
    return {{"schema_version", kSchemaVersion},
            {"method", method_to_string(est.method)},
            {"d_hat", vector_to_json(est.d_hat)},
            {"g_hat", matrix_to_json(est.g_hat)},
            {"sigma", matrix_to_json(est.sigma)},
            {"objective", est.objective_value},
            {"m", est.m},
            {"T", est.T},
            {"config", config_to_json(config)}};
}

nlohmann::json to_json(const TestReport& report, const EstimatorConfig& config) {
    return {{"schema_version", kSchemaVersion},
            {"hypothesis", report.hypothesis == HypothesisKind::efficiency ? "efficiency" : "memorability"},
            {"statistic", report.statistic},
            {"std_error", report.std_error},
            {"z", report.z},
            {"p_value", report.p_value},
            {"level", report.level},
            {"verdict", report.reject ? "reject" : "fail_to_reject"},
            {"estimate", to_json(report.estimate, config)}};
}

nlohmann::json to_json(const LdssModel& model) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& m : model.W) w.push_back(matrix_to_json(m));
    nlohmann::json v = nlohmann::json::array();
    for (const auto& m : model.V) v.push_back(matrix_to_json(m));
    return {{"schema_version", kSchemaVersion},
            {"d", vector_to_json(model.d)},
            {"k", model.k},
            {"p", model.p},
            {"q", model.q},
            {"mu", vector_to_json(model.mu)},
            {"sigma_eps", matrix_to_json(model.sigma_eps)},
            {"W", w},
            {"V", v},
            {"U", matrix_to_json(model.U)},
            {"sigma_h", matrix_to_json(model.sigma_h)},
            {"loglik", model.loglik},
            {"init", model.init == LdssInit::stationary ? "stationary" : "diffuse"},
            {"diffuse_kappa", model.diffuse_kappa}};
}

LdssModel ldss_model_from_json(const nlohmann::json& j) {
    LdssModel m;
    m.d = vector_from_json(j.at("d"));
    m.k = j.at("k").get<int>();
    m.p = j.at("p").get<int>();
    m.q = j.at("q").get<int>();
    m.mu = vector_from_json(j.at("mu"));
    m.sigma_eps = matrix_from_json(j.at("sigma_eps"));
    for (const auto& w : j.at("W")) m.W.push_back(matrix_from_json(w));
    for (const auto& v : j.at("V")) m.V.push_back(matrix_from_json(v));
    m.U = matrix_from_json(j.at("U"));
    m.sigma_h = matrix_from_json(j.at("sigma_h"));
    m.loglik = j.value("loglik", 0.0);
    m.init = j.value("init", std::string("stationary")) == "diffuse" ? LdssInit::diffuse : LdssInit::stationary;
    m.diffuse_kappa = j.value("diffuse_kappa", 1e6);
    if (static_cast<int>(m.W.size()) != m.p + 1 || static_cast<int>(m.V.size()) != m.q + 1)
        throw std::invalid_argument("ldss model JSON: W/V lengths inconsistent with p/q");
    return m;
}

ExperimentPlan plan_from_json(const nlohmann::json& j) {
    ExperimentPlan plan;
    plan.kind = experiment_kind_from_string(j.value("kind", std::string("table1")));
    plan.trials = j.value("trials", 500);
    plan.master_seed = j.value("master_seed", static_cast<std::uint64_t>(1));
    plan.burn_in = j.value("burn_in", -1);
    plan.T = j.value("T", 4096);
    plan.level = j.value("level", 0.05);
    plan.power_d = j.value("power_d", 0.2);
    plan.consistency_d = j.value("consistency_d", 0.3);
    if (j.contains("consistency_T")) plan.consistency_T = j.at("consistency_T").get<std::vector<int>>();
    if (j.contains("method")) plan.method = method_from_string(j.at("method").get<std::string>());
    if (j.contains("bandwidth")) plan.estimator.bandwidth = j.at("bandwidth").get<int>();
    if (j.contains("wavelet")) plan.estimator.wavelet.family = wavelet_from_string(j.at("wavelet").get<std::string>());
    if (j.contains("threshold"))
        plan.estimator.wavelet.rule = threshold_rule_from_string(j.at("threshold").get<std::string>());
    if (j.contains("c_scale")) plan.estimator.wavelet.c_scale = j.at("c_scale").get<double>();
    if (j.contains("delta")) plan.estimator.wavelet.adm_delta = j.at("delta").get<double>();
    for (const auto& cj : j.value("cells", nlohmann::json::array())) {
        ScenarioCell cell;
        cell.tau = cj.value("tau", 0.0);
        cell.d0 = vector_from_json(cj.at("d"));
        cell.marginal = marginal_from_string(cj.value("marginal", std::string("gaussian")));
        cell.T = cj.value("T", 1024);
        cell.method = method_from_string(cj.value("method", std::string("ase")));
        plan.cells.push_back(std::move(cell));
    }
    if (plan.kind == ExperimentKind::table1 && plan.cells.empty())
        throw std::invalid_argument("plan: table1 requires a non-empty cells array");
    return plan;
}

} // namespace arise
