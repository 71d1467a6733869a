#include "levyob/config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

namespace levyob {

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown_keys(const Json& j, const std::set<std::string>& known,
                         const std::string& section) {
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key))
            throw ConfigError("unknown key '" + key + "' in section '" + section +
                              "'");
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json_text(text);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown_keys(j, {"schema", "model", "problem", "solver", "outputs"}, "root");

    ExperimentConfig cfg;
    cfg.schema = j.value("schema", 0);
    if (cfg.schema != 1) throw ConfigError("unsupported or missing schema version");

    if (!j.contains("model")) throw ConfigError("missing 'model' section");
    {
        const Json& m = j["model"];
        reject_unknown_keys(m,
                            {"family", "nu_vg", "sigma", "theta", "C", "G", "M", "Y",
                             "point_masses", "drift_b", "rate"},
                            "model");
        cfg.model.family = m.value("family", "");
        cfg.model.rate = m.value("rate", 0.0);
        if (m.contains("drift_b")) cfg.model.drift_b = m["drift_b"].get<double>();
        if (cfg.model.family == "vg") {
            for (const char* key : {"nu_vg", "sigma", "theta"})
                if (!m.contains(key))
                    throw ConfigError(std::string("vg model needs '") + key + "'");
            cfg.model.nu_vg = m["nu_vg"].get<double>();
            cfg.model.sigma = m["sigma"].get<double>();
            cfg.model.theta = m["theta"].get<double>();
        } else if (cfg.model.family == "cgmy") {
            for (const char* key : {"C", "G", "M", "Y"})
                if (!m.contains(key))
                    throw ConfigError(std::string("cgmy model needs '") + key + "'");
            cfg.model.C = m["C"].get<double>();
            cfg.model.G = m["G"].get<double>();
            cfg.model.M = m["M"].get<double>();
            cfg.model.Y = m["Y"].get<double>();
        } else if (cfg.model.family == "point_masses") {
            if (!m.contains("point_masses"))
                throw ConfigError("point_masses model needs 'point_masses'");
            for (const auto& pm : m["point_masses"])
                cfg.model.point_masses.push_back(
                    {pm.at(0).get<double>(), pm.at(1).get<double>()});
        } else {
            throw ConfigError("model family must be vg, cgmy or point_masses");
        }
    }

    if (j.contains("problem")) {
        const Json& p = j["problem"];
        reject_unknown_keys(
            p, {"kind", "payoff", "strike", "horizon", "domain_padding", "table"},
            "problem");
        cfg.problem.kind = p.value("kind", "stationary");
        cfg.problem.payoff = p.value("payoff", "put");
        cfg.problem.strike = p.value("strike", 1.0);
        cfg.problem.horizon = p.value("horizon", 0.0);
        cfg.problem.domain_padding = p.value("domain_padding", 8.0);
        if (p.contains("table"))
            for (const auto& row : p["table"])
                cfg.problem.table.emplace_back(row.at(0).get<double>(),
                                               row.at(1).get<double>());
        if (cfg.problem.kind != "stationary" && cfg.problem.kind != "evolution")
            throw ConfigError("problem kind must be stationary or evolution");
        if (cfg.problem.payoff != "put" && cfg.problem.payoff != "call" &&
            cfg.problem.payoff != "custom_table")
            throw ConfigError("payoff must be put, call or custom_table");
        if (cfg.problem.kind == "evolution" && !(cfg.problem.horizon > 0.0))
            throw ConfigError("evolution problems need a positive horizon");
    }

    if (j.contains("solver")) {
        const Json& s = j["solver"];
        reject_unknown_keys(s,
                            {"grid_n", "time_steps", "tol", "damping", "max_iter",
                             "mc_paths", "mc_steps", "basis_degree", "eps_trunc",
                             "horizon_proxy", "seed"},
                            "solver");
        cfg.solver.grid_n = s.value("grid_n", std::size_t{513});
        cfg.solver.time_steps = s.value("time_steps", std::size_t{256});
        cfg.solver.tol = s.value("tol", 1e-8);
        cfg.solver.damping = s.value("damping", 0.8);
        cfg.solver.max_iter = s.value("max_iter", 200);
        cfg.solver.mc_paths = s.value("mc_paths", std::size_t{20000});
        cfg.solver.mc_steps = s.value("mc_steps", std::size_t{256});
        cfg.solver.basis_degree = s.value("basis_degree", 3);
        cfg.solver.eps_trunc = s.value("eps_trunc", 1e-3);
        cfg.solver.horizon_proxy = s.value("horizon_proxy", 0.0);
        cfg.solver.seed = s.value("seed", std::uint64_t{1});
        if (cfg.solver.grid_n < 16) throw ConfigError("grid_n must be >= 16");
        if (!(cfg.solver.eps_trunc > 0.0))
            throw ConfigError("eps_trunc must be positive");
    }

    if (j.contains("outputs")) {
        const Json& o = j["outputs"];
        reject_unknown_keys(o, {"dir", "write_paths", "reports"}, "outputs");
        cfg.outputs.dir = o.value("dir", "out");
        cfg.outputs.write_paths = o.value("write_paths", false);
        if (o.contains("reports"))
            cfg.outputs.reports = o["reports"].get<std::vector<std::string>>();
        for (const auto& r : cfg.outputs.reports)
            if (r != "value" && r != "boundary" && r != "regularity")
                throw ConfigError("unknown report '" + r + "'");
    }
    return cfg;
}

LevyModel ExperimentConfig::make_model() const {
    LevyModel m = [&]() {
        if (model.family == "vg")
            return LevyModel::vg({model.nu_vg, model.sigma, model.theta,
                                  model.drift_b.value_or(0.0)});
        if (model.family == "cgmy")
            return LevyModel::cgmy({model.C, model.G, model.M, model.Y,
                                    model.drift_b.value_or(0.0)});
        return LevyModel::point_masses(model.point_masses,
                                       model.drift_b.value_or(0.0));
    }();
    if (!model.drift_b) m.set_drift(calibrate_drift(m, model.rate));
    return m;
}

std::string ExperimentConfig::canonical_text() const {
    Json j;
    j["schema"] = schema;
    Json m;
    m["family"] = model.family;
    if (model.family == "vg") {
        m["nu_vg"] = model.nu_vg;
        m["sigma"] = model.sigma;
        m["theta"] = model.theta;
    } else if (model.family == "cgmy") {
        m["C"] = model.C;
        m["G"] = model.G;
        m["M"] = model.M;
        m["Y"] = model.Y;
    } else {
        Json pms = Json::array();
        for (const auto& pm : model.point_masses)
            pms.push_back({pm.location, pm.intensity});
        m["point_masses"] = pms;
    }
    if (model.drift_b) m["drift_b"] = *model.drift_b;
    m["rate"] = model.rate;
    j["model"] = m;
    Json p;
    p["kind"] = problem.kind;
    p["payoff"] = problem.payoff;
    p["strike"] = problem.strike;
    p["horizon"] = problem.horizon;
    p["domain_padding"] = problem.domain_padding;
    if (!problem.table.empty()) {
        Json t = Json::array();
        for (const auto& row : problem.table) t.push_back({row.first, row.second});
        p["table"] = t;
    }
    j["problem"] = p;
    Json s;
    s["grid_n"] = solver.grid_n;
    s["time_steps"] = solver.time_steps;
    s["tol"] = solver.tol;
    s["damping"] = solver.damping;
    s["max_iter"] = solver.max_iter;
    s["mc_paths"] = solver.mc_paths;
    s["mc_steps"] = solver.mc_steps;
    s["basis_degree"] = solver.basis_degree;
    s["eps_trunc"] = solver.eps_trunc;
    s["horizon_proxy"] = solver.horizon_proxy;
    s["seed"] = solver.seed;
    j["solver"] = s;
    Json o;
    o["dir"] = outputs.dir;
    o["write_paths"] = outputs.write_paths;
    o["reports"] = outputs.reports;
    j["outputs"] = o;
    return j.dump(2);
}

}  // namespace levyob
