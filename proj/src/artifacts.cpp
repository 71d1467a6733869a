#include "levyob/artifacts.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace levyob {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

void write_value_csv(const std::string& path, const ValueGrid& grid,
                     const ObstacleProblemSpec& spec) {
    std::string s = "t,x,v,phi,contact,residual\n";
    for (std::size_t m = 0; m < grid.nt(); ++m) {
        const double t = grid.t_mesh[m];
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            s += format_double(t);
            s += ',';
            s += format_double(grid.x_grid[i]);
            s += ',';
            s += format_double(grid.at(m, i));
            s += ',';
            s += format_double(spec.obstacle(t, grid.x_grid[i]));
            s += ',';
            s += grid.in_contact(m, i) ? '1' : '0';
            s += ',';
            s += format_double(grid.residuals[m * grid.nx() + i]);
            s += '\n';
        }
    }
    write_text_file(path, s);
}

void write_boundary_csv(const std::string& path, const FreeBoundary& fb) {
    std::string s = "t,x_star\n";
    for (const auto& slice : fb.slices)
        for (double xs : slice.x_star) {
            s += format_double(slice.t);
            s += ',';
            s += format_double(xs);
            s += '\n';
        }
    write_text_file(path, s);
}

void write_paths_csv(const std::string& path, const PathBatch& batch) {
    std::string s = "path_id,t,x\n";
    for (std::size_t p = 0; p < batch.n_paths; ++p)
        for (std::size_t j = 0; j < batch.times.size(); ++j) {
            s += std::to_string(p);
            s += ',';
            s += format_double(batch.times[j]);
            s += ',';
            s += format_double(batch.at(p, j));
            s += '\n';
        }
    write_text_file(path, s);
}

void write_paths_sidecar(const std::string& path, const PathBatch& batch) {
    Json j;
    j["seed"] = batch.seed;
    j["eps_trunc"] = batch.eps_trunc;
    j["sigma2_eps"] = batch.sigma2_eps;
    j["n_paths"] = batch.n_paths;
    Json mesh;
    mesh["t0"] = batch.times.front();
    mesh["t_end"] = batch.times.back();
    mesh["points"] = batch.times.size();
    j["mesh"] = mesh;
    std::uint64_t total_jumps = 0;
    for (auto c : batch.jump_counts) total_jumps += c;
    j["total_jumps"] = total_jumps;
    write_text_file(path, j.dump(2) + "\n");
}

void write_regularity_json(const std::string& path, const RegularityReport& rep,
                           const std::vector<ModulusPoint>& moduli_x) {
    Json j;
    j["alpha_x"] = rep.alpha_x;
    j["alpha_x_stderr"] = rep.alpha_x_stderr;
    j["lip_x"] = rep.lip_x;
    j["r2_x"] = rep.r2_x;
    if (rep.has_time_direction) {
        j["alpha_t"] = rep.alpha_t;
        j["r2_t"] = rep.r2_t;
    }
    j["fit_h_min"] = rep.fit_h_min;
    j["fit_h_max"] = rep.fit_h_max;
    j["condition_c0_ge_lip"] = rep.condition_c0_ge_lip;
    j["constant_function"] = rep.constant_function;
    Json table = Json::array();
    for (const auto& m : moduli_x) table.push_back({m.h, m.omega});
    j["moduli_x"] = table;
    write_text_file(path, j.dump(2) + "\n");
}

void write_model_json(const std::string& path, const LevyModel& model, double rate) {
    Json j;
    j["family"] = model.name();
    j["rate"] = rate;
    j["drift_b"] = model.drift();
    if (model.vg_params()) {
        const auto& p = *model.vg_params();
        j["nu_vg"] = p.nu_vg;
        j["sigma"] = p.sigma;
        j["theta"] = p.theta;
        auto [ep, en] = vg_roots(p);
        j["eta_p"] = ep;
        j["eta_n"] = en;
    }
    if (model.cgmy_params()) {
        const auto& p = *model.cgmy_params();
        j["C"] = p.C;
        j["G"] = p.G;
        j["M"] = p.M;
        j["Y"] = p.Y;
        j["admissible"] = p.admissible();
    }
    j["finite_variation"] = model.finite_variation();
    j["exp_moment"] = model.has_exp_moment();
    j["jump_variance"] = model.jump_variance();
    const double resid = model.psi(Complex(0.0, -1.0)).real() - rate;
    j["martingale_residual"] = resid;
    Json table = Json::array();
    for (int k = 0; k <= 80; ++k) {
        const double xi = -10.0 + 20.0 * k / 80.0;
        const Complex v = model.psi(Complex(xi, 0.0));
        table.push_back({xi, v.real(), v.imag()});
    }
    j["psi_table"] = table;
    write_text_file(path, j.dump(2) + "\n");
}

void write_moduli_csv(const std::string& path,
                      const std::vector<ModulusPoint>& moduli) {
    std::string s = "h,omega\n";
    for (const auto& m : moduli) {
        s += format_double(m.h);
        s += ',';
        s += format_double(m.omega);
        s += '\n';
    }
    write_text_file(path, s);
}

void write_generator_csv(const std::string& path, const NonlocalOperator& op,
                         const SampledFunction& u) {
    std::string s = "x,Lu\n";
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double x = u.node(i);
        s += format_double(x);
        s += ',';
        s += format_double(op.apply(u, x));
        s += '\n';
    }
    write_text_file(path, s);
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string text = cfg.canonical_text();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_run_json(const std::string& path, const ExperimentConfig& cfg,
                    const std::vector<std::string>& artifact_names) {
    Json j;
    j["version"] = kVersion;
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    j["config_hash"] = hex;
    j["seed"] = cfg.solver.seed;
    j["artifacts"] = artifact_names;
    j["config"] = Json::parse(cfg.canonical_text());
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace levyob
