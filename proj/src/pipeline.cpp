#include "levyob/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

namespace levyob {

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir);
}

void note(const RunContext& ctx, const std::string& line) {
    if (!ctx.quiet) std::fprintf(stdout, "%s\n", line.c_str());
}

std::function<double(double)> make_payoff(const ExperimentConfig& cfg) {
    const double K = cfg.problem.strike;
    if (cfg.problem.payoff == "put")
        return [K](double x) { return std::max(K - std::exp(x), 0.0); };
    if (cfg.problem.payoff == "call")
        return [K](double x) { return std::max(std::exp(x) - K, 0.0); };
    // custom table: piecewise-linear in x, clamped at the ends
    auto table = cfg.problem.table;
    if (table.size() < 2)
        throw ConfigError("custom_table payoff needs at least 2 (x, phi) rows");
    std::sort(table.begin(), table.end());
    return [table](double x) {
        if (x <= table.front().first) return table.front().second;
        if (x >= table.back().first) return table.back().second;
        auto it = std::lower_bound(table.begin(), table.end(),
                                   std::make_pair(x, -1e300));
        const auto hi = it;
        const auto lo = it - 1;
        const double w = (x - lo->first) / (hi->first - lo->first);
        return (1.0 - w) * lo->second + w * hi->second;
    };
}

}  // namespace

ObstacleProblemSpec make_problem_spec(const ExperimentConfig& cfg,
                                      const LevyModel& model) {
    const double K = cfg.problem.strike;
    const double sigma_eff = std::sqrt(std::max(model.jump_variance(), 1e-8));
    // stationary values decay on the discounting time scale, so the domain
    // half-width uses min(1/c0, 10) years of diffusion-equivalent spread
    const double t_ref = cfg.problem.kind == "evolution"
                             ? std::max(cfg.problem.horizon, 0.1)
                             : std::min(1.0 / std::max(cfg.model.rate, 1e-3), 10.0);
    const double width =
        std::max(cfg.problem.domain_padding * sigma_eff * std::sqrt(t_ref), 0.75);
    const double center = std::log(K);
    const double x_min = center - width;
    const double x_max = center + width;

    auto payoff = make_payoff(cfg);
    const double r = cfg.model.rate;
    ExtensionRule ext = [&]() {
        if (cfg.problem.payoff == "put")
            return ExtensionRule::function(payoff, K, 0.0);
        if (cfg.problem.payoff == "call")
            return ExtensionRule::function(payoff, 0.0, 0.0);
        return ExtensionRule::constants(cfg.problem.table.front().second,
                                        cfg.problem.table.back().second);
    }();

    if (cfg.problem.kind == "stationary") {
        auto spec = ObstacleProblemSpec::stationary(
            payoff, [](double) { return 0.0; }, [r](double) { return r; }, r, x_min,
            x_max, ext);
        return spec;
    }
    auto spec = ObstacleProblemSpec::evolution(
        [payoff](double, double x) { return payoff(x); },
        [](double, double) { return 0.0; }, [r](double, double) { return r; },
        payoff, cfg.problem.horizon, r, x_min, x_max, ext);
    return spec;
}

void run_calibrate(const RunContext& ctx) {
    ensure_dir(ctx.out_dir);
    const LevyModel model = ctx.cfg.make_model();
    write_model_json(join_path(ctx.out_dir, "model.json"), model, ctx.cfg.model.rate);
    write_run_json(join_path(ctx.out_dir, "run.json"), ctx.cfg, {"model.json"});
    note(ctx, "calibrated drift b* = " + format_double(model.drift()));
}

void run_simulate(const RunContext& ctx) {
    ensure_dir(ctx.out_dir);
    const LevyModel model = ctx.cfg.make_model();
    const auto process = ProcessSpec::levy(model);
    const double T =
        ctx.cfg.problem.kind == "evolution" ? ctx.cfg.problem.horizon : 1.0;
    std::vector<double> mesh(ctx.cfg.solver.mc_steps + 1);
    for (std::size_t j = 0; j < mesh.size(); ++j)
        mesh[j] = T * static_cast<double>(j) /
                  static_cast<double>(ctx.cfg.solver.mc_steps);
    const auto batch =
        simulate_paths(process, 0.0, T, mesh, ctx.cfg.solver.eps_trunc,
                       ctx.cfg.solver.mc_paths, ctx.cfg.solver.seed, ctx.threads);
    write_paths_csv(join_path(ctx.out_dir, "paths.csv"), batch);
    write_paths_sidecar(join_path(ctx.out_dir, "paths_meta.json"), batch);
    write_model_json(join_path(ctx.out_dir, "model.json"), model, ctx.cfg.model.rate);
    write_run_json(join_path(ctx.out_dir, "run.json"), ctx.cfg,
                   {"paths.csv", "paths_meta.json", "model.json"});
    note(ctx, "simulated " + std::to_string(batch.n_paths) + " paths");
}

namespace {

ValueGrid solve_from_config(const RunContext& ctx, const LevyModel& model,
                            const ObstacleProblemSpec& spec) {
    auto op = OperatorSpec::levy(model);
    if (spec.kind == ProblemKind::Stationary) {
        StationaryOptions so;
        so.tol = ctx.cfg.solver.tol;
        so.max_iter = ctx.cfg.solver.max_iter;
        so.damping = ctx.cfg.solver.damping;
        return solve_stationary_grid(spec, op, ctx.cfg.solver.grid_n, so);
    }
    EvolutionOptions eo;
    eo.n_time = ctx.cfg.solver.time_steps;
    eo.tol = ctx.cfg.solver.tol;
    return solve_evolution_grid(spec, op, ctx.cfg.solver.grid_n, eo);
}

}  // namespace

void run_solve(const RunContext& ctx) {
    ensure_dir(ctx.out_dir);
    const LevyModel model = ctx.cfg.make_model();
    const auto spec = make_problem_spec(ctx.cfg, model);
    spec.validate();
    const ValueGrid grid = solve_from_config(ctx, model, spec);

    std::vector<std::string> artifacts = {"model.json"};
    write_model_json(join_path(ctx.out_dir, "model.json"), model, ctx.cfg.model.rate);
    const auto& reports = ctx.cfg.outputs.reports;
    if (std::find(reports.begin(), reports.end(), "value") != reports.end()) {
        write_value_csv(join_path(ctx.out_dir, "value.csv"), grid, spec);
        artifacts.push_back("value.csv");
    }
    if (std::find(reports.begin(), reports.end(), "boundary") != reports.end()) {
        write_boundary_csv(join_path(ctx.out_dir, "boundary.csv"),
                           free_boundary(grid, spec));
        artifacts.push_back("boundary.csv");
    }
    if (std::find(reports.begin(), reports.end(), "regularity") != reports.end()) {
        const auto rep = regularity_report(grid, spec);
        const auto moduli = estimate_modulus(grid, Direction::Space);
        write_regularity_json(join_path(ctx.out_dir, "regularity.json"), rep, moduli);
        write_moduli_csv(join_path(ctx.out_dir, "regularity_moduli.csv"), moduli);
        artifacts.push_back("regularity.json");
        artifacts.push_back("regularity_moduli.csv");
    }
    if (ctx.cfg.outputs.write_paths) {
        RunContext sim = ctx;
        run_simulate(sim);
        artifacts.push_back("paths.csv");
    }
    artifacts.push_back("run.json");
    write_run_json(join_path(ctx.out_dir, "run.json"), ctx.cfg, artifacts);
    note(ctx, "solved " + ctx.cfg.problem.kind + " problem on " +
                  std::to_string(grid.nx()) + " nodes (" + grid.meta.scheme + ", " +
                  std::to_string(grid.meta.iterations) + " iterations)");
}

void run_diagnose(const RunContext& ctx) {
    ensure_dir(ctx.out_dir);
    const LevyModel model = ctx.cfg.make_model();
    const auto spec = make_problem_spec(ctx.cfg, model);
    spec.validate();
    const ValueGrid grid = solve_from_config(ctx, model, spec);
    const auto rep = regularity_report(grid, spec);
    const auto moduli = estimate_modulus(grid, Direction::Space);
    write_regularity_json(join_path(ctx.out_dir, "regularity.json"), rep, moduli);
    write_moduli_csv(join_path(ctx.out_dir, "regularity_moduli.csv"), moduli);
    write_run_json(join_path(ctx.out_dir, "run.json"), ctx.cfg,
                   {"regularity.json", "regularity_moduli.csv"});
    note(ctx, "alpha_x = " + format_double(rep.alpha_x) +
                  " (r2 = " + format_double(rep.r2_x) + ")");
}

bool run_crosscheck(const RunContext& ctx) {
    ensure_dir(ctx.out_dir);
    const LevyModel model = ctx.cfg.make_model();
    const auto spec = make_problem_spec(ctx.cfg, model);
    spec.validate();
    const auto process = ProcessSpec::levy(model);
    const ValueGrid grid = solve_from_config(ctx, model, spec);

    struct Row {
        std::string name;
        double reference, estimate, diff, budget;
        bool pass;
    };
    std::vector<Row> rows;

    McOptions mc;
    mc.n_paths = ctx.cfg.solver.mc_paths;
    mc.n_steps = ctx.cfg.solver.mc_steps;
    mc.basis_degree = ctx.cfg.solver.basis_degree;
    mc.eps_trunc = ctx.cfg.solver.eps_trunc;
    mc.seed = ctx.cfg.solver.seed;
    mc.horizon_proxy = ctx.cfg.solver.horizon_proxy;
    mc.estimate_bermudan_bias = true;
    mc.threads = ctx.threads;

    const double span = spec.x_max - spec.x_min;
    const std::vector<double> probes = {spec.x_min + 0.30 * span,
                                        spec.x_min + 0.42 * span,
                                        spec.x_min + 0.50 * span,
                                        spec.x_min + 0.58 * span,
                                        spec.x_min + 0.70 * span};
    for (double x : probes) {
        const double ref = grid.interpolate(0, x);
        McValue est;
        if (spec.kind == ProblemKind::Stationary)
            est = solve_stationary_mc(spec, process, x, mc);
        else
            est = solve_evolution_mc(spec, process, 0.0, x, mc);
        const double diff = std::abs(est.value - ref);
        const double budget =
            std::max(0.01 * std::abs(ref), 3.0 * est.std_error + est.bias_horizon +
                                               est.bias_bermudan);
        rows.push_back({"value@x=" + format_double(x), ref, est.value, diff, budget,
                        diff <= budget});
    }

    if (spec.kind == ProblemKind::Stationary) {
        const auto fb = free_boundary(grid, spec);
        double x_star = 0.5 * (spec.x_min + spec.x_max);
        if (!fb.empty_contact && !fb.slices[0].x_star.empty())
            x_star = fb.slices[0].x_star[0];
        const double h = grid.x_grid[1] - grid.x_grid[0];
        const std::vector<double> dpp_probes = {x_star + 1.5 * h,
                                                x_star + 0.15 * span, spec.x_min + 0.25 * span};
        for (double x : dpp_probes) {
            const auto res = dpp_check(spec, process, grid, x, 0.25 * span,
                                       ctx.cfg.solver.mc_paths / 4,
                                       ctx.cfg.solver.seed + 7, 4.0 * h * h);
            rows.push_back({"dpp@x=" + format_double(x), res.grid_value,
                            res.recomputed, res.discrepancy,
                            res.error_budget + 0.01 * std::abs(res.grid_value),
                            res.discrepancy <=
                                res.error_budget + 0.01 * std::abs(res.grid_value)});
        }
    }

    std::string csv = "check,reference,estimate,abs_diff,budget,pass\n";
    bool all_pass = true;
    for (const auto& r : rows) {
        csv += r.name + ',' + format_double(r.reference) + ',' +
               format_double(r.estimate) + ',' + format_double(r.diff) + ',' +
               format_double(r.budget) + ',' + (r.pass ? "1" : "0") + '\n';
        all_pass = all_pass && r.pass;
        note(ctx, (r.pass ? "PASS " : "FAIL ") + r.name + "  |diff| = " +
                      format_double(r.diff) + "  budget = " + format_double(r.budget));
    }
    write_text_file(join_path(ctx.out_dir, "crosscheck.csv"), csv);
    write_run_json(join_path(ctx.out_dir, "run.json"), ctx.cfg, {"crosscheck.csv"});
    return all_pass;
}

}  // namespace levyob
