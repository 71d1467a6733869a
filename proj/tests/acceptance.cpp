// Acceptance suite: one pass/fail line per criterion, tolerances pinned in
// code. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "levyob/diagnostics.hpp"
#include "levyob/pipeline.hpp"

using namespace levyob;

namespace {

struct Harness {
    int failures = 0;
    int index = 0;

    void run(const std::string& name, double time_limit_s,
             const std::function<bool(std::string&)>& body) {
        ++index;
        std::string detail;
        bool ok = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
            ok = false;
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (time_limit_s > 0.0 && secs > time_limit_s) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
        }
        if (!ok) ++failures;
        std::printf("[%s] %02d %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", index,
                    name.c_str(), secs, detail.empty() ? "" : ": ",
                    detail.c_str());
        std::fflush(stdout);
    }
};

LevyModel calibrated_vg(double r) {
    auto model = LevyModel::vg({0.3, 0.2, -0.1, 0.0});
    model.set_drift(calibrate_drift(model, r));
    return model;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

const char* kReferenceConfig = R"({
  "schema": 1,
  "model": {"family": "vg", "nu_vg": 0.3, "sigma": 0.2, "theta": -0.1, "rate": 0.05},
  "problem": {"kind": "stationary", "payoff": "put", "strike": 1.0, "domain_padding": 6.0},
  "solver": {"grid_n": 257, "mc_paths": 2000, "mc_steps": 64, "seed": 11},
  "outputs": {"dir": "OUT"}
})";

// ---------------------------------------------------------------- criteria

bool criterion_psi_suite(std::string& detail) {
    const auto vg = calibrated_vg(0.05);
    const auto cgmy = LevyModel::cgmy({1.0, 5.0, 5.0, 0.8, 0.01});
    const auto pm = LevyModel::point_masses({{0.25, 1.3}, {-0.4, 0.7}}, 0.02);
    double worst_zero = 0.0, worst_herm = 0.0, worst_re = 0.0;
    for (const auto& model : {vg, cgmy, pm}) {
        worst_zero = std::max(worst_zero, std::abs(model.psi(Complex(0.0, 0.0))));
        for (int k = 0; k < 50; ++k) {
            const double xi = -12.0 + 24.0 * k / 49.0;
            const Complex v = model.psi(Complex(xi, 0.0));
            const Complex w = model.psi(Complex(-xi, 0.0));
            worst_herm = std::max(worst_herm, std::abs(w - std::conj(v)));
            worst_re = std::max(worst_re, v.real());
        }
    }
    double worst_quad = 0.0;
    const VGParams vp = *vg.vg_params();
    for (int k = 0; k <= 100; ++k) {
        const double xi = -10.0 + 20.0 * k / 100.0;
        const Complex cf = psi_vg(vp, Complex(xi, 0.0));
        const Complex q = psi_quadrature(vg.measure(), vg.drift(), Complex(xi, 0.0)).value;
        worst_quad = std::max(worst_quad, std::abs(q - cf) / (1.0 + std::abs(cf)));
    }
    detail = "zero " + fmt(worst_zero) + ", herm " + fmt(worst_herm) + ", re " +
             fmt(worst_re) + ", quad-vs-closed " + fmt(worst_quad);
    return worst_zero <= 1e-12 && worst_herm <= 1e-10 && worst_re <= 1e-12 &&
           worst_quad <= 1e-6;
}

bool criterion_calibration(std::string& detail) {
    double worst = 0.0;
    for (double r : {0.01, 0.05}) {
        auto vg = LevyModel::vg({0.3, 0.2, -0.1, 0.0});
        if (!(vg_roots(*vg.vg_params()).first < 1.0)) return false;
        vg.set_drift(calibrate_drift(vg, r));
        worst = std::max(worst, std::abs(vg.psi(Complex(0.0, -1.0)).real() - r));
        auto cg = LevyModel::cgmy({1.0, 5.0, 5.0, 0.8, 0.0});
        cg.set_drift(calibrate_drift(cg, r));
        worst = std::max(worst, std::abs(cg.psi(Complex(0.0, -1.0)).real() - r));
    }
    detail = "worst residual " + fmt(worst);
    return worst <= 1e-10;
}

bool criterion_martingale_mc(std::string& detail) {
    const auto model = calibrated_vg(0.05);
    const auto mc = martingale_check(model, 0.05, 1.0, 100000, 1e-4, 20240516);
    const double err = std::abs(mc.mean - 1.0);
    const double budget = 3.0 * mc.std_error + mc.bias_bound;
    detail = "mean " + fmt(mc.mean) + ", |err| " + fmt(err) + " vs 3se+bias " +
             fmt(budget);
    return err <= budget;
}

bool criterion_symbol_check(std::string& detail) {
    const std::vector<double> xis = {0.5, 1.0, 2.0, 4.0};
    // the suite error is the worst relative error over the whole battery;
    // halving the grid must at least halve it
    double worst_fine = 0.0, worst_coarse = 0.0;
    for (double s : {0.25, 0.5, 0.75}) {
        OperatorSpec op;
        op.measure = LevyMeasureSpec::symmetric_stable(s);
        op.drift_b = [](double) { return 0.0; };
        auto psi = [s](double xi) {
            return Complex(-std::pow(std::abs(xi), 2.0 * s), 0.0);
        };
        worst_fine = std::max(worst_fine, symbol_check(op, psi, xis, -4.0, 4.0, 2048));
        worst_coarse =
            std::max(worst_coarse, symbol_check(op, psi, xis, -4.0, 4.0, 1024));
    }
    {
        const auto model = calibrated_vg(0.05);
        auto op = OperatorSpec::levy(model);
        auto psi = [&model](double xi) { return model.psi(Complex(xi, 0.0)); };
        worst_fine = std::max(worst_fine, symbol_check(op, psi, xis, -4.0, 4.0, 2048));
        worst_coarse =
            std::max(worst_coarse, symbol_check(op, psi, xis, -4.0, 4.0, 1024));
    }
    const double ratio = worst_coarse / worst_fine;
    detail = "worst rel err " + fmt(worst_fine) + ", halving ratio " + fmt(ratio);
    return worst_fine <= 1e-3 && ratio >= 1.6;
}

bool criterion_finite_variation(std::string& detail) {
    const bool expected[] = {true, true, true, false, false};
    const double ys[] = {-0.5, 0.3, 0.999, 1.0, 1.5};
    for (int k = 0; k < 5; ++k) {
        if (check_finite_variation(LevyMeasureSpec::cgmy({1.0, 5.0, 5.0, ys[k]})) !=
            expected[k]) {
            detail = "CGMY Y=" + fmt(ys[k]) + " misclassified";
            return false;
        }
    }
    if (!check_finite_variation(LevyMeasureSpec::vg({0.3, 0.2, -0.1}))) {
        detail = "VG misclassified";
        return false;
    }
    detail = "CGMY {T,T,T,F,F}, VG T";
    return true;
}

bool criterion_trivial_stationary(std::string& detail) {
    const auto model = calibrated_vg(0.05);
    auto op = OperatorSpec::levy(model);
    double worst_const = 0.0, worst_zero = 0.0;
    {
        auto spec = ObstacleProblemSpec::stationary(
            [](double) { return 1.0; }, [](double) { return 0.0; },
            [](double) { return 0.1; }, 0.1, -3.0, 3.0,
            ExtensionRule::constants(1.0, 1.0));
        const auto grid = solve_stationary_grid(spec, op, 513);
        for (double v : grid.values) worst_const = std::max(worst_const, std::abs(v - 1.0));
    }
    {
        auto spec = ObstacleProblemSpec::stationary(
            [](double) { return -1.0; }, [](double) { return 0.0; },
            [](double) { return 0.1; }, 0.1, -3.0, 3.0,
            ExtensionRule::constants(0.0, 0.0));
        const auto grid = solve_stationary_grid(spec, op, 513);
        for (double v : grid.values) worst_zero = std::max(worst_zero, std::abs(v));
    }
    detail = "|v-K| " + fmt(worst_const) + ", |v| " + fmt(worst_zero);
    return worst_const <= 1e-8 && worst_zero <= 1e-8;
}

struct CrossState {
    LevyModel model = calibrated_vg(0.05);
    ObstacleProblemSpec put_spec =
        ObstacleProblemSpec::perpetual_put(1.0, 0.05, -3.0, 3.0);
    ValueGrid put_grid;
    ValueGrid put_grid_coarse;
    double x_star = 0.0;
};

CrossState g_cross;

bool criterion_cross_solver(std::string& detail) {
    auto op = OperatorSpec::levy(g_cross.model);
    const auto process = ProcessSpec::levy(g_cross.model);
    g_cross.put_grid = solve_stationary_grid(g_cross.put_spec, op, 1025);
    g_cross.put_grid_coarse = solve_stationary_grid(g_cross.put_spec, op, 513);
    const auto fb = free_boundary(g_cross.put_grid, g_cross.put_spec);
    if (fb.empty_contact || fb.slices[0].x_star.size() != 1) {
        detail = "expected a single free-boundary point";
        return false;
    }
    g_cross.x_star = fb.slices[0].x_star[0];

    bool ok = true;
    double worst_margin = 1e9;
    McOptions mc;
    mc.n_paths = 20000;
    mc.n_steps = 512;
    mc.eps_trunc = 1e-3;
    mc.seed = 71;
    for (double x : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
        // the deep-contact probe exercises at date zero on any mesh, so the
        // date-mesh bias rerun is only needed in the continuation region
        mc.estimate_bermudan_bias = x > g_cross.x_star;
        const auto est = solve_stationary_mc(g_cross.put_spec, process, x, mc);
        const double ref = g_cross.put_grid.interpolate(0, x);
        const double diff = std::abs(est.value - ref);
        // the grid declares its own discretization error by refinement
        const double grid_bias =
            std::abs(ref - g_cross.put_grid_coarse.interpolate(0, x));
        const double budget =
            std::max(0.01 * std::abs(ref), 3.0 * est.std_error + est.bias_horizon +
                                               est.bias_bermudan + grid_bias);
        ok = ok && diff <= budget;
        worst_margin = std::min(worst_margin, budget - diff);
    }

    // evolution American put, T = 0.5; the Bermudan restriction of the MC
    // date mesh is priced exactly by the stride-projected grid
    auto am = ObstacleProblemSpec::american_put(1.0, 0.05, 0.5, -3.0, 3.0);
    EvolutionOptions ev;
    ev.n_time = 512;
    const auto am_grid = solve_evolution_grid(am, op, 1025, ev);
    EvolutionOptions ev_berm = ev;
    ev_berm.project_stride = 4;  // 128 exercise dates
    const auto am_berm = solve_evolution_grid(am, op, 1025, ev_berm);
    EvolutionOptions ev_coarse;
    ev_coarse.n_time = 256;
    const auto am_coarse = solve_evolution_grid(am, op, 513, ev_coarse);
    McOptions emc;
    emc.n_paths = 100000;
    emc.n_steps = 128;
    emc.eps_trunc = 1e-3;
    emc.seed = 72;
    emc.pilot_x0 = -0.1;  // learn the stopping rule where it is live
    for (double x : {-0.5, -0.25, -0.1, 0.0, 0.25}) {
        const auto est = solve_evolution_mc(am, process, 0.0, x, emc);
        const double ref = am_grid.interpolate(0, x);
        const double diff = std::abs(est.value - ref);
        const double berm_gap =
            std::abs(am_grid.interpolate(0, x) - am_berm.interpolate(0, x));
        const double grid_bias = std::abs(ref - am_coarse.interpolate(0, x));
        const double budget =
            std::max(0.01 * std::abs(ref),
                     3.0 * est.std_error + berm_gap + grid_bias);
        ok = ok && diff <= budget;
        worst_margin = std::min(worst_margin, budget - diff);
    }
    detail = "worst budget margin " + fmt(worst_margin);
    return ok;
}

bool criterion_dpp(std::string& detail) {
    const auto process = ProcessSpec::levy(g_cross.model);
    if (g_cross.put_grid.values.empty()) {
        detail = "cross-solver state missing";
        return false;
    }
    const double h = g_cross.put_grid.x_grid[1] - g_cross.put_grid.x_grid[0];
    bool ok = true;
    double worst_margin = 1e9;
    const double probes[] = {g_cross.x_star + 1.5 * h, -0.05, 0.35};
    for (double x : probes) {
        const double grid_err =
            std::abs(g_cross.put_grid.interpolate(0, x) -
                     g_cross.put_grid_coarse.interpolate(0, x)) + 1e-4;
        const auto res = dpp_check(g_cross.put_spec, process, g_cross.put_grid, x,
                                   0.55, 6000, 73, grid_err);
        ok = ok && res.discrepancy <= res.error_budget;
        worst_margin = std::min(worst_margin, res.error_budget - res.discrepancy);
    }
    detail = "worst budget margin " + fmt(worst_margin);
    return ok;
}

bool criterion_monotonicity(std::string& detail) {
    auto op = OperatorSpec::levy(g_cross.model);
    const auto process = ProcessSpec::levy(g_cross.model);
    std::vector<MonotonePair> pairs;
    pairs.push_back({"obstacle (strike)",
                     ObstacleProblemSpec::perpetual_put(1.0, 0.05, -3.0, 3.0),
                     ObstacleProblemSpec::perpetual_put(1.1, 0.05, -3.0, 3.0)});
    {
        auto lo = ObstacleProblemSpec::perpetual_put(1.0, 0.05, -3.0, 3.0);
        auto hi = lo;
        hi.running_f = [](double, double) { return 0.01; };
        pairs.push_back({"running payoff", lo, hi});
    }
    {
        auto lo = ObstacleProblemSpec::american_put(1.0, 0.05, 0.5, -3.0, 3.0);
        auto hi = lo;
        hi.terminal_g = [](double x) {
            return std::max(1.0 - std::exp(x), 0.0) + 0.05;
        };
        pairs.push_back({"terminal data", lo, hi});
    }
    EvolutionOptions ev;
    ev.n_time = 256;
    const auto rows = monotonicity_suite(pairs, op, 513, {}, ev);
    bool ok = true;
    for (const auto& row : rows) ok = ok && row.pass;

    // ordered strikes produce ordered free boundaries
    const auto lo_spec = ObstacleProblemSpec::perpetual_put(1.0, 0.05, -3.0, 3.0);
    const auto hi_spec = ObstacleProblemSpec::perpetual_put(1.1, 0.05, -3.0, 3.0);
    const auto lo_fb = free_boundary(solve_stationary_grid(lo_spec, op, 513), lo_spec);
    const auto hi_fb = free_boundary(solve_stationary_grid(hi_spec, op, 513), hi_spec);
    const bool fb_ok = !lo_fb.empty_contact && !hi_fb.empty_contact &&
                       lo_fb.slices[0].x_star.size() == 1 &&
                       hi_fb.slices[0].x_star.size() == 1 &&
                       hi_fb.slices[0].x_star[0] >= lo_fb.slices[0].x_star[0] - 1e-9;
    ok = ok && fb_ok;

    // MC route with common random numbers: ordered within 3 stderr
    McOptions mc;
    mc.n_paths = 4000;
    mc.n_steps = 128;
    mc.seed = 74;
    const auto est_lo = solve_stationary_mc(lo_spec, process, 0.0, mc);
    const auto est_hi = solve_stationary_mc(hi_spec, process, 0.0, mc);
    const bool mc_ok = est_lo.value <=
                       est_hi.value + 3.0 * (est_lo.std_error + est_hi.std_error);
    ok = ok && mc_ok;
    detail = std::string("grid rows ") + (fb_ok ? "+ boundaries " : "(boundary FAIL) ") +
             (mc_ok ? "+ mc ordering" : "(mc FAIL)");
    return ok;
}

bool criterion_structural(std::string& detail) {
    auto op = OperatorSpec::levy(g_cross.model);
    auto am = ObstacleProblemSpec::american_put(1.0, 0.05, 0.5, -3.0, 3.0);
    EvolutionOptions ev;
    ev.n_time = 256;
    const auto va = solve_evolution_grid(am, op, 513, ev);

    // v >= phi everywhere; v(T, .) = g exactly
    for (std::size_t m = 0; m < va.nt(); ++m)
        for (std::size_t i = 0; i < va.nx(); ++i)
            if (va.at(m, i) <
                am.obstacle(va.t_mesh[m], va.x_grid[i]) - 1e-12) {
                detail = "v < phi";
                return false;
            }
    for (std::size_t i = 0; i < va.nx(); ++i)
        if (va.at(va.nt() - 1, i) != am.terminal_g(va.x_grid[i])) {
            detail = "terminal slice differs from g";
            return false;
        }

    // American >= European node-wise
    auto put = [](double x) { return std::max(1.0 - std::exp(x), 0.0); };
    auto eu = ObstacleProblemSpec::evolution(
        [](double, double) { return -10.0; }, [](double, double) { return 0.0; },
        [](double, double) { return 0.05; }, put, 0.5, 0.05, -3.0, 3.0,
        ExtensionRule::function(put, 1.0, 0.0));
    const auto vu = solve_evolution_grid(eu, op, 513, ev);
    for (std::size_t k = 0; k < va.values.size(); ++k)
        if (va.values[k] < vu.values[k] - 1e-10) {
            detail = "American < European";
            return false;
        }

    // time monotonicity for time-independent data
    for (std::size_t m = 0; m + 1 < va.nt(); ++m)
        for (std::size_t i = 0; i < va.nx(); ++i)
            if (va.at(m, i) < va.at(m + 1, i) - 1e-9) {
                detail = "value not nonincreasing in t";
                return false;
            }

    // complementarity residuals: two-sided for the stationary policy solve,
    // scheme-sided for the projected evolution stepping
    double worst_st = 0.0, worst_ev = -1e9;
    for (std::size_t i = 1; i + 1 < g_cross.put_grid.nx(); ++i)
        worst_st = std::max(worst_st, std::abs(g_cross.put_grid.residuals[i]));
    for (std::size_t m = 0; m + 1 < va.nt(); ++m)
        for (std::size_t i = 1; i + 1 < va.nx(); ++i)
            worst_ev = std::max(worst_ev, va.residuals[m * va.nx() + i]);
    detail = "stationary |res| " + fmt(worst_st) + ", evolution min-res " +
             fmt(worst_ev);
    return worst_st <= 1e-8 && worst_ev <= 1e-8;
}

bool criterion_path_moments(std::string& detail) {
    // Levy case: the coupled gap is |x1 - x2| identically
    const auto spec = ProcessSpec::levy(g_cross.model);
    std::vector<double> t_grid;
    for (int j = 0; j <= 8; ++j) t_grid.push_back(0.25 * j);
    const auto rep = path_moment_diagnostics(spec, -0.3, 0.4, t_grid, 512, 75);
    double worst = 0.0;
    for (double m : rep.mean_max_sq_diff)
        worst = std::max(worst, std::abs(m - 0.49) / 0.49);
    if (worst > 4e-13) {
        detail = "Levy rigidity violated by " + fmt(worst);
        return false;
    }

    // Lipschitz drift, no jumps: Gronwall envelope with C <= e^{2[b]} + 10%
    const double beta = 0.5;
    ProcessSpec lip;
    lip.measure = LevyMeasureSpec::custom([](double) { return 0.0; }, 0.0);
    lip.drift_b = [beta](double x) { return beta * std::sin(x); };
    lip.jump_map = [](double, double y) { return y; };
    lip.state_independent = false;
    lip.lipschitz_b = beta;
    std::vector<double> tg;
    for (int j = 0; j <= 10; ++j) tg.push_back(0.2 * j);
    const auto grep = path_moment_diagnostics(lip, 0.4, 0.5, tg, 64, 76);
    const double cap = 1.1 * std::exp(2.0 * beta);
    detail = "levy rigidity " + fmt(worst) + ", gronwall C " + fmt(grep.gronwall_C) +
             " vs cap " + fmt(cap);
    return grep.gronwall_C <= cap;
}

bool criterion_regularity(std::string& detail) {
    auto spec = g_cross.put_spec;
    spec.lipschitz_b = 0.0;  // constant Levy drift
    const auto rep = regularity_report(g_cross.put_grid, spec);
    bool ok = rep.condition_c0_ge_lip && rep.alpha_x >= 0.85 &&
              rep.alpha_x <= 1.05 && rep.r2_x >= 0.98;

    auto am = ObstacleProblemSpec::american_put(1.0, 0.05, 0.5, -3.0, 3.0);
    auto op = OperatorSpec::levy(g_cross.model);
    EvolutionOptions ev;
    ev.n_time = 256;
    const auto am_grid = solve_evolution_grid(am, op, 513, ev);
    const auto rep_t = regularity_report(am_grid, am);
    ok = ok && rep_t.has_time_direction && rep_t.alpha_t >= 0.45;
    detail = "alpha_x " + fmt(rep.alpha_x) + " (r2 " + fmt(rep.r2_x) +
             "), alpha_t " + fmt(rep_t.alpha_t);
    return ok;
}

bool criterion_determinism(std::string& detail) {
    namespace fs = std::filesystem;
    const auto base = fs::temp_directory_path() / "levyob_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);

    auto cfg = ExperimentConfig::from_json_text(kReferenceConfig);
    cfg.solver.mc_paths = 64;
    cfg.solver.mc_steps = 16;
    RunContext ctx;
    ctx.cfg = cfg;
    ctx.quiet = true;

    // solve twice; simulate serial vs parallel
    ctx.out_dir = (base / "a").string();
    run_solve(ctx);
    run_simulate(ctx);
    ctx.out_dir = (base / "b").string();
    ctx.threads = 4;
    run_solve(ctx);
    run_simulate(ctx);
    for (const char* name :
         {"value.csv", "boundary.csv", "regularity.json", "model.json", "run.json",
          "paths.csv", "paths_meta.json"}) {
        if (slurp((base / "a" / name).string()) !=
            slurp((base / "b" / name).string())) {
            detail = std::string(name) + " differs between reruns";
            return false;
        }
    }
    detail = "7 artifacts byte-identical, serial vs 4 threads";
    return true;
}

}  // namespace

int main() {
    Harness h;
    std::printf("acceptance suite\n");
    h.run("characteristic-exponent suite", 5.0, criterion_psi_suite);
    h.run("martingale calibration round trip", 1.0, criterion_calibration);
    h.run("martingale Monte Carlo", 30.0, criterion_martingale_mc);
    h.run("generator symbol check", 60.0, criterion_symbol_check);
    h.run("finite-variation classifier", 5.0, criterion_finite_variation);
    h.run("stationary trivial solutions", 10.0, criterion_trivial_stationary);
    h.run("cross-solver agreement (grid vs MC)", 300.0, criterion_cross_solver);
    h.run("dynamic-programming-principle consistency", 120.0, criterion_dpp);
    h.run("comparison-principle monotonicity", 180.0, criterion_monotonicity);
    h.run("structural value properties", 120.0, criterion_structural);
    h.run("path-moment coupling diagnostics", 30.0, criterion_path_moments);
    h.run("regularity bands", 60.0, criterion_regularity);
    h.run("pipeline determinism", 60.0, criterion_determinism);
    if (h.failures == 0)
        std::printf("all %d acceptance criteria passed\n", h.index);
    else
        std::printf("%d of %d acceptance criteria FAILED\n", h.failures, h.index);
    return h.failures;
}
