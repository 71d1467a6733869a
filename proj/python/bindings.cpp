#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levyob/diagnostics.hpp"
#include "levyob/pipeline.hpp"

namespace py = pybind11;
using namespace levyob;

namespace {

py::array_t<double> states_array(const PathBatch& b) {
    const auto nt = b.times.size();
    py::array_t<double> out({b.n_paths, nt});
    std::copy(b.states.begin(), b.states.end(), out.mutable_data());
    return out;
}

py::array_t<double> values_array(const ValueGrid& g) {
    py::array_t<double> out({g.nt(), g.nx()});
    std::copy(g.values.begin(), g.values.end(), out.mutable_data());
    return out;
}

LevyModel model_from_config_text(const std::string& text) {
    return ExperimentConfig::from_json_text(text).make_model();
}

}  // namespace

PYBIND11_MODULE(levyob, m) {
    m.doc() = "American options under pure-jump Levy models: nonlocal obstacle "
              "problems, path simulation and optimal-stopping Monte Carlo";

    py::register_exception<BranchError>(m, "BranchError");
    py::register_exception<DivergentIntegral>(m, "DivergentIntegral");
    py::register_exception<MomentError>(m, "MomentError");
    py::register_exception<TruncationError>(m, "TruncationError");
    py::register_exception<DomainError>(m, "DomainError");
    py::register_exception<StabilityError>(m, "StabilityError");
    py::register_exception<CompatibilityError>(m, "CompatibilityError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<VGParams>(m, "VGParams")
        .def(py::init([](double nu_vg, double sigma, double theta, double b) {
                 VGParams p{nu_vg, sigma, theta, b};
                 p.validate();
                 return p;
             }),
             py::arg("nu_vg"), py::arg("sigma"), py::arg("theta"),
             py::arg("b") = 0.0)
        .def_readonly("nu_vg", &VGParams::nu_vg)
        .def_readonly("sigma", &VGParams::sigma)
        .def_readonly("theta", &VGParams::theta)
        .def_readonly("b", &VGParams::b)
        .def("exp_moment_ok", &VGParams::exp_moment_ok);

    py::class_<CGMYParams>(m, "CGMYParams")
        .def(py::init([](double C, double G, double M, double Y, double b) {
                 CGMYParams p{C, G, M, Y, b};
                 p.validate();
                 return p;
             }),
             py::arg("C"), py::arg("G"), py::arg("M"), py::arg("Y"),
             py::arg("b") = 0.0)
        .def_readonly("C", &CGMYParams::C)
        .def_readonly("G", &CGMYParams::G)
        .def_readonly("M", &CGMYParams::M)
        .def_readonly("Y", &CGMYParams::Y)
        .def("admissible", &CGMYParams::admissible)
        .def("finite_variation", &CGMYParams::finite_variation);

    m.def("vg_roots", [](const VGParams& p) { return vg_roots(p); },
          "roots (eta_p, eta_n) of the VG quadratic");

    py::class_<LevyModel>(m, "LevyModel")
        .def_static("vg", &LevyModel::vg)
        .def_static("cgmy", &LevyModel::cgmy)
        .def_static("point_masses",
                    [](const std::vector<std::pair<double, double>>& masses,
                       double drift_b) {
                        std::vector<PointMass> pms;
                        for (auto [h, lam] : masses) pms.push_back({h, lam});
                        return LevyModel::point_masses(std::move(pms), drift_b);
                    },
                    py::arg("masses"), py::arg("drift_b") = 0.0)
        .def_property_readonly("drift", &LevyModel::drift)
        .def("set_drift", &LevyModel::set_drift)
        .def("psi", &LevyModel::psi, "characteristic exponent at complex xi")
        .def("finite_variation", &LevyModel::finite_variation)
        .def("has_exp_moment", &LevyModel::has_exp_moment)
        .def("jump_variance", &LevyModel::jump_variance)
        .def("name", &LevyModel::name);

    m.def("calibrate_drift", &calibrate_drift, py::arg("model"), py::arg("rate"),
          "drift solving the martingale condition -r + psi(-i) = 0");

    py::class_<PathBatch>(m, "PathBatch")
        .def_readonly("times", &PathBatch::times)
        .def_readonly("seed", &PathBatch::seed)
        .def_readonly("eps_trunc", &PathBatch::eps_trunc)
        .def_readonly("sigma2_eps", &PathBatch::sigma2_eps)
        .def_readonly("n_paths", &PathBatch::n_paths)
        .def_readonly("jump_counts", &PathBatch::jump_counts)
        .def_property_readonly("states", &states_array);

    m.def(
        "simulate_paths",
        [](const LevyModel& model, double x0, double T, std::size_t n_steps,
           double eps_trunc, std::size_t n_paths, std::uint64_t seed, int threads) {
            std::vector<double> mesh(n_steps + 1);
            for (std::size_t j = 0; j <= n_steps; ++j)
                mesh[j] = T * static_cast<double>(j) / static_cast<double>(n_steps);
            return simulate_paths(ProcessSpec::levy(model), x0, T, mesh, eps_trunc,
                                  n_paths, seed, threads);
        },
        py::arg("model"), py::arg("x0"), py::arg("T"), py::arg("n_steps") = 64,
        py::arg("eps_trunc") = 1e-3, py::arg("n_paths") = 1000, py::arg("seed") = 1,
        py::arg("threads") = 1);

    py::class_<MartingaleCheck>(m, "MartingaleCheck")
        .def_readonly("mean", &MartingaleCheck::mean)
        .def_readonly("std_error", &MartingaleCheck::std_error)
        .def_readonly("bias_bound", &MartingaleCheck::bias_bound);

    m.def("martingale_check", &martingale_check, py::arg("model"), py::arg("rate"),
          py::arg("T"), py::arg("n_paths"), py::arg("eps_trunc") = 1e-3,
          py::arg("seed") = 1, py::arg("threads") = 1);

    py::class_<ObstacleProblemSpec>(m, "ObstacleProblemSpec")
        .def_static("perpetual_put", &ObstacleProblemSpec::perpetual_put,
                    py::arg("strike"), py::arg("rate"), py::arg("x_min"),
                    py::arg("x_max"))
        .def_static("american_put", &ObstacleProblemSpec::american_put,
                    py::arg("strike"), py::arg("rate"), py::arg("T"),
                    py::arg("x_min"), py::arg("x_max"))
        .def_readonly("x_min", &ObstacleProblemSpec::x_min)
        .def_readonly("x_max", &ObstacleProblemSpec::x_max)
        .def_readonly("horizon_T", &ObstacleProblemSpec::horizon_T)
        .def("obstacle",
             [](const ObstacleProblemSpec& s, double t, double x) {
                 return s.obstacle(t, x);
             });

    py::class_<SolverMeta>(m, "SolverMeta")
        .def_readonly("iterations", &SolverMeta::iterations)
        .def_readonly("scheme", &SolverMeta::scheme)
        .def_readonly("max_residual", &SolverMeta::max_residual)
        .def_readonly("jump_mass", &SolverMeta::jump_mass)
        .def_readonly("dt", &SolverMeta::dt);

    py::class_<ValueGrid>(m, "ValueGrid")
        .def_readonly("t_mesh", &ValueGrid::t_mesh)
        .def_readonly("x_grid", &ValueGrid::x_grid)
        .def_readonly("tol_contact", &ValueGrid::tol_contact)
        .def_readonly("meta", &ValueGrid::meta)
        .def_property_readonly("values", &values_array)
        .def("value", &ValueGrid::at, py::arg("ti"), py::arg("xi"))
        .def("in_contact", &ValueGrid::in_contact)
        .def("interpolate", &ValueGrid::interpolate);

    m.def(
        "solve_stationary_grid",
        [](const ObstacleProblemSpec& spec, const LevyModel& model,
           std::size_t n_nodes, double tol, int max_iter, double damping,
           bool policy_iteration) {
            StationaryOptions o;
            o.tol = tol;
            o.max_iter = max_iter;
            o.damping = damping;
            o.use_policy_iteration = policy_iteration;
            return solve_stationary_grid(spec, OperatorSpec::levy(model), n_nodes, o);
        },
        py::arg("spec"), py::arg("model"), py::arg("n_nodes") = 513,
        py::arg("tol") = 1e-8, py::arg("max_iter") = 200, py::arg("damping") = 0.8,
        py::arg("policy_iteration") = true);

    m.def(
        "solve_evolution_grid",
        [](const ObstacleProblemSpec& spec, const LevyModel& model,
           std::size_t n_nodes, std::size_t n_time, double tol) {
            EvolutionOptions o;
            o.n_time = n_time;
            o.tol = tol;
            return solve_evolution_grid(spec, OperatorSpec::levy(model), n_nodes, o);
        },
        py::arg("spec"), py::arg("model"), py::arg("n_nodes") = 257,
        py::arg("n_time") = 256, py::arg("tol") = 1e-10);

    py::class_<McValue>(m, "McValue")
        .def_readonly("value", &McValue::value)
        .def_readonly("std_error", &McValue::std_error)
        .def_readonly("bias_horizon", &McValue::bias_horizon)
        .def_readonly("bias_bermudan", &McValue::bias_bermudan)
        .def_readonly("horizon_used", &McValue::horizon_used);

    auto mc_options = [](std::size_t n_paths, std::size_t n_steps, int basis_degree,
                         double eps_trunc, std::uint64_t seed, double horizon_proxy,
                         bool bermudan_bias, int threads) {
        McOptions o;
        o.n_paths = n_paths;
        o.n_steps = n_steps;
        o.basis_degree = basis_degree;
        o.eps_trunc = eps_trunc;
        o.seed = seed;
        o.horizon_proxy = horizon_proxy;
        o.estimate_bermudan_bias = bermudan_bias;
        o.threads = threads;
        return o;
    };

    m.def(
        "solve_stationary_mc",
        [mc_options](const ObstacleProblemSpec& spec, const LevyModel& model,
                     double x, std::size_t n_paths, std::size_t n_steps,
                     int basis_degree, double eps_trunc, std::uint64_t seed,
                     double horizon_proxy, bool bermudan_bias, int threads) {
            return solve_stationary_mc(
                spec, ProcessSpec::levy(model), x,
                mc_options(n_paths, n_steps, basis_degree, eps_trunc, seed,
                           horizon_proxy, bermudan_bias, threads));
        },
        py::arg("spec"), py::arg("model"), py::arg("x"), py::arg("n_paths") = 20000,
        py::arg("n_steps") = 256, py::arg("basis_degree") = 3,
        py::arg("eps_trunc") = 1e-3, py::arg("seed") = 1,
        py::arg("horizon_proxy") = 0.0, py::arg("bermudan_bias") = false,
        py::arg("threads") = 1);

    m.def(
        "solve_evolution_mc",
        [mc_options](const ObstacleProblemSpec& spec, const LevyModel& model,
                     double t, double x, std::size_t n_paths, std::size_t n_steps,
                     int basis_degree, double eps_trunc, std::uint64_t seed,
                     bool bermudan_bias, int threads) {
            return solve_evolution_mc(
                spec, ProcessSpec::levy(model), t, x,
                mc_options(n_paths, n_steps, basis_degree, eps_trunc, seed, 0.0,
                           bermudan_bias, threads));
        },
        py::arg("spec"), py::arg("model"), py::arg("t"), py::arg("x"),
        py::arg("n_paths") = 20000, py::arg("n_steps") = 128,
        py::arg("basis_degree") = 3, py::arg("eps_trunc") = 1e-3,
        py::arg("seed") = 1, py::arg("bermudan_bias") = false,
        py::arg("threads") = 1);

    py::class_<StoppingPolicy>(m, "StoppingPolicy")
        .def_readonly("basis_degree", &StoppingPolicy::basis_degree)
        .def_readonly("n_dates", &StoppingPolicy::n_dates)
        .def_readonly("dt", &StoppingPolicy::dt)
        .def("exercise_at",
             [](const StoppingPolicy& p, std::size_t k, double x) {
                 return p.exercise_at(k, x);
             })
        .def("continuation_at",
             [](const StoppingPolicy& p, std::size_t k, double x) {
                 return p.continuation_at(k, x);
             });

    m.def(
        "learn_stopping_policy",
        [](const ObstacleProblemSpec& spec, const LevyModel& model, double pilot_x0,
           std::size_t n_paths, std::size_t n_steps, int basis_degree,
           double eps_trunc, std::uint64_t seed) {
            McOptions o;
            o.n_paths = n_paths;
            o.n_steps = n_steps;
            o.basis_degree = basis_degree;
            o.eps_trunc = eps_trunc;
            o.seed = seed;
            return learn_stopping_policy(spec, ProcessSpec::levy(model), pilot_x0, o);
        },
        py::arg("spec"), py::arg("model"), py::arg("pilot_x0"),
        py::arg("n_paths") = 8000, py::arg("n_steps") = 64,
        py::arg("basis_degree") = 3, py::arg("eps_trunc") = 1e-3,
        py::arg("seed") = 1);

    py::class_<DppResult>(m, "DppResult")
        .def_readonly("recomputed", &DppResult::recomputed)
        .def_readonly("grid_value", &DppResult::grid_value)
        .def_readonly("discrepancy", &DppResult::discrepancy)
        .def_readonly("mc_stderr", &DppResult::mc_stderr)
        .def_readonly("error_budget", &DppResult::error_budget);

    m.def(
        "dpp_check",
        [](const ObstacleProblemSpec& spec, const LevyModel& model,
           const ValueGrid& grid, double x, double r_ball, std::size_t n_paths,
           std::uint64_t seed, double grid_error_estimate) {
            return dpp_check(spec, ProcessSpec::levy(model), grid, x, r_ball,
                             n_paths, seed, grid_error_estimate);
        },
        py::arg("spec"), py::arg("model"), py::arg("grid"), py::arg("x"),
        py::arg("r_ball"), py::arg("n_paths") = 4000, py::arg("seed") = 1,
        py::arg("grid_error_estimate") = 1e-3);

    py::class_<FreeBoundary::Slice>(m, "FreeBoundarySlice")
        .def_readonly("t", &FreeBoundary::Slice::t)
        .def_readonly("x_star", &FreeBoundary::Slice::x_star);
    py::class_<FreeBoundary>(m, "FreeBoundary")
        .def_readonly("slices", &FreeBoundary::slices)
        .def_readonly("empty_contact", &FreeBoundary::empty_contact);
    m.def("free_boundary", &free_boundary, py::arg("grid"), py::arg("spec"));

    py::class_<RegularityReport>(m, "RegularityReport")
        .def_readonly("alpha_x", &RegularityReport::alpha_x)
        .def_readonly("alpha_x_stderr", &RegularityReport::alpha_x_stderr)
        .def_readonly("lip_x", &RegularityReport::lip_x)
        .def_readonly("alpha_t", &RegularityReport::alpha_t)
        .def_readonly("r2_x", &RegularityReport::r2_x)
        .def_readonly("r2_t", &RegularityReport::r2_t)
        .def_readonly("condition_c0_ge_lip", &RegularityReport::condition_c0_ge_lip)
        .def_readonly("constant_function", &RegularityReport::constant_function)
        .def_readonly("has_time_direction", &RegularityReport::has_time_direction);

    m.def(
        "regularity_report",
        [](const ValueGrid& grid, const ObstacleProblemSpec& spec) {
            return regularity_report(grid, spec);
        },
        py::arg("grid"), py::arg("spec"));

    m.def("model_from_config", &model_from_config_text, py::arg("config_text"),
          "build (and calibrate) the model of a JSON experiment config");

    m.def(
        "run_pipeline",
        [](const std::string& subcommand, const std::string& config_text,
           const std::string& out_dir, int threads) {
            RunContext ctx;
            ctx.cfg = ExperimentConfig::from_json_text(config_text);
            ctx.out_dir = out_dir.empty() ? ctx.cfg.outputs.dir : out_dir;
            ctx.threads = threads;
            ctx.quiet = true;
            if (subcommand == "calibrate") {
                run_calibrate(ctx);
            } else if (subcommand == "simulate") {
                run_simulate(ctx);
            } else if (subcommand == "solve") {
                run_solve(ctx);
            } else if (subcommand == "diagnose") {
                run_diagnose(ctx);
            } else if (subcommand == "crosscheck") {
                return run_crosscheck(ctx);
            } else {
                throw ConfigError("unknown subcommand: " + subcommand);
            }
            return true;
        },
        py::arg("subcommand"), py::arg("config_text"), py::arg("out_dir") = "",
        py::arg("threads") = 1);

    m.attr("__version__") = "0.1.0";
}
