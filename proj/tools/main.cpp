#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "levyob/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    bool quiet = false;
};

levyob::RunContext make_context(const CliArgs& args) {
    levyob::RunContext ctx;
    ctx.cfg = levyob::ExperimentConfig::from_file(args.config_path);
    ctx.out_dir = args.out_dir.empty() ? ctx.cfg.outputs.dir : args.out_dir;
    if (args.seed_set) ctx.cfg.solver.seed = args.seed;
    ctx.threads = args.threads;
    ctx.quiet = args.quiet;
    return ctx;
}

void add_common(CLI::App* sub, CliArgs& args) {
    sub->add_option("--config", args.config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory (overrides config)");
    sub->add_option("--seed", args.seed, "RNG seed (overrides config)")
        ->each([&args](const std::string&) { args.seed_set = true; });
    sub->add_option("--threads", args.threads, "worker threads for path batches");
    sub->add_flag("--quiet", args.quiet, "suppress progress notes");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"levyob: American options under pure-jump Levy models via "
                 "nonlocal obstacle problems"};
    app.require_subcommand(1);
    CliArgs args;

    auto* calibrate =
        app.add_subcommand("calibrate", "solve the martingale drift condition");
    auto* simulate = app.add_subcommand("simulate", "simulate process paths");
    auto* solve = app.add_subcommand("solve", "solve the obstacle problem");
    auto* diagnose =
        app.add_subcommand("diagnose", "regularity diagnostics of the solution");
    auto* crosscheck = app.add_subcommand(
        "crosscheck", "grid vs Monte Carlo vs dynamic-programming consistency");
    for (auto* sub : {calibrate, simulate, solve, diagnose, crosscheck})
        add_common(sub, args);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto ctx = make_context(args);
        if (calibrate->parsed()) levyob::run_calibrate(ctx);
        if (simulate->parsed()) levyob::run_simulate(ctx);
        if (solve->parsed()) levyob::run_solve(ctx);
        if (diagnose->parsed()) levyob::run_diagnose(ctx);
        if (crosscheck->parsed()) {
            if (!levyob::run_crosscheck(ctx)) return kExitCheckFailed;
        }
        return kExitOk;
    } catch (const levyob::NoConvergence& e) {
        std::fprintf(stderr, "error: %s (iterations: %d, damping: %g)\n", e.what(),
                     e.iterations, e.damping);
        return kExitNoConvergence;
    } catch (const levyob::StabilityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNoConvergence;
    } catch (const levyob::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
}
