#pragma once

#include <string>

#include "levyob/artifacts.hpp"

namespace levyob {

struct RunContext {
    ExperimentConfig cfg;
    std::string out_dir;
    int threads = 1;
    bool quiet = false;
};

/// Truncated domain and payoff/extension data derived from a config.
ObstacleProblemSpec make_problem_spec(const ExperimentConfig& cfg,
                                      const LevyModel& model);

// Subcommand bodies. They throw on validation problems; the CLI maps
// exceptions to exit codes (2 validation, 3 non-convergence).
void run_calibrate(const RunContext& ctx);
void run_simulate(const RunContext& ctx);
void run_solve(const RunContext& ctx);
void run_diagnose(const RunContext& ctx);
/// Grid vs MC vs DPP comparison; returns true iff every row passed.
bool run_crosscheck(const RunContext& ctx);

}  // namespace levyob
