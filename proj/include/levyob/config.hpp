#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levyob/levy_model.hpp"

namespace levyob {

/// Experiment configuration, read from JSON (schema-versioned; unknown keys
/// are errors so parameter typos cannot pass silently).
struct ExperimentConfig {
    int schema = 1;

    struct Model {
        std::string family;  // "vg" | "cgmy" | "point_masses"
        double nu_vg = 0.0, sigma = 0.0, theta = 0.0;     // vg
        double C = 0.0, G = 0.0, M = 0.0, Y = 0.0;        // cgmy
        std::vector<PointMass> point_masses;
        std::optional<double> drift_b;  // absent: calibrate to the rate
        double rate = 0.0;
    } model;

    struct Problem {
        std::string kind = "stationary";  // or "evolution"
        std::string payoff = "put";       // "put" | "call" | "custom_table"
        double strike = 1.0;
        double horizon = 0.0;             // evolution only (years)
        double domain_padding = 8.0;      // multiples of sigma_eff
        std::vector<std::pair<double, double>> table;  // custom payoff (x, phi)
    } problem;

    struct Solver {
        std::size_t grid_n = 513;
        std::size_t time_steps = 256;
        double tol = 1e-8;
        double damping = 0.8;
        int max_iter = 200;
        std::size_t mc_paths = 20000;
        std::size_t mc_steps = 256;
        int basis_degree = 3;
        double eps_trunc = 1e-3;
        double horizon_proxy = 0.0;  // 0: auto
        std::uint64_t seed = 1;
    } solver;

    struct Outputs {
        std::string dir = "out";
        bool write_paths = false;
        std::vector<std::string> reports = {"value", "boundary", "regularity"};
    } outputs;

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);

    /// The configured model (drift calibrated when drift_b is absent).
    LevyModel make_model() const;
    /// Canonical serialization (stable key order) used for hashing.
    std::string canonical_text() const;
};

}  // namespace levyob
