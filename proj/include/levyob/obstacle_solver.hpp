#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "levyob/generator.hpp"
#include "levyob/process_sim.hpp"

namespace levyob {

enum class ProblemKind { Stationary, Evolution };

/// Data of the obstacle problem
///   min{-dv/dt - Lv + c v - f, v - phi} = 0   (evolution, v(T,.) = g)
///   min{-Lv + c v - f, v - phi} = 0           (stationary)
/// posed on a truncated domain [x_min, x_max] with an extension rule for
/// the nonlocal far field.
struct ObstacleProblemSpec {
    ProblemKind kind = ProblemKind::Stationary;
    std::function<double(double, double)> obstacle;    // phi(t, x)
    std::function<double(double, double)> running_f;   // f(t, x)
    std::function<double(double, double)> discount_c;  // c(t, x) >= c0 > 0
    std::function<double(double)> terminal_g;          // evolution only
    double horizon_T = 0.0;
    double x_min = -1.0;
    double x_max = 1.0;
    ExtensionRule extension;  // far-field behavior of the value function
    double c_lower_bound = 0.0;
    double lipschitz_b = 0.0;  // [b]_{C^{0,1}} of the model drift (0 for Levy)

    static ObstacleProblemSpec stationary(std::function<double(double)> phi,
                                          std::function<double(double)> f,
                                          std::function<double(double)> c,
                                          double c_lower_bound, double x_min,
                                          double x_max, ExtensionRule ext);
    static ObstacleProblemSpec evolution(std::function<double(double, double)> phi,
                                         std::function<double(double, double)> f,
                                         std::function<double(double, double)> c,
                                         std::function<double(double)> g, double T,
                                         double c_lower_bound, double x_min,
                                         double x_max, ExtensionRule ext);

    /// Perpetual American put: phi = (K - e^x)^+, f = 0, c = rate.
    static ObstacleProblemSpec perpetual_put(double strike, double rate,
                                             double x_min, double x_max);
    /// Finite-expiry American put: terminal g = phi.
    static ObstacleProblemSpec american_put(double strike, double rate, double T,
                                            double x_min, double x_max);

    /// Throws CompatibilityError if g < phi(T, .) on the grid; ConfigError
    /// on c < c_lower_bound samples or an empty domain.
    void validate(std::size_t n_probe = 64) const;
};

struct SolverMeta {
    int iterations = 0;
    double tol = 0.0;
    double damping = 0.0;
    std::string scheme;
    double max_residual = 0.0;
    double jump_mass = 0.0;   // explicit-step stability quantity
    double dt = 0.0;          // evolution only
};

/// Value samples on the lattice with the contact mask and per-node
/// complementarity residuals of the solving scheme.
struct ValueGrid {
    std::vector<double> t_mesh;   // {0} for stationary
    std::vector<double> x_grid;
    std::vector<double> values;     // row-major [t][x]
    std::vector<std::uint8_t> contact;
    std::vector<double> residuals;
    double tol_contact = 0.0;
    SolverMeta meta;

    std::size_t nx() const { return x_grid.size(); }
    std::size_t nt() const { return t_mesh.size(); }
    double at(std::size_t ti, std::size_t xi) const {
        return values[ti * nx() + xi];
    }
    bool in_contact(std::size_t ti, std::size_t xi) const {
        return contact[ti * nx() + xi] != 0;
    }
    /// Value at (t_mesh[ti], x) by monotone interpolation along x.
    double interpolate(std::size_t ti, double x) const;
};

struct StationaryOptions {
    double tol = 1e-8;
    int max_iter = 200;           // policy iterations or sweep batches
    double damping = 0.8;         // projected-sweep relaxation
    bool use_policy_iteration = true;
};

/// Grid complementarity solver for the stationary problem: assembles the
/// discrete operator (upwind drift + singular-quadrature jump matrix with
/// row-sum compensation) and iterates policy/projected sweeps
///   v <- max(phi, v + w M^{-1}(Lv - cv + f))
/// until the sup-norm update is below tol. Throws NoConvergence with the
/// damping in the payload when the budget is exhausted.
ValueGrid solve_stationary_grid(const ObstacleProblemSpec& spec,
                                const OperatorSpec& op, std::size_t n_nodes,
                                const StationaryOptions& options = {});

struct EvolutionOptions {
    std::size_t n_time = 256;
    double tol = 1e-10;  // residual reporting tolerance
    // project onto the obstacle only every this many steps (> 1 prices the
    // Bermudan restriction of the exercise dates, as the MC estimator does)
    std::size_t project_stride = 1;
};

/// IMEX backward stepping for the evolution problem: drift, discount and
/// the inner Taylor block implicit (tridiagonal), the dense jump matrix
/// explicit, then projection onto the obstacle. Enforces the explicit-jump
/// stability bound dt * (quadrature nu-mass) <= 1 (StabilityError).
ValueGrid solve_evolution_grid(const ObstacleProblemSpec& spec, const OperatorSpec& op,
                               std::size_t n_nodes, const EvolutionOptions& options = {});

struct McValue {
    double value = 0.0;
    double std_error = 0.0;
    double bias_horizon = 0.0;   // perpetual-as-long-horizon truncation
    double bias_bermudan = 0.0;  // date-mesh halving estimate (0 if not run)
    double horizon_used = 0.0;
    std::size_t n_paths = 0;
};

struct McOptions {
    std::size_t n_paths = 20000;
    std::size_t n_steps = 256;
    int basis_degree = 3;
    double eps_trunc = 1e-3;
    std::uint64_t seed = 1;
    double horizon_proxy = 0.0;      // stationary only; 0 = auto from the bias target
    double target_tolerance = 1e-3;  // sizes the auto horizon
    bool estimate_bermudan_bias = false;
    // start of the policy-learning pilot batch (NaN: the evaluation point).
    // The stopping rule is a function of (t, x); a pilot started where the
    // exercise decision is live learns it with far better state coverage.
    double pilot_x0 = std::numeric_limits<double>::quiet_NaN();
    int threads = 1;
};

/// Long-horizon regression-based optimal stopping estimate of the
/// stationary value at x_eval.
McValue solve_stationary_mc(const ObstacleProblemSpec& spec, const ProcessSpec& process,
                            double x_eval, const McOptions& options = {});

/// Regression-based optimal stopping estimate of the evolution value at
/// (t, x); exercise restricted to the date mesh (Bermudan lower bound).
McValue solve_evolution_mc(const ObstacleProblemSpec& spec, const ProcessSpec& process,
                           double t, double x, const McOptions& options = {});

/// Regression-based exercise rule on a date mesh: exercise at a date iff
/// the obstacle is at least the fitted continuation value there. Dates
/// without enough in-the-money coverage never exercise.
struct StoppingPolicy {
    int basis_degree = 3;
    std::size_t n_dates = 0;
    double dt = 0.0;
    // exercise indicator at (date index, state)
    std::function<bool(std::size_t, double)> exercise_at;
    std::function<double(std::size_t, double)> continuation_at;
};

/// Learns the date-mesh stopping rule of the Monte Carlo solvers from a
/// pilot batch started at pilot_x0 (evolution specs stop by horizon_T, the
/// stationary problem by its long-horizon proxy).
StoppingPolicy learn_stopping_policy(const ObstacleProblemSpec& spec,
                                     const ProcessSpec& process, double pilot_x0,
                                     const McOptions& options = {});

struct DppResult {
    double recomputed = 0.0;
    double grid_value = 0.0;
    double discrepancy = 0.0;
    double mc_stderr = 0.0;
    double error_budget = 0.0;  // 3 stderr + grid + step-bias components
};

/// Re-derives the value at x by stopping no later than the exit time of
/// B_r(x), substituting the grid solution at exit, and compares with the
/// grid value at x.
DppResult dpp_check(const ObstacleProblemSpec& spec, const ProcessSpec& process,
                    const ValueGrid& grid, double x, double r_ball,
                    std::size_t n_paths, std::uint64_t seed,
                    double grid_error_estimate);

struct FreeBoundary {
    struct Slice {
        double t;
        std::vector<double> x_star;  // contact-set edges, refined by v - phi
    };
    std::vector<Slice> slices;
    bool empty_contact = false;  // legitimate outcome, reported not fatal
};

FreeBoundary free_boundary(const ValueGrid& grid, const ObstacleProblemSpec& spec);

struct OrderingCheck {
    std::string label;
    bool pass = false;
    double max_violation = 0.0;
};

/// Node-wise ordering of two solved grids: lo <= hi + tol everywhere.
OrderingCheck check_ordering(const ValueGrid& lo, const ValueGrid& hi, double tol,
                             const std::string& label);

struct MonotonePair {
    std::string label;
    ObstacleProblemSpec lo;
    ObstacleProblemSpec hi;
};

/// Solves each pair (specs differing only in phi, f, or g) and asserts the
/// comparison-principle ordering of the value functions.
std::vector<OrderingCheck> monotonicity_suite(const std::vector<MonotonePair>& pairs,
                                              const OperatorSpec& op,
                                              std::size_t n_nodes,
                                              const StationaryOptions& st_options = {},
                                              const EvolutionOptions& ev_options = {});

/// v interpolated as a SampledFunction with the problem's extension rule.
SampledFunction slice_function(const ValueGrid& grid, const ObstacleProblemSpec& spec,
                               std::size_t ti);

}  // namespace levyob
