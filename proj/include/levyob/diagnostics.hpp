#pragma once

#include <vector>

#include "levyob/obstacle_solver.hpp"

namespace levyob {

enum class Direction { Space, Time };

struct ModulusPoint {
    double h;
    double omega;  // max |v(p1) - v(p2)| over interior pairs at distance h
};

/// Modulus of continuity of a 1-D sample series at lattice distances
/// spanning the available decades; interior pairs only.
std::vector<ModulusPoint> estimate_modulus(const std::vector<double>& values,
                                           double spacing);

/// Modulus along x (max over interior time slices) or along t (max over
/// interior x columns) of a solved grid.
std::vector<ModulusPoint> estimate_modulus(const ValueGrid& grid, Direction dir);

struct ExponentFit {
    double alpha = 0.0;     // log-log slope
    double constant = 0.0;  // exp(intercept)
    double r2 = 0.0;
    double alpha_stderr = 0.0;
};

struct FitOptions {
    int skip_smallest_scales = 2;    // discretization noise
    double skip_largest_decades = 1.0;  // boundary effects
};

/// Least-squares fit of log omega against log h. Throws DegenerateFit when
/// every modulus sits below the noise floor.
ExponentFit fit_exponent(const std::vector<ModulusPoint>& moduli);

/// fit_exponent after applying the default range filter.
ExponentFit fit_exponent_filtered(const std::vector<ModulusPoint>& moduli,
                                  const FitOptions& options);

struct RegularityReport {
    double alpha_x = 0.0;
    double alpha_x_stderr = 0.0;
    double lip_x = 0.0;      // robust (99th percentile) Lipschitz constant
    double alpha_t = 0.0;    // evolution only; 0 when not applicable
    double r2_x = 0.0;
    double r2_t = 0.0;
    double fit_h_min = 0.0;
    double fit_h_max = 0.0;
    bool condition_c0_ge_lip = false;  // c0 >= [b]_{C^{0,1}}
    bool constant_function = false;
    bool has_time_direction = false;
};

/// Empirical regularity of a solved value grid: spatial exponent band,
/// robust Lipschitz constant, time exponent for evolution grids, and the
/// zeroth-order-condition flag. Bands are reported, never asserted against
/// the (non-explicit) constant of the regularity theory.
RegularityReport regularity_report(const ValueGrid& grid,
                                   const ObstacleProblemSpec& spec,
                                   const FitOptions& options = {});

}  // namespace levyob
