#pragma once

#include <functional>
#include <vector>

#include "levyob/levy_model.hpp"

namespace levyob {

/// How a sampled function is evaluated outside its grid. The nonlocal
/// integral genuinely reads the function far away, so a rule is mandatory.
struct ExtensionRule {
    enum class Kind { LastAffine, Constants, Function };
    Kind kind = Kind::LastAffine;
    double left_value = 0.0;
    double right_value = 0.0;
    std::function<double(double)> fn;
    // declared far-field limits used by quadrature tail closure
    double asymptote_left = 0.0;
    double asymptote_right = 0.0;

    static ExtensionRule last_affine() { return ExtensionRule{}; }
    static ExtensionRule constants(double left, double right) {
        ExtensionRule e;
        e.kind = Kind::Constants;
        e.left_value = left;
        e.right_value = right;
        e.asymptote_left = left;
        e.asymptote_right = right;
        return e;
    }
    static ExtensionRule function(std::function<double(double)> f,
                                  double asym_left = 0.0, double asym_right = 0.0) {
        ExtensionRule e;
        e.kind = Kind::Function;
        e.fn = std::move(f);
        e.asymptote_left = asym_left;
        e.asymptote_right = asym_right;
        return e;
    }
};

/// Function samples on a uniform 1-D lattice with monotone cubic (pchip)
/// off-grid evaluation and the extension rule outside [x_min, x_max].
class SampledFunction {
public:
    SampledFunction(double x_min, double h, std::vector<double> values,
                    ExtensionRule extension = ExtensionRule::last_affine());

    static SampledFunction from_function(const std::function<double(double)>& f,
                                         double x_min, double x_max, std::size_t n,
                                         ExtensionRule extension = ExtensionRule::last_affine());

    double x_min() const { return x_min_; }
    double x_max() const { return x_min_ + h_ * static_cast<double>(values_.size() - 1); }
    double spacing() const { return h_; }
    std::size_t size() const { return values_.size(); }
    double node(std::size_t i) const { return x_min_ + h_ * static_cast<double>(i); }
    const std::vector<double>& values() const { return values_; }
    const ExtensionRule& extension() const { return extension_; }

    /// pchip inside the grid, extension rule outside.
    double operator()(double x) const;
    /// Piecewise-linear evaluation: exactly linear in the samples, no
    /// overshoot at kinks.
    double eval_linear(double x) const;
    /// Fixed-weight 4-point Lagrange cubic (linear at edge cells): the
    /// operator quadrature uses this path so that L stays exactly linear
    /// in the samples.
    double eval_interp(double x) const;

    /// Centered second-order first derivative at an interior node.
    double deriv1_centered(std::size_t i) const;
    /// First-order upwind derivative in the direction of the sign of b.
    double deriv1_upwind(std::size_t i, double b_sign) const;
    /// Centered second difference at an interior node.
    double deriv2(std::size_t i) const;

private:
    double x_min_;
    double h_;
    std::vector<double> values_;
    std::vector<double> slopes_;  // pchip limited slopes
    ExtensionRule extension_;
};

/// Precomputed singular-quadrature rule for the jump part of L with
/// state-independent F(y) = y: signed nodes y_q with nonnegative weights
/// that already include the Levy density, plus the inner Taylor mass and
/// analytic tail closure beyond the oscillation-resolvable cap.
struct JumpQuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double sigma2_inner = 0.0;     // integral y^2 nu over |y| <= eps_inner
    double mass_total = 0.0;       // sum of weights (explicit-step bound)
    double mean_total = 0.0;       // sum of w_q y_q
    double tail_mass_left = 0.0;   // nu below -cap_left
    double tail_mass_right = 0.0;  // nu above +cap_right
    double tail_mean = 0.0;        // integral y nu over |y| > cap (paired)
    double eps_inner = 0.0;
    double cap_left = 0.0;
    double cap_right = 0.0;
    double quad_err = 0.0;         // accumulated Kronrod estimate
};

struct RuleControls {
    double osc_period = 0.0;       // 0: no oscillation cap (smooth targets)
    double tail_density_tol = 0.0; // 0: extend nodes to the density cutoff
    int refine_depth = 3;          // per-panel mass-driven refinement
};

JumpQuadRule build_jump_rule(const LevyMeasureSpec& measure, double eps_inner,
                             const RuleControls& controls = {});

/// Spec of the operator L u = b u' + jump integral.
struct OperatorSpec {
    LevyMeasureSpec measure;
    std::function<double(double)> drift_b;
    std::function<double(double, double)> jump_map;  // null => F(x, y) = y
    bool state_independent = true;
    double eps_inner = 0.0;  // 0: default to the grid spacing at apply time
    int quad_nodes = 0;      // per-panel refinement budget (0: automatic)
    RuleControls controls;

    static OperatorSpec levy(const LevyModel& model);
};

/// Evaluates L on sampled functions. Builds the quadrature rule once for
/// state-independent specs; state-dependent F falls back to per-point
/// adaptive quadrature.
class NonlocalOperator {
public:
    NonlocalOperator(OperatorSpec spec, double grid_h_hint);

    const JumpQuadRule& rule() const { return rule_; }
    const OperatorSpec& spec() const { return spec_; }

    /// L u at one point (x must be an interior node neighborhood).
    double apply(const SampledFunction& u, double x) const;
    /// L u at every interior node; boundary entries are zero-filled.
    std::vector<double> apply_grid(const SampledFunction& u) const;

private:
    double jump_part(const SampledFunction& u, double x, double du,
                     double d2u) const;
    OperatorSpec spec_;
    JumpQuadRule rule_;
};

/// Convenience single-point evaluation (constructs the rule per call).
double apply_generator(const OperatorSpec& op, const SampledFunction& u, double x);

/// Applies L to plane waves on a grid and compares against the
/// characteristic exponent; returns the worst relative error over the
/// interior nodes and the given frequencies.
double symbol_check(const OperatorSpec& op,
                    const std::function<Complex(double)>& psi_ref,
                    const std::vector<double>& xi_list, double x_min, double x_max,
                    std::size_t n_nodes);

/// Pointwise residual min{-Lv + c v - f, v - phi} of the stationary
/// complementarity system; zero-filled at the two boundary nodes.
std::vector<double> complementarity_residual(const NonlocalOperator& op,
                                             const SampledFunction& v,
                                             const std::function<double(double)>& phi,
                                             const std::function<double(double)>& f,
                                             const std::function<double(double)>& c);

}  // namespace levyob
