#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyob/errors.hpp"

namespace levyob {

using Complex = std::complex<double>;

enum class MeasureFamily { VG, CGMY, PointMasses, Custom };

std::string to_string(MeasureFamily f);

/// A single atom of a discrete jump measure: intensity * dirac(location).
struct PointMass {
    double location;   // jump size h != 0 (log-price units)
    double intensity;  // lambda > 0 (jumps per year)
};

/// Variance Gamma parameters. The symbol nu conventionally does double duty
/// as the Levy measure and this parameter; here the Gamma rate is nu_vg.
struct VGParams {
    double nu_vg;    // variance rate of the Gamma clock (years)
    double sigma;    // volatility (per sqrt(year))
    double theta;    // skew drift
    double b = 0.0;  // linear drift (per year)

    void validate() const;
    /// True iff eta_p < 1, the strip needed for E[e^{X(t)}] < infinity.
    bool exp_moment_ok() const;
};

/// CGMY/KoBoL parameters: density C |x|^{-1-Y} with exponential tilts
/// e^{-G|x|} on the left and e^{-M|x|} on the right.
struct CGMYParams {
    double C;
    double G;
    double M;
    double Y;
    double b = 0.0;  // linear drift (per year)

    void validate() const;
    /// Parameter region under which the regularity results apply:
    /// (G > 1 and M > 1 and Y < 2) or (G >= 1 and M >= 1 and 0 < Y < 2).
    bool admissible() const;
    bool finite_variation() const { return Y < 1.0; }
    /// Right-tail exponential moment: M > 1, or M == 1 with Y > 0.
    bool exp_moment_ok() const;
};

/// Roots (eta_p, eta_n) of x^2 - theta*nu_vg*x - sigma^2*nu_vg/2 = 0,
/// eta_p > 0 > eta_n. The VG density uses eta_p on the right and |eta_n|
/// on the left.
std::pair<double, double> vg_roots(const VGParams& p);

/// A Levy measure given either as a density on R \ {0} or as point masses.
struct LevyMeasureSpec {
    MeasureFamily family = MeasureFamily::Custom;
    std::function<double(double)> density;  // d(nu)/dx; never evaluated at 0
    std::vector<PointMass> point_masses;
    double singularity_order = 0.0;  // p with density ~ c|x|^{-1-p} near 0

    static LevyMeasureSpec vg(const VGParams& p);
    static LevyMeasureSpec cgmy(const CGMYParams& p);
    static LevyMeasureSpec from_point_masses(std::vector<PointMass> masses);
    static LevyMeasureSpec custom(std::function<double(double)> density,
                                  double singularity_order);
    /// gamma(1, s) |x|^{-1-2s}: generator of -(-Laplace)^s, symbol -|xi|^{2s}.
    static LevyMeasureSpec symmetric_stable(double s);

    bool is_discrete() const { return family == MeasureFamily::PointMasses; }

    /// Checks the Levy integrability condition (numeric for Custom), density
    /// nonnegativity on a sample grid, and point-mass positivity.
    void validate() const;
};

/// Normalization constant of the 1-D fractional Laplacian of order s.
double stable_normalization(double s);

// Measure tail functionals. `side` is +1 for x > 0, -1 for x < 0.
// growth tilts the integrand by e^{growth |x|} (exponential-moment probes).

/// Point beyond which density * e^{growth |x|} is negligible; throws
/// DivergentIntegral if the tilted density does not decay.
double tail_cutoff(const LevyMeasureSpec& m, int side, double growth = 0.0);

/// nu({|y| > eps}).
double tail_mass(const LevyMeasureSpec& m, double eps);

/// Integral of y over {|y| > eps} (both sides combined, cancellation-safe).
double tail_mean(const LevyMeasureSpec& m, double eps);

/// Integral of y^2 over {|y| <= eps}.
double small_jump_variance(const LevyMeasureSpec& m, double eps);

/// Integral of (e^y - 1 - y) over {|y| <= eps}; the martingale-bias exponent
/// of dropping small jumps.
double small_jump_exp_bias(const LevyMeasureSpec& m, double eps);

struct PsiValue {
    Complex value;
    double abs_err;
};

/// Compensated Levy exponent by singular quadrature:
///   psi(xi) = i b xi + integral (e^{i x xi} - 1 - i x xi) nu(dx),
/// paired across the two sides so supercritical-tail compensators cancel.
/// Throws DivergentIntegral when the tail fails the moment test for the
/// requested (complex) xi.
PsiValue psi_quadrature(const LevyMeasureSpec& m, double drift_b, Complex xi,
                        double abs_tol = 1e-12);

/// Closed-form VG exponent matching the compensated convention above:
///   psi(xi) = i b xi - i theta xi - (1/nu_vg) Log(1 - i theta nu_vg xi
///             + sigma^2 nu_vg xi^2 / 2),
/// principal branch; continuity from xi = 0 is checked, not assumed.
/// Throws BranchError when the log argument crosses the negative real axis.
Complex psi_vg(const VGParams& p, Complex xi);

/// Closed-form CGMY exponent (compensated), valid for Y < 2, Y not in {0, 1}.
Complex psi_cgmy(const CGMYParams& p, Complex xi);

/// True iff integral min(1, |y|) nu(dy) < infinity. Analytic for VG (true)
/// and CGMY (Y < 1); finite sum for point masses; numeric ladder for Custom.
bool check_finite_variation(const LevyMeasureSpec& m);

/// Samples |x| <= 1 on a log grid and checks the RLPE density-order bound
/// |density(x) - c |x|^{-nu_order-1}| <= C_bound |x|^{-nu_prime-1}.
bool rlpe_order_check(const LevyMeasureSpec& m, double nu_order, double nu_prime,
                      double c, double C_bound);

struct CharacteristicExponent {
    std::function<Complex(Complex)> evaluator;
    double drift_b = 0.0;
    MeasureFamily model_tag = MeasureFamily::Custom;

    Complex operator()(Complex xi) const { return evaluator(xi); }
};

/// A named pure-jump model: measure + drift + closed forms where available.
class LevyModel {
public:
    static LevyModel vg(VGParams p);
    static LevyModel cgmy(CGMYParams p);
    static LevyModel point_masses(std::vector<PointMass> masses, double drift_b);
    static LevyModel custom(LevyMeasureSpec measure, double drift_b);

    const LevyMeasureSpec& measure() const { return measure_; }
    MeasureFamily family() const { return measure_.family; }
    double drift() const { return drift_b_; }
    void set_drift(double b);

    const std::optional<VGParams>& vg_params() const { return vg_; }
    const std::optional<CGMYParams>& cgmy_params() const { return cgmy_; }

    bool finite_variation() const { return check_finite_variation(measure_); }
    /// Exponential-moment test for the martingale condition; analytic
    /// parameter-region predicate for VG/CGMY, numeric for Custom.
    bool has_exp_moment() const;

    /// Characteristic exponent; closed form for VG and CGMY (Y not in
    /// {0, 1}), exact sum for point masses, quadrature otherwise.
    Complex psi(Complex xi) const;
    /// psi(-i) - b: the drift-free jump contribution (real).
    double jump_exponent_at_minus_i() const;
    /// Second moment of the measure per unit time; sets domain widths.
    double jump_variance() const;

    CharacteristicExponent exponent() const;
    std::string name() const { return to_string(measure_.family); }

private:
    LevyModel() = default;
    LevyMeasureSpec measure_;
    double drift_b_ = 0.0;
    std::optional<VGParams> vg_;
    std::optional<CGMYParams> cgmy_;
};

/// Drift b* solving the martingale condition -r + psi(-i) = 0. The drift
/// enters psi(-i) affinely, so this is exact algebra: b* = r - jump part.
/// Throws MomentError when the exponential-moment test fails.
double calibrate_drift(const LevyModel& model, double rate);

}  // namespace levyob
