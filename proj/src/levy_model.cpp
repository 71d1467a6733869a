#include "levyob/levy_model.hpp"

#include <algorithm>
#include <cmath>

#include "levyob/quadrature.hpp"

namespace levyob {

namespace {

constexpr double kTailThreshold = 1e-18;
constexpr std::size_t kDensitySamples = 48;

// Sign-aware evaluation: d(side * x) for x > 0.
double side_density(const LevyMeasureSpec& m, int side, double x) {
    return m.density(side > 0 ? x : -x);
}

// e^{iz} - 1 - iz without the cancellation that otherwise drowns the
// integrand under a |x|^{-1-p} singularity.
Complex compensated_cis(Complex z) {
    const Complex iz = Complex(0.0, 1.0) * z;
    if (std::abs(z) >= 0.5) return std::exp(iz) - 1.0 - iz;
    Complex term = iz * iz / 2.0;
    Complex sum = term;
    for (int k = 3; k <= 24; ++k) {
        term *= iz / static_cast<double>(k);
        sum += term;
        if (std::abs(term) < 1e-20 * (std::abs(sum) + 1e-30)) break;
    }
    return sum;
}

}  // namespace

std::string to_string(MeasureFamily f) {
    switch (f) {
        case MeasureFamily::VG: return "vg";
        case MeasureFamily::CGMY: return "cgmy";
        case MeasureFamily::PointMasses: return "point_masses";
        case MeasureFamily::Custom: return "custom";
    }
    return "unknown";
}

void VGParams::validate() const {
    if (!(nu_vg > 0.0)) throw ConfigError("VG: nu_vg must be positive");
    if (!(sigma > 0.0)) throw ConfigError("VG: sigma must be positive");
    if (!std::isfinite(theta) || !std::isfinite(b))
        throw ConfigError("VG: theta and b must be finite");
}

bool VGParams::exp_moment_ok() const {
    return vg_roots(*this).first < 1.0;
}

std::pair<double, double> vg_roots(const VGParams& p) {
    // x^2 - theta*nu*x - sigma^2*nu/2 = 0; the root product is negative, so
    // eta_p > 0 > eta_n always.
    const double half_tn = 0.5 * p.theta * p.nu_vg;
    const double disc = std::sqrt(half_tn * half_tn + 0.5 * p.sigma * p.sigma * p.nu_vg);
    return {half_tn + disc, half_tn - disc};
}

void CGMYParams::validate() const {
    if (!(C > 0.0)) throw ConfigError("CGMY: C must be positive");
    if (G < 0.0 || M < 0.0) throw ConfigError("CGMY: G and M must be nonnegative");
    if (!(Y < 2.0)) throw ConfigError("CGMY: Y must be < 2");
}

bool CGMYParams::admissible() const {
    return (G > 1.0 && M > 1.0 && Y < 2.0) ||
           (G >= 1.0 && M >= 1.0 && Y > 0.0 && Y < 2.0);
}

bool CGMYParams::exp_moment_ok() const {
    // integral_{x>=1} e^x e^{-Mx} x^{-1-Y} dx: converges iff M > 1, or
    // M == 1 with Y > 0 (then the integrand is x^{-1-Y}).
    return M > 1.0 || (M == 1.0 && Y > 0.0);
}

LevyMeasureSpec LevyMeasureSpec::vg(const VGParams& p) {
    p.validate();
    auto [eta_p, eta_n] = vg_roots(p);
    const double eta_neg = std::abs(eta_n);
    const double inv_nu = 1.0 / p.nu_vg;
    LevyMeasureSpec m;
    m.family = MeasureFamily::VG;
    m.singularity_order = 0.0;
    m.density = [inv_nu, eta_p, eta_neg](double x) {
        const double ax = std::abs(x);
        return inv_nu / ax * std::exp(-ax / (x > 0.0 ? eta_p : eta_neg));
    };
    return m;
}

LevyMeasureSpec LevyMeasureSpec::cgmy(const CGMYParams& p) {
    p.validate();
    LevyMeasureSpec m;
    m.family = MeasureFamily::CGMY;
    m.singularity_order = p.Y;
    const double C = p.C, G = p.G, M = p.M, Y = p.Y;
    m.density = [C, G, M, Y](double x) {
        const double ax = std::abs(x);
        return C * std::pow(ax, -1.0 - Y) * std::exp(-(x > 0.0 ? M : G) * ax);
    };
    return m;
}

LevyMeasureSpec LevyMeasureSpec::from_point_masses(std::vector<PointMass> masses) {
    LevyMeasureSpec m;
    m.family = MeasureFamily::PointMasses;
    m.point_masses = std::move(masses);
    m.validate();
    return m;
}

LevyMeasureSpec LevyMeasureSpec::custom(std::function<double(double)> density,
                                        double singularity_order) {
    LevyMeasureSpec m;
    m.family = MeasureFamily::Custom;
    m.density = std::move(density);
    m.singularity_order = singularity_order;
    return m;
}

double stable_normalization(double s) {
    return s * std::pow(4.0, s) * std::tgamma(0.5 + s) /
           (std::sqrt(M_PI) * std::tgamma(1.0 - s));
}

LevyMeasureSpec LevyMeasureSpec::symmetric_stable(double s) {
    const double gamma_1s = stable_normalization(s);
    auto density = [gamma_1s, s](double x) {
        return gamma_1s * std::pow(std::abs(x), -1.0 - 2.0 * s);
    };
    return custom(density, 2.0 * s);
}

void LevyMeasureSpec::validate() const {
    if (family == MeasureFamily::PointMasses) {
        for (const auto& pm : point_masses) {
            if (pm.location == 0.0)
                throw ConfigError("point mass at 0 is not a jump");
            if (!(pm.intensity > 0.0))
                throw ConfigError("point-mass intensity must be strictly positive");
        }
        return;
    }
    if (!density) throw ConfigError("measure density is required");
    // Nonnegativity on a log sample grid, both sides.
    for (int side : {+1, -1}) {
        for (std::size_t k = 0; k < kDensitySamples; ++k) {
            const double x = std::pow(10.0, -8.0 + 10.0 * static_cast<double>(k) /
                                                 (kDensitySamples - 1));
            if (side_density(*this, side, x) < 0.0)
                throw ConfigError("measure density is negative at x = " +
                                  std::to_string(side * x));
        }
    }
    if (family == MeasureFamily::Custom) {
        // integral min(1, y^2) nu(dy) < infinity, tested numerically:
        // the ladder of inner contributions must be summable and the tail
        // must have finite mass.
        double prev = -1.0;
        int rising = 0;
        for (int k = 2; k <= 9; ++k) {
            const double lo = std::pow(10.0, -k - 1);
            const double hi = std::pow(10.0, -k);
            auto f = [this](double x) {
                return x * x * (side_density(*this, +1, x) + side_density(*this, -1, x));
            };
            const double inc = integrate_gk_log<double>(f, lo, hi, 1e-14, 1e-8).value;
            rising = (prev >= 0.0 && inc > prev * 1.05) ? rising + 1 : 0;
            if (rising >= 3)
                throw ConfigError("second-moment ladder diverges near 0: not a Levy measure");
            prev = inc;
        }
        tail_cutoff(*this, +1);
        tail_cutoff(*this, -1);
    }
}

double tail_cutoff(const LevyMeasureSpec& m, int side, double growth) {
    if (m.is_discrete()) {
        double far = 0.0;
        for (const auto& pm : m.point_masses)
            if ((side > 0) == (pm.location > 0.0))
                far = std::max(far, std::abs(pm.location));
        return far == 0.0 ? 1.0 : far * (1.0 + 1e-12);
    }
    auto tilted = [&](double x) {
        return side_density(m, side, x) * std::exp(growth * x);
    };
    double ref = std::max({tilted(0.5), tilted(1.0), 1e-300});
    double x = 1.0;
    int rising = 0;
    double prev = tilted(x);
    while (x < 1e250) {
        x *= 1.3;
        const double v = tilted(x);
        // decay means x * density(x) falls below threshold (mass per e-fold)
        if (v * x < kTailThreshold * std::max(ref, 1.0)) return x;
        if (v > prev) {
            if (++rising >= 24)
                throw DivergentIntegral("measure tail does not decay (side " +
                                        std::to_string(side) + ", growth " +
                                        std::to_string(growth) + ")");
        } else {
            rising = 0;
        }
        prev = v;
    }
    throw DivergentIntegral("measure tail mass unresolved below threshold");
}

double tail_mass(const LevyMeasureSpec& m, double eps) {
    if (m.is_discrete()) {
        double total = 0.0;
        for (const auto& pm : m.point_masses)
            if (std::abs(pm.location) > eps) total += pm.intensity;
        return total;
    }
    double total = 0.0;
    for (int side : {+1, -1}) {
        const double hi = tail_cutoff(m, side);
        if (hi <= eps) continue;
        total += integrate_gk_log<double>(
                     [&](double x) { return side_density(m, side, x); }, eps, hi,
                     1e-13, 1e-10)
                     .value;
    }
    return total;
}

double tail_mean(const LevyMeasureSpec& m, double eps) {
    if (m.is_discrete()) {
        double total = 0.0;
        for (const auto& pm : m.point_masses)
            if (std::abs(pm.location) > eps) total += pm.intensity * pm.location;
        return total;
    }
    // Paired so that symmetric heavy tails cancel inside the integrand.
    const double hi = std::max(tail_cutoff(m, +1), tail_cutoff(m, -1));
    if (hi <= eps) return 0.0;
    return integrate_gk_log<double>(
               [&](double x) {
                   return x * (side_density(m, +1, x) - side_density(m, -1, x));
               },
               eps, hi, 1e-13, 1e-10)
        .value;
}

double small_jump_variance(const LevyMeasureSpec& m, double eps) {
    if (m.is_discrete()) {
        double total = 0.0;
        for (const auto& pm : m.point_masses)
            if (std::abs(pm.location) <= eps)
                total += pm.intensity * pm.location * pm.location;
        return total;
    }
    // integrand ~ x^{1-p} near 0 after the x^2 compensation: integrable.
    const double lo = eps * 1e-9;
    return integrate_gk_log<double>(
               [&](double x) {
                   return x * x * (side_density(m, +1, x) + side_density(m, -1, x));
               },
               lo, eps, 1e-16, 1e-10)
        .value;
}

double small_jump_exp_bias(const LevyMeasureSpec& m, double eps) {
    if (m.is_discrete()) {
        double total = 0.0;
        for (const auto& pm : m.point_masses)
            if (std::abs(pm.location) <= eps)
                total += pm.intensity * (std::exp(pm.location) - 1.0 - pm.location);
        return total;
    }
    const double lo = eps * 1e-9;
    return integrate_gk_log<double>(
               [&](double x) {
                   const double up = std::expm1(x) - x;
                   const double dn = std::expm1(-x) + x;
                   return up * side_density(m, +1, x) + dn * side_density(m, -1, x);
               },
               lo, eps, 1e-18, 1e-10)
        .value;
}

PsiValue psi_quadrature(const LevyMeasureSpec& m, double drift_b, Complex xi,
                        double abs_tol) {
    const Complex i_unit(0.0, 1.0);
    if (xi == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), 0.0};

    if (m.is_discrete()) {
        Complex sum = i_unit * drift_b * xi;
        for (const auto& pm : m.point_masses) {
            const Complex e = std::exp(i_unit * xi * pm.location);
            sum += pm.intensity * (e - 1.0 - i_unit * xi * pm.location);
        }
        return {sum, 1e-16 * std::abs(sum)};
    }

    // Paired two-sided integrand: the linear compensators of the two sides
    // cancel pointwise for symmetric measures, which keeps supercritical
    // tails integrable.
    auto integrand = [&](double x) -> Complex {
        return compensated_cis(xi * x) * side_density(m, +1, x) +
               compensated_cis(-xi * x) * side_density(m, -1, x);
    };

    // Inner cutoff from the O(x^{2-p}) contribution bound.
    const double p = std::min(m.singularity_order, 1.99);
    const double x0 = 1e-4;
    const double c_near =
        (side_density(m, +1, x0) + side_density(m, -1, x0)) * std::pow(x0, 1.0 + p);
    const double xi_mag = std::max(1.0, std::abs(xi));
    double delta = std::pow(
        1e-3 * abs_tol * (2.0 - p) / (xi_mag * xi_mag * std::max(c_near, 1e-300)),
        1.0 / (2.0 - p));
    delta = std::clamp(delta, 1e-250, 0.05);

    if (std::abs(xi.imag()) > 1e-12) {
        // Exponential tilt: the integrand grows or decays monotonically at
        // infinity, so extend to the tilted density cutoff (this is also the
        // exponential-moment guard).
        const double hi = std::max(tail_cutoff(m, +1, std::max(0.0, -xi.imag())),
                                   tail_cutoff(m, -1, std::max(0.0, xi.imag())));
        auto core = integrate_gk_log<Complex>(integrand, delta,
                                              std::max(hi, 2.0 * delta),
                                              0.25 * abs_tol, 1e-13, 8000);
        return {core.value + i_unit * drift_b * xi, core.abs_err};
    }

    // Real frequency: resolve oscillations out to a cap where the
    // integration-by-parts remainder (2/xi) * density is inside the budget,
    // then close the tail analytically with the measure's mass and first
    // moment (paired so symmetric supercritical tails cancel).
    const double xr = std::max(std::abs(xi.real()), 1e-8);
    const double hard = std::max(tail_cutoff(m, +1), tail_cutoff(m, -1));
    const double tol_closure = std::max(0.3 * abs_tol, 1e-7);
    auto both = [&](double x) {
        return side_density(m, +1, x) + side_density(m, -1, x);
    };
    double cap = std::max(1.0, 16.0 * delta);
    while (cap < hard && (2.0 / xr) * both(cap) > tol_closure) cap *= 1.2;
    cap = std::min(cap, hard);

    const double osc_w = 0.75 * 2.0 * M_PI / xr;
    std::vector<double> breaks;
    breaks.push_back(delta);
    double x = delta;
    while (x < cap && breaks.size() < 60000) {
        x = std::min(x + std::min(std::max(x, 4.0 * delta), osc_w), cap);
        breaks.push_back(x);
    }
    auto core = integrate_gk_panels<Complex>(
        [&](double u) { return integrand(u); }, breaks, 0.25 * abs_tol, 1e-13, 80000);

    Complex closure(0.0, 0.0);
    double closure_err = 0.0;
    if (cap < hard * 0.999999) {
        const double m0 = integrate_gk_log<double>(both, cap, hard, 1e-14, 1e-9).value;
        const double m1_diff =
            integrate_gk_log<double>(
                [&](double y) {
                    return y * (side_density(m, +1, y) - side_density(m, -1, y));
                },
                cap, hard, 1e-13, 1e-9)
                .value;
        if (!std::isfinite(m1_diff) || std::abs(m1_diff) > 1e8)
            throw DivergentIntegral("tail first moment does not pair off");
        closure = -m0 - i_unit * xi * m1_diff;
        closure_err = tol_closure;  // oscillatory remainder bound
    }
    return {core.value + closure + i_unit * drift_b * xi,
            core.abs_err + closure_err};
}

Complex psi_vg(const VGParams& p, Complex xi) {
    const Complex i_unit(0.0, 1.0);
    auto log_arg = [&](Complex z) {
        return 1.0 - i_unit * p.theta * p.nu_vg * z +
               0.5 * p.sigma * p.sigma * p.nu_vg * z * z;
    };
    // Continuity along the ray from 0 to xi: the principal branch is valid
    // only if the quadratic path of the log argument stays off (-inf, 0].
    Complex prev = log_arg(Complex(0.0, 0.0));
    const int steps = 64;
    for (int k = 1; k <= steps; ++k) {
        const Complex w = log_arg(xi * (static_cast<double>(k) / steps));
        if (w == Complex(0.0, 0.0) || (w.real() <= 0.0 && w.imag() == 0.0))
            throw BranchError("VG log argument hit the branch cut");
        if ((prev.imag() < 0.0) != (w.imag() < 0.0) && prev.imag() != 0.0) {
            // interpolated crossing of the real axis
            const double t = prev.imag() / (prev.imag() - w.imag());
            const double re_cross = prev.real() + t * (w.real() - prev.real());
            if (re_cross < 0.0)
                throw BranchError("VG log argument crossed the negative real axis");
        }
        prev = w;
    }
    return i_unit * (p.b - p.theta) * xi - std::log(log_arg(xi)) / p.nu_vg;
}

Complex psi_cgmy(const CGMYParams& p, Complex xi) {
    if (p.Y == 0.0 || p.Y == 1.0)
        throw ConfigError("closed-form CGMY exponent requires Y not in {0, 1}");
    if ((p.G == 0.0 || p.M == 0.0) && p.Y <= 1.0)
        throw DivergentIntegral("CGMY with a zero tilt and Y <= 1 has no first moment");
    const Complex i_unit(0.0, 1.0);
    const double Y = p.Y;
    const double gamma_my = std::tgamma(-Y);
    auto branch = [&](double a) -> Complex {
        // (a -/+ i xi)^Y - a^Y +/- i xi Y a^{Y-1}, written for the M side;
        // caller flips the sign of xi for the G side.
        const Complex base = a - i_unit * xi;
        const Complex pw = (base == Complex(0.0, 0.0))
                               ? Complex(0.0, 0.0)
                               : std::pow(base, Y);
        const double aY = a > 0.0 ? std::pow(a, Y) : 0.0;
        const double aY1 = a > 0.0 ? std::pow(a, Y - 1.0) : 0.0;
        return pw - aY + i_unit * xi * Y * aY1;
    };
    const Complex jump =
        p.C * gamma_my * (branch(p.M) + [&] {
            const Complex base = p.G + i_unit * xi;
            const Complex pw = (base == Complex(0.0, 0.0))
                                   ? Complex(0.0, 0.0)
                                   : std::pow(base, Y);
            const double gY = p.G > 0.0 ? std::pow(p.G, Y) : 0.0;
            const double gY1 = p.G > 0.0 ? std::pow(p.G, Y - 1.0) : 0.0;
            return pw - gY - i_unit * xi * Y * gY1;
        }());
    return jump + i_unit * p.b * xi;
}

bool check_finite_variation(const LevyMeasureSpec& m) {
    switch (m.family) {
        case MeasureFamily::VG: return true;
        case MeasureFamily::CGMY: return m.singularity_order < 1.0;
        case MeasureFamily::PointMasses: return true;
        case MeasureFamily::Custom: break;
    }
    // Numeric ladder: the increments of integral |x| nu(dx) over shrinking
    // inner shells must decay geometrically for the integral to be finite.
    double prev = -1.0;
    int non_decaying = 0;
    for (int k = 2; k <= 8; ++k) {
        const double lo = std::pow(10.0, -k - 1);
        const double hi = std::pow(10.0, -k);
        auto f = [&](double x) {
            return x * (side_density(m, +1, x) + side_density(m, -1, x));
        };
        const double inc = integrate_gk_log<double>(f, lo, hi, 1e-15, 1e-8).value;
        if (prev >= 0.0 && inc > 0.95 * prev && inc > 1e-14) ++non_decaying;
        prev = inc;
    }
    return non_decaying < 3;
}

bool rlpe_order_check(const LevyMeasureSpec& m, double nu_order, double nu_prime,
                      double c, double C_bound) {
    if (!(nu_prime < nu_order) || !(c > 0.0) || !(C_bound > 0.0))
        throw ConfigError("rlpe_order_check requires nu' < nu, c > 0, C > 0");
    if (m.is_discrete()) return false;
    const int n_samples = 61;
    for (int side : {+1, -1}) {
        for (int k = 0; k < n_samples; ++k) {
            const double ax = std::pow(10.0, -6.0 + 6.0 * k / (n_samples - 1.0));
            const double defect =
                std::abs(side_density(m, side, ax) - c * std::pow(ax, -nu_order - 1.0));
            if (defect > C_bound * std::pow(ax, -nu_prime - 1.0)) return false;
        }
    }
    return true;
}

LevyModel LevyModel::vg(VGParams p) {
    p.validate();
    LevyModel m;
    m.measure_ = LevyMeasureSpec::vg(p);
    m.drift_b_ = p.b;
    m.vg_ = p;
    return m;
}

LevyModel LevyModel::cgmy(CGMYParams p) {
    p.validate();
    LevyModel m;
    m.measure_ = LevyMeasureSpec::cgmy(p);
    m.drift_b_ = p.b;
    m.cgmy_ = p;
    return m;
}

LevyModel LevyModel::point_masses(std::vector<PointMass> masses, double drift_b) {
    LevyModel m;
    m.measure_ = LevyMeasureSpec::from_point_masses(std::move(masses));
    m.drift_b_ = drift_b;
    return m;
}

LevyModel LevyModel::custom(LevyMeasureSpec measure, double drift_b) {
    measure.validate();
    LevyModel m;
    m.measure_ = std::move(measure);
    m.drift_b_ = drift_b;
    return m;
}

void LevyModel::set_drift(double b) {
    drift_b_ = b;
    if (vg_) vg_->b = b;
    if (cgmy_) cgmy_->b = b;
}

bool LevyModel::has_exp_moment() const {
    if (vg_) return vg_->exp_moment_ok();
    if (cgmy_) return cgmy_->exp_moment_ok();
    if (measure_.is_discrete()) return true;
    try {
        tail_cutoff(measure_, +1, 1.0);
        return true;
    } catch (const DivergentIntegral&) {
        return false;
    }
}

Complex LevyModel::psi(Complex xi) const {
    if (vg_) return psi_vg(*vg_, xi);
    if (cgmy_ && cgmy_->Y != 0.0 && cgmy_->Y != 1.0) return psi_cgmy(*cgmy_, xi);
    return psi_quadrature(measure_, drift_b_, xi).value;
}

double LevyModel::jump_exponent_at_minus_i() const {
    return psi(Complex(0.0, -1.0)).real() - drift_b_;
}

double LevyModel::jump_variance() const {
    if (measure_.is_discrete()) {
        double v = 0.0;
        for (const auto& pm : measure_.point_masses)
            v += pm.intensity * pm.location * pm.location;
        return v;
    }
    const double split = 1.0;
    double v = small_jump_variance(measure_, split);
    for (int side : {+1, -1}) {
        const double hi = tail_cutoff(measure_, side);
        if (hi <= split) continue;
        v += integrate_gk_log<double>(
                 [&](double x) { return x * x * side_density(measure_, side, x); },
                 split, hi, 1e-13, 1e-9)
                 .value;
    }
    return v;
}

CharacteristicExponent LevyModel::exponent() const {
    CharacteristicExponent ce;
    ce.drift_b = drift_b_;
    ce.model_tag = measure_.family;
    ce.evaluator = [model = *this](Complex xi) { return model.psi(xi); };
    return ce;
}

double calibrate_drift(const LevyModel& model, double rate) {
    if (rate < 0.0) throw ConfigError("rate must be nonnegative");
    if (!model.has_exp_moment())
        throw MomentError("exponential moment fails: martingale condition unreachable");
    // psi(-i) = b + jump part, so the martingale condition -r + psi(-i) = 0
    // solves exactly as b* = r - jump part.
    return rate - model.jump_exponent_at_minus_i();
}

}  // namespace levyob
