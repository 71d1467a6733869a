#include "levyob/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levyob/quadrature.hpp"

namespace levyob {

SampledFunction::SampledFunction(double x_min, double h, std::vector<double> values,
                                 ExtensionRule extension)
    : x_min_(x_min), h_(h), values_(std::move(values)), extension_(std::move(extension)) {
    if (values_.size() < 3) throw ConfigError("sampled function needs >= 3 nodes");
    if (!(h_ > 0.0)) throw ConfigError("grid spacing must be positive");
    // Fritsch-Carlson limited slopes: monotone on monotone data, no
    // overshoot at kinks.
    const std::size_t n = values_.size();
    slopes_.resize(n);
    std::vector<double> sec(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) sec[i] = (values_[i + 1] - values_[i]) / h_;
    slopes_[0] = sec[0];
    slopes_[n - 1] = sec[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (sec[i - 1] * sec[i] <= 0.0)
            slopes_[i] = 0.0;
        else
            slopes_[i] = 2.0 * sec[i - 1] * sec[i] / (sec[i - 1] + sec[i]);
    }
}

SampledFunction SampledFunction::from_function(const std::function<double(double)>& f,
                                               double x_min, double x_max,
                                               std::size_t n, ExtensionRule extension) {
    if (n < 3) throw ConfigError("sampled function needs >= 3 nodes");
    const double h = (x_max - x_min) / static_cast<double>(n - 1);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = f(x_min + h * static_cast<double>(i));
    return SampledFunction(x_min, h, std::move(values), std::move(extension));
}

double SampledFunction::operator()(double x) const {
    const double xmax = x_max();
    if (x < x_min_ || x > xmax) {
        switch (extension_.kind) {
            case ExtensionRule::Kind::Constants:
                return x < x_min_ ? extension_.left_value : extension_.right_value;
            case ExtensionRule::Kind::Function:
                return extension_.fn(x);
            case ExtensionRule::Kind::LastAffine: {
                if (x < x_min_) return values_[0] + slopes_[0] * (x - x_min_);
                return values_.back() + slopes_.back() * (x - xmax);
            }
        }
    }
    const double s = (x - x_min_) / h_;
    std::size_t i = static_cast<std::size_t>(std::min(
        std::max(0.0, std::floor(s)), static_cast<double>(values_.size() - 2)));
    const double t = s - static_cast<double>(i);
    const double v0 = values_[i], v1 = values_[i + 1];
    const double m0 = slopes_[i] * h_, m1 = slopes_[i + 1] * h_;
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * v0 + (t3 - 2.0 * t2 + t) * m0 +
           (-2.0 * t3 + 3.0 * t2) * v1 + (t3 - t2) * m1;
}

double SampledFunction::eval_linear(double x) const {
    const double xmax = x_max();
    if (x < x_min_ || x > xmax) return (*this)(x);
    const double s = (x - x_min_) / h_;
    std::size_t i = static_cast<std::size_t>(std::min(
        std::max(0.0, std::floor(s)), static_cast<double>(values_.size() - 2)));
    const double t = s - static_cast<double>(i);
    return (1.0 - t) * values_[i] + t * values_[i + 1];
}

double SampledFunction::eval_interp(double x) const {
    const double xmax = x_max();
    if (x < x_min_ || x > xmax) return (*this)(x);
    const double s = (x - x_min_) / h_;
    const std::size_t n = values_.size();
    std::size_t i = static_cast<std::size_t>(
        std::min(std::max(0.0, std::floor(s)), static_cast<double>(n - 2)));
    // 4-point Lagrange cubic with fixed weights (linear in the samples);
    // one-sided stencil at the edges
    std::size_t base = (i == 0) ? 0 : std::min(i - 1, n - 4);
    const double t = s - static_cast<double>(base);  // in [0, 3]
    const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return w0 * values_[base] + w1 * values_[base + 1] + w2 * values_[base + 2] +
           w3 * values_[base + 3];
}

double SampledFunction::deriv1_centered(std::size_t i) const {
    if (i == 0) return (values_[1] - values_[0]) / h_;
    if (i + 1 >= values_.size())
        return (values_[i] - values_[i - 1]) / h_;
    return (values_[i + 1] - values_[i - 1]) / (2.0 * h_);
}

double SampledFunction::deriv1_upwind(std::size_t i, double b_sign) const {
    if (b_sign >= 0.0) {
        if (i + 1 >= values_.size()) return (values_[i] - values_[i - 1]) / h_;
        return (values_[i + 1] - values_[i]) / h_;
    }
    if (i == 0) return (values_[1] - values_[0]) / h_;
    return (values_[i] - values_[i - 1]) / h_;
}

double SampledFunction::deriv2(std::size_t i) const {
    if (i == 0 || i + 1 >= values_.size()) return 0.0;
    return (values_[i + 1] - 2.0 * values_[i] + values_[i - 1]) / (h_ * h_);
}

namespace {

double side_density(const LevyMeasureSpec& m, int side, double x) {
    return m.density(side > 0 ? x : -x);
}

// First point beyond `eps` where the side density drops below `tol_d`
// (densities are monotone past their singularity for all supported
// families). Returns hard_cap if it never does.
double density_cap(const LevyMeasureSpec& m, int side, double eps, double tol_d,
                   double hard_cap) {
    if (tol_d <= 0.0) return hard_cap;
    double lo = eps, hi = hard_cap;
    if (side_density(m, side, hi) > tol_d) return hard_cap;
    for (int it = 0; it < 60 && hi / lo > 1.0001; ++it) {
        const double mid = std::sqrt(lo * hi);
        (side_density(m, side, mid) > tol_d ? lo : hi) = mid;
    }
    return std::max(hi, 4.0 * eps);
}

// Panel breakpoints from eps to cap: geometric near the singularity,
// width-capped once the oscillation period matters.
std::vector<double> side_breaks(double eps, double cap, double osc_period) {
    std::vector<double> br;
    br.push_back(eps);
    const double width_cap =
        osc_period > 0.0 ? 0.75 * osc_period : std::numeric_limits<double>::infinity();
    double x = eps;
    while (x < cap && br.size() < 200000) {
        double step = std::min(0.35 * x, width_cap);
        step = std::max(step, 1e-14 * cap);
        x = std::min(x + step, cap);
        br.push_back(x);
    }
    return br;
}

}  // namespace

JumpQuadRule build_jump_rule(const LevyMeasureSpec& measure, double eps_inner,
                             const RuleControls& controls) {
    if (!(eps_inner > 0.0)) throw ConfigError("eps_inner must be positive");
    if (measure.is_discrete()) {
        JumpQuadRule rule;
        rule.eps_inner = eps_inner;
        for (const auto& pm : measure.point_masses) {
            if (std::abs(pm.location) <= eps_inner) {
                rule.sigma2_inner += pm.intensity * pm.location * pm.location;
                continue;
            }
            rule.nodes.push_back(pm.location);
            rule.weights.push_back(pm.intensity);
            rule.mass_total += pm.intensity;
            rule.mean_total += pm.intensity * pm.location;
        }
        return rule;
    }

    JumpQuadRule rule;
    rule.eps_inner = eps_inner;
    rule.sigma2_inner = small_jump_variance(measure, eps_inner);

    double hard_cap[2];
    for (int side : {+1, -1}) {
        const int si = side > 0 ? 0 : 1;
        hard_cap[si] = tail_cutoff(measure, side);
        double cap = density_cap(measure, side, eps_inner, controls.tail_density_tol,
                                 hard_cap[si]);
        if (cap <= eps_inner) cap = std::min(2.0 * eps_inner, hard_cap[si]);
        (side > 0 ? rule.cap_right : rule.cap_left) = cap;

        const auto breaks = side_breaks(eps_inner, cap, controls.osc_period);
        auto dens = [&](double x) { return side_density(measure, side, x); };
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
            // split until the density mass on each piece is resolved
            std::vector<std::pair<double, double>> work{{breaks[k], breaks[k + 1]}};
            int budget = 1 << std::min(controls.refine_depth, 8);
            while (!work.empty()) {
                auto [a, b] = work.back();
                work.pop_back();
                auto [mass, err] = gk15_panel<double>(dens, a, b);
                if (err > 1e-9 * std::max(std::abs(mass), 1e-30) && budget > 1) {
                    const double mid = 0.5 * (a + b);
                    work.push_back({a, mid});
                    work.push_back({mid, b});
                    budget -= 1;
                    continue;
                }
                rule.quad_err += err;
                const double c = 0.5 * (a + b), r = 0.5 * (b - a);
                for (int j = -7; j <= 7; ++j) {
                    const int aj = j < 0 ? -j : j;
                    const double node =
                        c + r * (j < 0 ? -detail::kGK15Nodes[aj] : detail::kGK15Nodes[aj]);
                    const double w = r * detail::kK15Weights[aj] * dens(node);
                    if (w <= 0.0) continue;
                    const double y = side > 0 ? node : -node;
                    rule.nodes.push_back(y);
                    rule.weights.push_back(w);
                    rule.mass_total += w;
                    rule.mean_total += w * y;
                }
            }
        }
    }

    // analytic closure of the two tails beyond the caps: mass and first
    // moment (paired when the caps coincide so symmetric heavy tails cancel)
    const double cl = rule.cap_left, cr = rule.cap_right;
    if (cr < hard_cap[0] * 0.999999)
        rule.tail_mass_right = integrate_gk_log<double>(
                                   [&](double x) { return side_density(measure, +1, x); },
                                   cr, hard_cap[0], 1e-14, 1e-9)
                                   .value;
    if (cl < hard_cap[1] * 0.999999)
        rule.tail_mass_left = integrate_gk_log<double>(
                                  [&](double x) { return side_density(measure, -1, x); },
                                  cl, hard_cap[1], 1e-14, 1e-9)
                                  .value;
    if (rule.tail_mass_left > 0.0 || rule.tail_mass_right > 0.0) {
        if (std::abs(cl - cr) <= 1e-12 * std::max(cl, cr)) {
            const double hard = std::max(hard_cap[0], hard_cap[1]);
            rule.tail_mean = integrate_gk_log<double>(
                                 [&](double x) {
                                     return x * (side_density(measure, +1, x) -
                                                 side_density(measure, -1, x));
                                 },
                                 cr, hard, 1e-13, 1e-9)
                                 .value;
        } else {
            double m1 = 0.0;
            if (cr < hard_cap[0])
                m1 += integrate_gk_log<double>(
                          [&](double x) { return x * side_density(measure, +1, x); },
                          cr, hard_cap[0], 1e-13, 1e-9)
                          .value;
            if (cl < hard_cap[1])
                m1 -= integrate_gk_log<double>(
                          [&](double x) { return x * side_density(measure, -1, x); },
                          cl, hard_cap[1], 1e-13, 1e-9)
                          .value;
            rule.tail_mean = m1;
        }
    }
    return rule;
}

OperatorSpec OperatorSpec::levy(const LevyModel& model) {
    OperatorSpec op;
    op.measure = model.measure();
    const double b = model.drift();
    op.drift_b = [b](double) { return b; };
    op.state_independent = true;
    return op;
}

NonlocalOperator::NonlocalOperator(OperatorSpec spec, double grid_h_hint)
    : spec_(std::move(spec)) {
    if (spec_.eps_inner <= 0.0) spec_.eps_inner = grid_h_hint;
    if (spec_.eps_inner <= 0.0) throw ConfigError("eps_inner must be positive");
    if (spec_.quad_nodes > 0)
        spec_.controls.refine_depth =
            std::clamp(spec_.quad_nodes / 64, 3, 8);
    if (spec_.state_independent)
        rule_ = build_jump_rule(spec_.measure, spec_.eps_inner, spec_.controls);
}

double NonlocalOperator::jump_part(const SampledFunction& u, double x, double du,
                                   double d2u) const {
    const auto& ext = u.extension();
    double sum = 0.5 * d2u * rule_.sigma2_inner;
    const double ux = u.eval_interp(x);
    for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
        const double y = rule_.nodes[q];
        sum += rule_.weights[q] * (u.eval_interp(x + y) - ux - y * du);
    }
    // Tail closure: beyond the caps u is represented by its declared
    // asymptotes; the oscillatory remainder is an integration-by-parts
    // quantity below the rule's density threshold.
    if (rule_.tail_mass_left > 0.0 || rule_.tail_mass_right > 0.0) {
        sum += rule_.tail_mass_left * (ext.asymptote_left - ux);
        sum += rule_.tail_mass_right * (ext.asymptote_right - ux);
        sum -= rule_.tail_mean * du;
    }
    return sum;
}

double NonlocalOperator::apply(const SampledFunction& u, double x) const {
    const double h = u.spacing();
    const double s = (x - u.x_min()) / h;
    if (s < 0.5 || s > static_cast<double>(u.size() - 1) - 0.5)
        throw DomainError("apply expects an interior node");
    const auto i = static_cast<std::size_t>(std::llround(s));
    if (std::abs(s - static_cast<double>(i)) > 1e-9)
        throw DomainError("apply expects a grid node");
    const double du = u.deriv1_centered(i);
    const double d2u = u.deriv2(i);

    if (!spec_.state_independent) {
        // slow path: adaptive quadrature of the state-dependent integrand
        const auto& m = spec_.measure;
        const double ux = u.values()[i];
        double jump = 0.0;
        if (m.is_discrete()) {
            for (const auto& pm : m.point_masses) {
                const double fy = spec_.jump_map(x, pm.location);
                jump += pm.intensity * (u.eval_interp(x + fy) - ux - fy * du);
            }
        } else {
            const double eps = spec_.eps_inner;
            for (int side : {+1, -1}) {
                const double hi = tail_cutoff(m, side);
                if (hi <= eps) continue;
                jump += integrate_gk_log<double>(
                            [&](double yy) {
                                const double y = side > 0 ? yy : -yy;
                                const double fy = spec_.jump_map(x, y);
                                return (u.eval_interp(x + fy) - ux - fy * du) *
                                       side_density(m, side, yy);
                            },
                            eps, hi, 1e-11, 1e-9)
                            .value;
                // inner Taylor mass of F(x, .)^2 against the measure
                jump += 0.5 * d2u *
                        integrate_gk_log<double>(
                            [&](double yy) {
                                const double y = side > 0 ? yy : -yy;
                                const double fy = spec_.jump_map(x, y);
                                return fy * fy * side_density(m, side, yy);
                            },
                            eps * 1e-9, eps, 1e-14, 1e-9)
                            .value;
            }
        }
        return spec_.drift_b(x) * du + jump;
    }
    return spec_.drift_b(x) * du + jump_part(u, x, du, d2u);
}

std::vector<double> NonlocalOperator::apply_grid(const SampledFunction& u) const {
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) out[i] = apply(u, u.node(i));
    return out;
}

double apply_generator(const OperatorSpec& op, const SampledFunction& u, double x) {
    NonlocalOperator L(op, u.spacing());
    return L.apply(u, x);
}

double symbol_check(const OperatorSpec& op,
                    const std::function<Complex(double)>& psi_ref,
                    const std::vector<double>& xi_list, double x_min, double x_max,
                    std::size_t n_nodes) {
    if (!op.state_independent)
        throw ConfigError("symbol check requires a state-independent spec");
    double worst = 0.0;
    for (double xi : xi_list) {
        if (xi == 0.0) continue;
        const Complex psi = psi_ref(xi);
        const double denom = std::max(std::abs(psi), 1e-14);

        OperatorSpec per_xi = op;
        if (per_xi.controls.osc_period <= 0.0)
            per_xi.controls.osc_period = 2.0 * M_PI / std::abs(xi);
        if (per_xi.controls.tail_density_tol <= 0.0)
            per_xi.controls.tail_density_tol = 2.0e-6 * std::abs(xi) * denom;
        NonlocalOperator L(per_xi, (x_max - x_min) / static_cast<double>(n_nodes - 1));

        auto ext_cos = ExtensionRule::function(
            [xi](double x) { return std::cos(xi * x); }, 0.0, 0.0);
        auto ext_sin = ExtensionRule::function(
            [xi](double x) { return std::sin(xi * x); }, 0.0, 0.0);
        auto u_cos = SampledFunction::from_function(
            [xi](double x) { return std::cos(xi * x); }, x_min, x_max, n_nodes, ext_cos);
        auto u_sin = SampledFunction::from_function(
            [xi](double x) { return std::sin(xi * x); }, x_min, x_max, n_nodes, ext_sin);

        for (std::size_t i = 1; i + 1 < n_nodes; ++i) {
            const double x = u_cos.node(i);
            const Complex w(L.apply(u_cos, x), L.apply(u_sin, x));
            const Complex psi_hat = w * std::exp(Complex(0.0, -xi * x));
            worst = std::max(worst, std::abs(psi_hat - psi) / denom);
        }
    }
    return worst;
}

std::vector<double> complementarity_residual(const NonlocalOperator& op,
                                             const SampledFunction& v,
                                             const std::function<double(double)>& phi,
                                             const std::function<double(double)>& f,
                                             const std::function<double(double)>& c) {
    std::vector<double> res(v.size(), 0.0);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double x = v.node(i);
        const double pde = -op.apply(v, x) + c(x) * v.values()[i] - f(x);
        res[i] = std::min(pde, v.values()[i] - phi(x));
    }
    return res;
}

}  // namespace levyob
