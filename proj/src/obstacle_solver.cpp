#include "levyob/obstacle_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levyob {

ObstacleProblemSpec ObstacleProblemSpec::stationary(std::function<double(double)> phi,
                                                    std::function<double(double)> f,
                                                    std::function<double(double)> c,
                                                    double c_lower_bound, double x_min,
                                                    double x_max, ExtensionRule ext) {
    ObstacleProblemSpec s;
    s.kind = ProblemKind::Stationary;
    s.obstacle = [phi = std::move(phi)](double, double x) { return phi(x); };
    s.running_f = [f = std::move(f)](double, double x) { return f(x); };
    s.discount_c = [c = std::move(c)](double, double x) { return c(x); };
    s.c_lower_bound = c_lower_bound;
    s.x_min = x_min;
    s.x_max = x_max;
    s.extension = std::move(ext);
    return s;
}

ObstacleProblemSpec ObstacleProblemSpec::evolution(
    std::function<double(double, double)> phi, std::function<double(double, double)> f,
    std::function<double(double, double)> c, std::function<double(double)> g, double T,
    double c_lower_bound, double x_min, double x_max, ExtensionRule ext) {
    ObstacleProblemSpec s;
    s.kind = ProblemKind::Evolution;
    s.obstacle = std::move(phi);
    s.running_f = std::move(f);
    s.discount_c = std::move(c);
    s.terminal_g = std::move(g);
    s.horizon_T = T;
    s.c_lower_bound = c_lower_bound;
    s.x_min = x_min;
    s.x_max = x_max;
    s.extension = std::move(ext);
    return s;
}

namespace {

std::function<double(double)> put_payoff(double strike) {
    return [strike](double x) { return std::max(strike - std::exp(x), 0.0); };
}

}  // namespace

ObstacleProblemSpec ObstacleProblemSpec::perpetual_put(double strike, double rate,
                                                       double x_min, double x_max) {
    auto phi = put_payoff(strike);
    // Deep in the money the put value coincides with the payoff; far out it
    // decays to zero, so the payoff itself is the correct far-field.
    auto ext = ExtensionRule::function(phi, strike, 0.0);
    return stationary(phi, [](double) { return 0.0; },
                      [rate](double) { return rate; }, rate, x_min, x_max,
                      std::move(ext));
}

ObstacleProblemSpec ObstacleProblemSpec::american_put(double strike, double rate,
                                                      double T, double x_min,
                                                      double x_max) {
    auto phi = put_payoff(strike);
    auto ext = ExtensionRule::function(phi, strike, 0.0);
    return evolution([phi](double, double x) { return phi(x); },
                     [](double, double) { return 0.0; },
                     [rate](double, double) { return rate; }, phi, T, rate, x_min,
                     x_max, std::move(ext));
}

void ObstacleProblemSpec::validate(std::size_t n_probe) const {
    if (!(x_max > x_min)) throw ConfigError("empty spatial domain");
    if (!obstacle || !running_f || !discount_c)
        throw ConfigError("obstacle, running payoff and discount are required");
    const double h = (x_max - x_min) / static_cast<double>(n_probe - 1);
    for (std::size_t i = 0; i < n_probe; ++i) {
        const double x = x_min + h * static_cast<double>(i);
        const double t = kind == ProblemKind::Evolution ? horizon_T : 0.0;
        if (discount_c(t, x) < c_lower_bound - 1e-12)
            throw ConfigError("discount c drops below the declared lower bound");
        if (kind == ProblemKind::Evolution) {
            if (!terminal_g) throw ConfigError("evolution problem needs terminal g");
            if (terminal_g(x) < obstacle(horizon_T, x) - 1e-12)
                throw CompatibilityError("terminal condition g < obstacle at expiry");
        }
    }
    if (kind == ProblemKind::Evolution && !(horizon_T > 0.0))
        throw ConfigError("evolution horizon must be positive");
    if (kind == ProblemKind::Stationary && !(c_lower_bound > 0.0))
        throw ConfigError("stationary problem requires c0 > 0");
}

double ValueGrid::interpolate(std::size_t ti, double x) const {
    const double h = x_grid[1] - x_grid[0];
    const double s = (x - x_grid.front()) / h;
    if (s <= 0.0) return at(ti, 0);
    if (s >= static_cast<double>(nx() - 1)) return at(ti, nx() - 1);
    const auto i = static_cast<std::size_t>(s);
    const double a = s - static_cast<double>(i);
    return (1.0 - a) * at(ti, i) + a * at(ti, i + 1);
}

SampledFunction slice_function(const ValueGrid& grid, const ObstacleProblemSpec& spec,
                               std::size_t ti) {
    std::vector<double> vals(grid.nx());
    for (std::size_t i = 0; i < grid.nx(); ++i) vals[i] = grid.at(ti, i);
    const double h = grid.x_grid[1] - grid.x_grid[0];
    return SampledFunction(grid.x_grid.front(), h, std::move(vals), spec.extension);
}

namespace {

double extension_value(const ExtensionRule& ext, double x, double x_min, double x_max,
                       const std::vector<double>& boundary_hint) {
    switch (ext.kind) {
        case ExtensionRule::Kind::Constants:
            return x < x_min ? ext.left_value : ext.right_value;
        case ExtensionRule::Kind::Function:
            return ext.fn(x);
        case ExtensionRule::Kind::LastAffine:
            // boundary_hint carries the last known edge values and slopes
            if (x < x_min) return boundary_hint[0] + boundary_hint[1] * (x - x_min);
            return boundary_hint[2] + boundary_hint[3] * (x - x_max);
    }
    return 0.0;
}

/// Discrete L on the uniform grid: dense jump block with row-sum
/// compensation, tridiagonal local block (upwind drift + inner Taylor),
/// and the affine far-field offset.
struct DiscreteOperator {
    std::size_t n = 0;
    double x0 = 0.0, h = 0.0;
    std::vector<double> jump;    // row-major dense
    std::vector<double> offset;  // extension contribution per row
    std::vector<double> sub, dia, sup;
    double explicit_mass = 0.0;  // for the explicit-jump stability bound

    double local_apply(const std::vector<double>& v, std::size_t i) const {
        double s = dia[i] * v[i];
        if (i > 0) s += sub[i] * v[i - 1];
        if (i + 1 < n) s += sup[i] * v[i + 1];
        return s;
    }
    double jump_apply(const std::vector<double>& v, std::size_t i) const {
        const double* row = &jump[i * n];
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * v[j];
        return s;
    }
};

DiscreteOperator assemble_operator(const OperatorSpec& op, const JumpQuadRule& rule,
                                   double x_min, double x_max, std::size_t n,
                                   const ExtensionRule& ext) {
    DiscreteOperator d;
    d.n = n;
    d.x0 = x_min;
    d.h = (x_max - x_min) / static_cast<double>(n - 1);
    d.jump.assign(n * n, 0.0);
    d.offset.assign(n, 0.0);
    d.sub.assign(n, 0.0);
    d.dia.assign(n, 0.0);
    d.sup.assign(n, 0.0);

    const double drift_shift = rule.mean_total + rule.tail_mean;
    const double tail_mass = rule.tail_mass_left + rule.tail_mass_right;
    d.explicit_mass = rule.mass_total + tail_mass;

    std::vector<double> hint = {0.0, 0.0, 0.0, 0.0};  // LastAffine falls back flat

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = d.x0 + d.h * static_cast<double>(i);
        // compensator folded into the advection speed
        const double b_eff = op.drift_b(x) - drift_shift;
        if (b_eff >= 0.0) {
            d.sup[i] += b_eff / d.h;
            d.dia[i] -= b_eff / d.h;
        } else {
            d.dia[i] += b_eff / d.h;
            d.sub[i] -= b_eff / d.h;
        }
        const double s2 = 0.5 * rule.sigma2_inner / (d.h * d.h);
        d.sub[i] += s2;
        d.sup[i] += s2;
        d.dia[i] -= 2.0 * s2;

        double* row = &d.jump[i * n];
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double w = rule.weights[q];
            const double target = x + rule.nodes[q];
            const double s = (target - d.x0) / d.h;
            if (s >= 0.0 && s <= static_cast<double>(n - 1)) {
                auto j = static_cast<std::size_t>(s);
                if (j + 1 >= n) j = n - 2;
                const double a = s - static_cast<double>(j);
                row[j] += w * (1.0 - a);
                row[j + 1] += w * a;
            } else {
                d.offset[i] += w * extension_value(ext, target, x_min, x_max, hint);
            }
        }
        row[i] -= rule.mass_total;
        // analytic tail closure beyond the quadrature caps
        d.offset[i] += rule.tail_mass_left * ext.asymptote_left +
                       rule.tail_mass_right * ext.asymptote_right;
        row[i] -= tail_mass;
    }
    return d;
}

// In-place LU with partial pivoting; solves A x = b.
void dense_solve(std::vector<double>& A, std::vector<double>& b, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(A[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(A[i * n + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < 1e-300) throw NoConvergence("singular linear system", 0, 0.0);
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        const double inv = 1.0 / A[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = A[i * n + k] * inv;
            if (m == 0.0) continue;
            A[i * n + k] = 0.0;
            const double* rowk = &A[k * n];
            double* rowi = &A[i * n];
            for (std::size_t j = k + 1; j < n; ++j) rowi[j] -= m * rowk[j];
            b[i] -= m * b[k];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        const double* row = &A[i * n];
        for (std::size_t j = i + 1; j < n; ++j) s -= row[j] * b[j];
        b[i] = s / row[i];
    }
}

struct StationarySystem {
    // A v = q with A = c I - L on interior rows; Dirichlet edges.
    std::vector<double> A;  // dense n*n
    std::vector<double> q;
    std::vector<double> phi;
    std::size_t n = 0;
};

StationarySystem build_stationary_system(const ObstacleProblemSpec& spec,
                                          const DiscreteOperator& d) {
    const std::size_t n = d.n;
    StationarySystem sys;
    sys.n = n;
    sys.A.assign(n * n, 0.0);
    sys.q.assign(n, 0.0);
    sys.phi.assign(n, 0.0);
    std::vector<double> hint = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double x = d.x0 + d.h * static_cast<double>(i);
        sys.phi[i] = spec.obstacle(0.0, x);
        if (i == 0 || i + 1 == n) {
            sys.A[i * n + i] = 1.0;
            const double bval =
                extension_value(spec.extension, x, spec.x_min, spec.x_max, hint);
            sys.q[i] = std::max(bval, sys.phi[i]);
            continue;
        }
        double* row = &sys.A[i * n];
        const double* jrow = &d.jump[i * n];
        for (std::size_t j = 0; j < n; ++j) row[j] = -jrow[j];
        row[i - 1] -= d.sub[i];
        row[i] -= d.dia[i];
        row[i + 1] -= d.sup[i];
        row[i] += spec.discount_c(0.0, x);
        sys.q[i] = spec.running_f(0.0, x) + d.offset[i];
    }
    return sys;
}

}  // namespace

ValueGrid solve_stationary_grid(const ObstacleProblemSpec& spec, const OperatorSpec& op,
                                std::size_t n_nodes, const StationaryOptions& options) {
    spec.validate();
    if (spec.kind != ProblemKind::Stationary)
        throw ConfigError("solve_stationary_grid needs a stationary spec");
    if (!op.state_independent)
        throw ConfigError("the stationary solver requires state-independent jumps");
    const double h = (spec.x_max - spec.x_min) / static_cast<double>(n_nodes - 1);
    const double eps_inner = op.eps_inner > 0.0 ? op.eps_inner : h;
    const JumpQuadRule rule = build_jump_rule(op.measure, eps_inner, op.controls);
    const DiscreteOperator d =
        assemble_operator(op, rule, spec.x_min, spec.x_max, n_nodes, spec.extension);
    StationarySystem sys = build_stationary_system(spec, d);
    const std::size_t n = sys.n;

    std::vector<double> v = sys.phi;
    v[0] = sys.q[0];
    v[n - 1] = sys.q[n - 1];
    std::vector<std::uint8_t> policy(n, 1), policy_prev(n, 2);
    int iterations = 0;
    bool converged = false;

    auto row_apply = [&](const std::vector<double>& w, std::size_t i) {
        const double* row = &sys.A[i * n];
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * w[j];
        return s;
    };

    if (options.use_policy_iteration) {
        std::vector<double> M, rhs;
        for (; iterations < options.max_iter; ++iterations) {
            // pick per-node the branch attaining the complementarity min;
            // ties go to the contact set
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double pde = row_apply(v, i) - sys.q[i];
                const double obst = v[i] - sys.phi[i];
                policy[i] = obst <= pde ? 1 : 0;
            }
            M = sys.A;
            rhs = sys.q;
            for (std::size_t i = 1; i + 1 < n; ++i) {
                if (!policy[i]) continue;
                double* row = &M[i * n];
                std::fill(row, row + n, 0.0);
                row[i] = 1.0;
                rhs[i] = sys.phi[i];
            }
            dense_solve(M, rhs, n);
            double delta = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                delta = std::max(delta, std::abs(rhs[i] - v[i]));
            v = rhs;
            if (policy == policy_prev && delta < options.tol) {
                converged = true;
                ++iterations;
                break;
            }
            policy_prev = policy;
        }
    }
    if (!converged) {
        // projected damped sweeps, also the fallback when policies cycle
        const double w = options.damping;
        const int budget = options.use_policy_iteration ? 200000 : options.max_iter;
        int sweeps = 0;
        for (; sweeps < budget; ++sweeps) {
            double delta = 0.0;
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double aii = sys.A[i * n + i];
                const double r = sys.q[i] - row_apply(v, i);
                const double cand = std::max(sys.phi[i], v[i] + w * r / aii);
                delta = std::max(delta, std::abs(cand - v[i]));
                v[i] = cand;
            }
            if (delta < options.tol * w) {
                converged = true;
                break;
            }
        }
        iterations += sweeps;
        if (!converged)
            throw NoConvergence(
                "stationary obstacle solver exhausted its iteration budget; "
                "reduce the damping",
                iterations, options.damping);
    }

    ValueGrid out;
    out.t_mesh = {0.0};
    out.x_grid.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.x_grid[i] = spec.x_min + h * static_cast<double>(i);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i], sys.phi[i]);
    out.values = v;
    out.tol_contact = std::max(1e-8, 10.0 * options.tol);
    out.contact.assign(n, 0);
    out.residuals.assign(n, 0.0);
    double max_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.contact[i] = (v[i] - sys.phi[i] <= out.tol_contact) ? 1 : 0;
        if (i == 0 || i + 1 == n) continue;
        const double res = std::min(row_apply(v, i) - sys.q[i], v[i] - sys.phi[i]);
        out.residuals[i] = res;
        max_res = std::max(max_res, std::abs(res));
    }
    out.meta.iterations = iterations;
    out.meta.tol = options.tol;
    out.meta.damping = options.damping;
    out.meta.scheme = options.use_policy_iteration ? "policy+lu" : "projected-sweep";
    out.meta.max_residual = max_res;
    out.meta.jump_mass = d.explicit_mass;
    return out;
}

ValueGrid solve_evolution_grid(const ObstacleProblemSpec& spec, const OperatorSpec& op,
                               std::size_t n_nodes, const EvolutionOptions& options) {
    spec.validate();
    if (spec.kind != ProblemKind::Evolution)
        throw ConfigError("solve_evolution_grid needs an evolution spec");
    const std::size_t nt = options.n_time;
    if (nt < 2) throw ConfigError("need at least 2 time steps");
    const double h = (spec.x_max - spec.x_min) / static_cast<double>(n_nodes - 1);
    const double eps_inner = op.eps_inner > 0.0 ? op.eps_inner : h;
    const JumpQuadRule rule = build_jump_rule(op.measure, eps_inner, op.controls);
    const DiscreteOperator d =
        assemble_operator(op, rule, spec.x_min, spec.x_max, n_nodes, spec.extension);
    const double dt = spec.horizon_T / static_cast<double>(nt);
    if (dt * d.explicit_mass > 1.0) {
        const auto need = static_cast<std::size_t>(
            std::ceil(spec.horizon_T * d.explicit_mass)) + 1;
        throw StabilityError("explicit-jump bound violated: need n_time >= " +
                             std::to_string(need));
    }

    const std::size_t n = n_nodes;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = spec.x_min + h * static_cast<double>(i);

    ValueGrid out;
    out.t_mesh.resize(nt + 1);
    for (std::size_t m = 0; m <= nt; ++m)
        out.t_mesh[m] = spec.horizon_T * static_cast<double>(m) / static_cast<double>(nt);
    out.x_grid = x;
    out.values.assign((nt + 1) * n, 0.0);
    out.contact.assign((nt + 1) * n, 0);
    out.residuals.assign((nt + 1) * n, 0.0);
    out.tol_contact = std::max(1e-8, 10.0 * options.tol);

    std::vector<double> hint = {0.0, 0.0, 0.0, 0.0};
    std::vector<double> v_next(n), v(n), rhs(n), sub(n), dia(n), sup(n), jexp(n);
    // terminal condition, exactly on the grid
    for (std::size_t i = 0; i < n; ++i) v_next[i] = spec.terminal_g(x[i]);
    std::copy(v_next.begin(), v_next.end(), out.values.begin() + nt * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi_T = spec.obstacle(spec.horizon_T, x[i]);
        out.contact[nt * n + i] = (v_next[i] - phi_T <= out.tol_contact) ? 1 : 0;
    }

    double max_res = 0.0;
    for (std::size_t m = nt; m-- > 0;) {
        const double t = out.t_mesh[m];
        // explicit dense jump action on the known slice
        for (std::size_t i = 1; i + 1 < n; ++i)
            jexp[i] = d.jump_apply(v_next, i) + d.offset[i];
        // implicit tridiagonal: (I + dt (c - T)) v = v_next + dt (J v_next + f)
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0 || i + 1 == n) {
                sub[i] = sup[i] = 0.0;
                dia[i] = 1.0;
                const double bval =
                    extension_value(spec.extension, x[i], spec.x_min, spec.x_max, hint);
                rhs[i] = std::max(bval, spec.obstacle(t, x[i]));
                continue;
            }
            const double c = spec.discount_c(t, x[i]);
            sub[i] = -dt * d.sub[i];
            dia[i] = 1.0 + dt * (c - d.dia[i]);
            sup[i] = -dt * d.sup[i];
            rhs[i] = v_next[i] + dt * (jexp[i] + spec.running_f(t, x[i]));
        }
        // Thomas solve
        for (std::size_t i = 1; i < n; ++i) {
            const double w = sub[i] / dia[i - 1];
            dia[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        v[n - 1] = rhs[n - 1] / dia[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            v[i] = (rhs[i] - sup[i] * v[i + 1]) / dia[i];

        // projection onto the obstacle; ties belong to the contact set
        const bool project =
            options.project_stride <= 1 || m % options.project_stride == 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double phi = spec.obstacle(t, x[i]);
            if (project) v[i] = std::max(v[i], phi);
            out.contact[m * n + i] = (v[i] - phi <= out.tol_contact) ? 1 : 0;
            if (i == 0 || i + 1 == n) continue;
            // scheme residual of the complementarity system at this node
            const double pde = -(v_next[i] - v[i]) / dt -
                               (d.local_apply(v, i) + jexp[i]) +
                               spec.discount_c(t, x[i]) * v[i] -
                               spec.running_f(t, x[i]);
            const double res = std::min(pde, v[i] - phi);
            out.residuals[m * n + i] = res;
            max_res = std::max(max_res, res > 0.0 ? res : 0.0);
        }
        std::copy(v.begin(), v.end(), out.values.begin() + m * n);
        v_next = v;
    }

    out.meta.iterations = static_cast<int>(nt);
    out.meta.tol = options.tol;
    out.meta.scheme = "imex-projected";
    out.meta.max_residual = max_res;
    out.meta.jump_mass = d.explicit_mass;
    out.meta.dt = dt;
    return out;
}

FreeBoundary free_boundary(const ValueGrid& grid, const ObstacleProblemSpec& spec) {
    FreeBoundary fb;
    const std::size_t n = grid.nx();
    bool any_contact = false;
    for (std::size_t m = 0; m < grid.nt(); ++m) {
        FreeBoundary::Slice slice;
        slice.t = grid.t_mesh[m];
        // interior transitions only: the two edge nodes are pinned by the
        // Dirichlet closure, not by the exercise decision
        for (std::size_t i = 1; i + 2 < n; ++i) {
            const bool c0 = grid.in_contact(m, i);
            const bool c1 = grid.in_contact(m, i + 1);
            any_contact = any_contact || c0 || c1;
            if (c0 == c1) continue;
            const double t = grid.t_mesh[m];
            const double d0 =
                grid.at(m, i) - spec.obstacle(t, grid.x_grid[i]);
            const double d1 =
                grid.at(m, i + 1) - spec.obstacle(t, grid.x_grid[i + 1]);
            const double h = grid.x_grid[i + 1] - grid.x_grid[i];
            double frac = 0.5;
            if (d1 != d0)
                frac = std::clamp((grid.tol_contact - d0) / (d1 - d0), 0.0, 1.0);
            slice.x_star.push_back(grid.x_grid[i] + frac * h);
        }
        // a contact set covering the whole line has its edges at the domain ends
        if (slice.x_star.empty() && grid.in_contact(m, 0) && grid.in_contact(m, n - 1)) {
            slice.x_star.push_back(grid.x_grid.front());
            slice.x_star.push_back(grid.x_grid.back());
        }
        fb.slices.push_back(std::move(slice));
    }
    fb.empty_contact = !any_contact;
    return fb;
}

OrderingCheck check_ordering(const ValueGrid& lo, const ValueGrid& hi, double tol,
                             const std::string& label) {
    OrderingCheck oc;
    oc.label = label;
    double worst = 0.0;
    for (std::size_t k = 0; k < lo.values.size(); ++k)
        worst = std::max(worst, lo.values[k] - hi.values[k]);
    oc.max_violation = worst;
    oc.pass = worst <= tol;
    return oc;
}

std::vector<OrderingCheck> monotonicity_suite(const std::vector<MonotonePair>& pairs,
                                              const OperatorSpec& op,
                                              std::size_t n_nodes,
                                              const StationaryOptions& st_options,
                                              const EvolutionOptions& ev_options) {
    std::vector<OrderingCheck> rows;
    for (const auto& pr : pairs) {
        ValueGrid lo, hi;
        if (pr.lo.kind == ProblemKind::Stationary) {
            lo = solve_stationary_grid(pr.lo, op, n_nodes, st_options);
            hi = solve_stationary_grid(pr.hi, op, n_nodes, st_options);
            rows.push_back(check_ordering(lo, hi, st_options.tol * 10.0, pr.label));
        } else {
            lo = solve_evolution_grid(pr.lo, op, n_nodes, ev_options);
            hi = solve_evolution_grid(pr.hi, op, n_nodes, ev_options);
            rows.push_back(check_ordering(lo, hi, 1e-8, pr.label));
        }
    }
    return rows;
}

}  // namespace levyob
