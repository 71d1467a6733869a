#include <algorithm>
#include <cmath>

#include "levyob/obstacle_solver.hpp"

namespace levyob {

namespace {

// Polynomial features in (x, phi(x)) with total degree <= degree.
struct Basis {
    int degree;
    double x_shift = 0.0, x_scale = 1.0, p_scale = 1.0;

    std::size_t size() const {
        return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
    }
    void fill(double x, double phi, double* out) const {
        const double xs = (x - x_shift) / x_scale;
        const double ps = phi / p_scale;
        std::size_t k = 0;
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b)
                out[k++] = std::pow(xs, a) * std::pow(ps, b);
    }
};

// Ridge-regularized normal equations, solved by Cholesky. Deterministic.
class Regression {
public:
    explicit Regression(std::size_t n_features)
        : nf_(n_features), gram_(n_features * n_features, 0.0), rhs_(n_features, 0.0) {}

    void add(const double* feat, double target) {
        for (std::size_t i = 0; i < nf_; ++i) {
            rhs_[i] += feat[i] * target;
            for (std::size_t j = i; j < nf_; ++j) gram_[i * nf_ + j] += feat[i] * feat[j];
        }
        ++count_;
    }

    std::vector<double> solve() {
        std::vector<double> A = gram_;
        double trace = 0.0;
        for (std::size_t i = 0; i < nf_; ++i) trace += A[i * nf_ + i];
        const double ridge = 1e-10 * std::max(trace / static_cast<double>(nf_), 1.0);
        for (std::size_t i = 0; i < nf_; ++i) {
            A[i * nf_ + i] += ridge;
            for (std::size_t j = 0; j < i; ++j) A[i * nf_ + j] = A[j * nf_ + i];
        }
        // Cholesky
        for (std::size_t i = 0; i < nf_; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = A[i * nf_ + j];
                for (std::size_t k = 0; k < j; ++k) s -= A[i * nf_ + k] * A[j * nf_ + k];
                if (i == j)
                    A[i * nf_ + i] = std::sqrt(std::max(s, 1e-300));
                else
                    A[i * nf_ + j] = s / A[j * nf_ + j];
            }
        }
        std::vector<double> y = rhs_;
        for (std::size_t i = 0; i < nf_; ++i) {
            for (std::size_t k = 0; k < i; ++k) y[i] -= A[i * nf_ + k] * y[k];
            y[i] /= A[i * nf_ + i];
        }
        for (std::size_t i = nf_; i-- > 0;) {
            for (std::size_t k = i + 1; k < nf_; ++k) y[i] -= A[k * nf_ + i] * y[k];
            y[i] /= A[i * nf_ + i];
        }
        return y;
    }

    std::size_t count() const { return count_; }

private:
    std::size_t nf_;
    std::vector<double> gram_, rhs_;
    std::size_t count_ = 0;
};

struct LsmcProblem {
    // payoff data as functions of (absolute time, state)
    std::function<double(double, double)> phi, f, c;
    std::function<double(double)> g;  // value collected at the final date
    double t0 = 0.0;                  // absolute start time
    double T_eff = 0.0;               // stopping window length
};

struct LsmcEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Per-date exercise rule in standardized coordinates.
struct DatePolicy {
    bool active = false;  // false: never exercise at this date
    Basis basis;
    std::vector<double> beta;
};

// Backward-induction pass. When `learn` is set the regression is fitted on
// this batch and stored into `policy`; otherwise the stored rule decides.
// Returns the realized discounted value per path at date 0.
std::vector<double> lsmc_pass(const LsmcProblem& prob, const PathBatch& batch,
                              std::size_t n_steps, double dt, int basis_degree,
                              std::vector<DatePolicy>& policy, bool learn) {
    const std::size_t n_paths = batch.n_paths;
    Basis proto{basis_degree};
    const std::size_t nf = proto.size();
    std::vector<double> fv(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p)
        fv[p] = prob.g(batch.at(p, n_steps));

    std::vector<double> feat(nf);
    std::vector<std::uint8_t> in_subset(n_paths);
    for (std::size_t k = n_steps; k-- > 1;) {
        const double t_abs = prob.t0 + batch.times[k];
        std::vector<double> target(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) {
            const double x = batch.at(p, k);
            const double disc = std::exp(-prob.c(t_abs, x) * dt);
            target[p] = prob.f(t_abs, x) * dt + disc * fv[p];
        }
        DatePolicy& rule = policy[k];
        if (learn) {
            // regress on in-the-money paths when enough of them exist;
            // otherwise leave the date inactive (continue always)
            std::size_t n_itm = 0;
            double x_mean = 0.0, x_sq = 0.0, p_max = 0.0;
            for (std::size_t p = 0; p < n_paths; ++p) {
                const double x = batch.at(p, k);
                const double phi = prob.phi(t_abs, x);
                in_subset[p] = phi > 1e-12 ? 1 : 0;
                if (in_subset[p]) {
                    ++n_itm;
                    x_mean += x;
                    x_sq += x * x;
                    p_max = std::max(p_max, std::abs(phi));
                }
            }
            bool all_paths = false;
            if (n_itm < std::max<std::size_t>(64, 8 * nf)) {
                // obstacles without a positive part regress on all paths
                n_itm = 0;
                x_mean = x_sq = p_max = 0.0;
                for (std::size_t p = 0; p < n_paths; ++p) {
                    const double x = batch.at(p, k);
                    const double phi = prob.phi(t_abs, x);
                    if (phi > 1e-12) {
                        all_paths = false;
                        break;
                    }
                    all_paths = true;
                    in_subset[p] = 1;
                    ++n_itm;
                    x_mean += x;
                    x_sq += x * x;
                    p_max = std::max(p_max, std::abs(phi));
                }
            }
            if (n_itm < std::max<std::size_t>(64, 8 * nf) && !all_paths) {
                rule.active = false;
                for (std::size_t p = 0; p < n_paths; ++p) fv[p] = target[p];
                continue;
            }
            rule.active = true;
            rule.basis = proto;
            rule.basis.x_shift = x_mean / static_cast<double>(n_itm);
            rule.basis.x_scale = std::max(
                std::sqrt(std::max(x_sq / static_cast<double>(n_itm) -
                                       rule.basis.x_shift * rule.basis.x_shift,
                                   0.0)),
                1e-8);
            rule.basis.p_scale = std::max(p_max, 1e-12);
            Regression reg(nf);
            for (std::size_t p = 0; p < n_paths; ++p) {
                if (!in_subset[p]) continue;
                const double x = batch.at(p, k);
                rule.basis.fill(x, prob.phi(t_abs, x), feat.data());
                reg.add(feat.data(), target[p]);
            }
            rule.beta = reg.solve();
        }
        if (!rule.active) {
            for (std::size_t p = 0; p < n_paths; ++p) fv[p] = target[p];
            continue;
        }
        for (std::size_t p = 0; p < n_paths; ++p) {
            const double x = batch.at(p, k);
            const double phi = prob.phi(t_abs, x);
            if (phi <= 1e-12 && rule.basis.p_scale > 1e-11) {
                fv[p] = target[p];  // out of the money: never exercise
                continue;
            }
            rule.basis.fill(x, phi, feat.data());
            double cont = 0.0;
            for (std::size_t j = 0; j < nf; ++j) cont += rule.beta[j] * feat[j];
            fv[p] = (phi >= cont) ? phi : target[p];
        }
    }

    std::vector<double> values(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        const double x = batch.at(p, 0);
        const double disc = std::exp(-prob.c(prob.t0, x) * dt);
        values[p] = prob.f(prob.t0, x) * dt + disc * fv[p];
    }
    return values;
}

LsmcEstimate run_lsmc(const LsmcProblem& prob, const ProcessSpec& process, double x0,
                      std::size_t n_paths, std::size_t n_steps, int basis_degree,
                      double eps_trunc, std::uint64_t seed, int threads,
                      double pilot_x0 = std::numeric_limits<double>::quiet_NaN()) {
    const double dt = prob.T_eff / static_cast<double>(n_steps);
    std::vector<double> mesh(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) mesh[k] = dt * static_cast<double>(k);

    // Two-pass estimator: the stopping rule is learned on a pilot batch and
    // valued on an independent batch, so the estimate carries no in-sample
    // foresight and stays a genuine policy lower bound.
    const double px0 = std::isnan(pilot_x0) ? x0 : pilot_x0;
    const PathBatch pilot = simulate_paths(process, px0, prob.T_eff, mesh, eps_trunc,
                                           n_paths, seed ^ 0x5DEECE66DULL, threads);
    std::vector<DatePolicy> policy(n_steps + 1);
    (void)lsmc_pass(prob, pilot, n_steps, dt, basis_degree, policy, true);

    const PathBatch batch =
        simulate_paths(process, x0, prob.T_eff, mesh, eps_trunc, n_paths, seed, threads);
    const std::vector<double> values =
        lsmc_pass(prob, batch, n_steps, dt, basis_degree, policy, false);

    double mean = 0.0;
    for (double vp : values) mean += vp;
    mean /= static_cast<double>(n_paths);
    double ss = 0.0;
    for (double vp : values) ss += (vp - mean) * (vp - mean);
    const double se =
        std::sqrt(ss / (static_cast<double>(n_paths) - 1.0) / static_cast<double>(n_paths));
    const double phi0 = prob.phi(prob.t0, x0);
    LsmcEstimate est;
    est.value = std::max(phi0, mean);
    est.std_error = se;
    return est;
}

double sup_abs_on_domain(const std::function<double(double, double)>& fn, double t,
                         double x_min, double x_max) {
    double m = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double x = x_min + (x_max - x_min) * i / 64.0;
        m = std::max(m, std::abs(fn(t, x)));
    }
    return m;
}

double auto_horizon(const ObstacleProblemSpec& spec, const McOptions& options) {
    const double c0 = spec.c_lower_bound;
    const double phi_sup =
        sup_abs_on_domain(spec.obstacle, 0.0, spec.x_min - 2.0, spec.x_max + 2.0);
    const double f_sup =
        sup_abs_on_domain(spec.running_f, 0.0, spec.x_min - 2.0, spec.x_max + 2.0);
    const double scale = phi_sup + f_sup / c0;
    double horizon = options.horizon_proxy;
    if (horizon <= 0.0) {
        horizon =
            std::log(std::max(scale, 1e-8) / (0.1 * options.target_tolerance)) / c0;
        horizon = std::clamp(horizon, 20.0, 500.0);
    }
    return horizon;
}

LsmcProblem problem_of_spec(const ObstacleProblemSpec& spec, double t0,
                            double horizon) {
    LsmcProblem prob;
    prob.phi = spec.obstacle;
    prob.f = spec.running_f;
    prob.c = spec.discount_c;
    if (spec.kind == ProblemKind::Stationary) {
        prob.g = [obstacle = spec.obstacle](double x) { return obstacle(0.0, x); };
        prob.t0 = 0.0;
        prob.T_eff = horizon;
    } else {
        prob.g = spec.terminal_g;
        prob.t0 = t0;
        prob.T_eff = spec.horizon_T - t0;
    }
    return prob;
}

}  // namespace

StoppingPolicy learn_stopping_policy(const ObstacleProblemSpec& spec,
                                     const ProcessSpec& process, double pilot_x0,
                                     const McOptions& options) {
    spec.validate();
    const double horizon = spec.kind == ProblemKind::Stationary
                               ? auto_horizon(spec, options)
                               : spec.horizon_T;
    const LsmcProblem prob = problem_of_spec(spec, 0.0, horizon);
    const std::size_t n_steps = options.n_steps;
    const double dt = prob.T_eff / static_cast<double>(n_steps);
    std::vector<double> mesh(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) mesh[k] = dt * static_cast<double>(k);
    const PathBatch pilot =
        simulate_paths(process, pilot_x0, prob.T_eff, mesh, options.eps_trunc,
                       options.n_paths, options.seed ^ 0x5DEECE66DULL,
                       options.threads);
    auto rules = std::make_shared<std::vector<DatePolicy>>(n_steps + 1);
    (void)lsmc_pass(prob, pilot, n_steps, dt, options.basis_degree, *rules, true);

    StoppingPolicy policy;
    policy.basis_degree = options.basis_degree;
    policy.n_dates = n_steps;
    policy.dt = dt;
    auto phi = prob.phi;
    const double t0 = prob.t0;
    policy.continuation_at = [rules, phi, t0, dt](std::size_t k, double x) {
        if (k >= rules->size() || !(*rules)[k].active)
            return std::numeric_limits<double>::infinity();
        const DatePolicy& rule = (*rules)[k];
        std::vector<double> feat(rule.basis.size());
        rule.basis.fill(x, phi(t0 + dt * static_cast<double>(k), x), feat.data());
        double cont = 0.0;
        for (std::size_t j = 0; j < feat.size(); ++j) cont += rule.beta[j] * feat[j];
        return cont;
    };
    policy.exercise_at = [rules, phi, t0, dt,
                          cont = policy.continuation_at](std::size_t k, double x) {
        if (k >= rules->size() || !(*rules)[k].active) return false;
        const double p = phi(t0 + dt * static_cast<double>(k), x);
        if (p <= 1e-12 && (*rules)[k].basis.p_scale > 1e-11) return false;
        return p >= cont(k, x);
    };
    return policy;
}

McValue solve_stationary_mc(const ObstacleProblemSpec& spec, const ProcessSpec& process,
                            double x_eval, const McOptions& options) {
    spec.validate();
    if (spec.kind != ProblemKind::Stationary)
        throw ConfigError("solve_stationary_mc needs a stationary spec");
    const double c0 = spec.c_lower_bound;
    const double phi_sup =
        sup_abs_on_domain(spec.obstacle, 0.0, spec.x_min - 2.0, spec.x_max + 2.0);
    const double f_sup =
        sup_abs_on_domain(spec.running_f, 0.0, spec.x_min - 2.0, spec.x_max + 2.0);
    const double scale = phi_sup + f_sup / c0;
    const double horizon = auto_horizon(spec, options);
    const LsmcProblem prob = problem_of_spec(spec, 0.0, horizon);

    const LsmcEstimate est =
        run_lsmc(prob, process, x_eval, options.n_paths, options.n_steps,
                 options.basis_degree, options.eps_trunc, options.seed,
                 options.threads, options.pilot_x0);

    McValue out;
    out.value = est.value;
    out.std_error = est.std_error;
    out.bias_horizon = std::exp(-c0 * horizon) * scale;
    out.horizon_used = horizon;
    out.n_paths = options.n_paths;
    if (options.estimate_bermudan_bias && options.n_steps >= 16) {
        McOptions half = options;
        half.estimate_bermudan_bias = false;
        half.n_steps = options.n_steps / 2;
        half.horizon_proxy = horizon;
        const McValue coarse = solve_stationary_mc(spec, process, x_eval, half);
        out.bias_bermudan = std::abs(out.value - coarse.value);
    }
    return out;
}

McValue solve_evolution_mc(const ObstacleProblemSpec& spec, const ProcessSpec& process,
                           double t, double x, const McOptions& options) {
    spec.validate();
    if (spec.kind != ProblemKind::Evolution)
        throw ConfigError("solve_evolution_mc needs an evolution spec");
    if (t < 0.0 || t > spec.horizon_T)
        throw ConfigError("evaluation time outside [0, T]");

    McValue out;
    out.n_paths = options.n_paths;
    if (t == spec.horizon_T) {
        out.value = spec.terminal_g(x);  // no simulation at expiry
        return out;
    }

    const LsmcProblem prob = problem_of_spec(spec, t, 0.0);

    const LsmcEstimate est =
        run_lsmc(prob, process, x, options.n_paths, options.n_steps,
                 options.basis_degree, options.eps_trunc, options.seed,
                 options.threads, options.pilot_x0);
    out.value = est.value;
    out.std_error = est.std_error;
    if (options.estimate_bermudan_bias && options.n_steps >= 16) {
        McOptions half = options;
        half.estimate_bermudan_bias = false;
        half.n_steps = options.n_steps / 2;
        const McValue coarse = solve_evolution_mc(spec, process, t, x, half);
        out.bias_bermudan = std::abs(out.value - coarse.value);
    }
    return out;
}

DppResult dpp_check(const ObstacleProblemSpec& spec, const ProcessSpec& process,
                    const ValueGrid& grid, double x, double r_ball,
                    std::size_t n_paths, std::uint64_t seed,
                    double grid_error_estimate) {
    spec.validate();
    if (spec.kind != ProblemKind::Stationary)
        throw ConfigError("dpp_check is defined for the stationary problem");
    const SampledFunction v_hat = slice_function(grid, spec, 0);
    const double c0 = spec.c_lower_bound;
    const double phi_sup =
        sup_abs_on_domain(spec.obstacle, 0.0, spec.x_min - 2.0, spec.x_max + 2.0);
    const double horizon = std::clamp(std::log(std::max(phi_sup, 1e-8) / 1e-5) / c0,
                                      20.0, 600.0);

    if (!process.state_independent)
        throw ConfigError("dpp_check expects the Levy (state-independent) case");
    const double eps = 1e-3;
    MarkSampler sampler(process.measure, eps);
    const double comp = tail_mean(process.measure, eps);
    const double b_eff = process.constant_drift - comp;
    const double dt =
        std::min(0.02, r_ball / (8.0 * (std::abs(b_eff) + 1e-9) + 1e-9));

    std::vector<double> payoffs(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        StreamRng rng(seed, p);
        const auto events = sample_jumps(sampler, horizon, rng);
        double state = x;
        double log_disc = 0.0;
        double acc_f = 0.0;
        double t_now = 0.0;
        std::size_t e = 0;
        double payoff = 0.0;
        bool stopped = false;
        while (t_now < horizon && !stopped) {
            // contact (exercise) has priority; ties belong to the contact set
            if (v_hat(state) - spec.obstacle(0.0, state) <= grid.tol_contact) {
                payoff = std::exp(log_disc) * spec.obstacle(0.0, state) + acc_f;
                stopped = true;
                break;
            }
            if (std::abs(state - x) >= r_ball) {
                payoff = std::exp(log_disc) * v_hat(state) + acc_f;
                stopped = true;
                break;
            }
            const double t_next = std::min(t_now + dt, horizon);
            double t_seg = t_now;
            while (e < events.size() && events[e].time <= t_next) {
                state += b_eff * (events[e].time - t_seg);
                state += events[e].mark;
                t_seg = events[e].time;
                ++e;
            }
            state += b_eff * (t_next - t_seg);
            const double c_here = spec.discount_c(0.0, state);
            acc_f += std::exp(log_disc) * spec.running_f(0.0, state) * dt;
            log_disc -= c_here * (t_next - t_now);
            t_now = t_next;
        }
        if (!stopped) payoff = std::exp(log_disc) * spec.obstacle(0.0, state) + acc_f;
        payoffs[p] = payoff;
    }

    double mean = 0.0;
    for (double v : payoffs) mean += v;
    mean /= static_cast<double>(n_paths);
    double ss = 0.0;
    for (double v : payoffs) ss += (v - mean) * (v - mean);
    const double se =
        std::sqrt(ss / (static_cast<double>(n_paths) - 1.0) / static_cast<double>(n_paths));

    DppResult res;
    res.recomputed = mean;
    res.grid_value = v_hat(x);
    res.discrepancy = std::abs(res.recomputed - res.grid_value);
    res.mc_stderr = se;
    // step bias: drift travel and discounting error over one monitoring step,
    // plus the far-horizon truncation
    double lip_v = 0.0;
    for (std::size_t i = 0; i + 1 < grid.nx(); ++i)
        lip_v = std::max(lip_v, std::abs(grid.at(0, i + 1) - grid.at(0, i)) /
                                    (grid.x_grid[i + 1] - grid.x_grid[i]));
    const double c_max = spec.discount_c(0.0, x) + c0;
    const double step_bias =
        dt * (std::abs(b_eff) * lip_v + c_max * phi_sup) + std::exp(-c0 * horizon) * phi_sup;
    res.error_budget = 3.0 * se + grid_error_estimate + step_bias;
    return res;
}

}  // namespace levyob
