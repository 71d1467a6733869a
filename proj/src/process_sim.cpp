#include "levyob/process_sim.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "levyob/quadrature.hpp"

namespace levyob {

namespace {

constexpr std::size_t kTableNodes = 4096;  // per side

void parallel_paths(std::size_t n_paths, int threads,
                    const std::function<void(std::size_t)>& body) {
    const int n_workers = std::max(1, threads);
    if (n_workers == 1 || n_paths < 64) {
        for (std::size_t p = 0; p < n_paths; ++p) body(p);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t p = static_cast<std::size_t>(w); p < n_paths;
                 p += static_cast<std::size_t>(n_workers))
                body(p);
        });
    }
    for (auto& t : pool) t.join();
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stderr_of(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0) /
                     static_cast<double>(xs.size()));
}

}  // namespace

ProcessSpec ProcessSpec::levy(const LevyModel& model) {
    ProcessSpec s;
    s.measure = model.measure();
    const double b = model.drift();
    s.constant_drift = b;
    s.drift_b = [b](double) { return b; };
    s.jump_map = [](double, double y) { return y; };
    s.state_independent = true;
    s.lipschitz_b = 0.0;
    s.K_bound = std::max(1.0, model.jump_variance());
    return s;
}

ProcessSpec ProcessSpec::with_drift_field(const LevyMeasureSpec& measure,
                                          std::function<double(double)> b,
                                          double lipschitz_b) {
    ProcessSpec s;
    s.measure = measure;
    s.drift_b = std::move(b);
    s.jump_map = [](double, double y) { return y; };
    s.state_independent = false;
    s.lipschitz_b = lipschitz_b;
    return s;
}

void ProcessSpec::validate() const {
    if (!drift_b) throw ConfigError("process spec: drift_b is required");
    if (!jump_map) throw ConfigError("process spec: jump_map is required");
    const double xs[] = {-8.0, -3.0, -1.0, -0.2, 0.0, 0.2, 1.0, 3.0, 8.0};
    for (double a : xs) {
        if (!std::isfinite(drift_b(a)))
            throw ConfigError("drift_b is not finite at x = " + std::to_string(a));
        for (double b : xs) {
            if (a == b) continue;
            const double slope = std::abs(drift_b(a) - drift_b(b)) / std::abs(a - b);
            if (slope > lipschitz_b + 1e-9 && !state_independent)
                throw ConfigError("drift_b exceeds the declared Lipschitz seminorm");
        }
        // F must vanish with the mark (uniqueness hypothesis)
        if (std::abs(jump_map(a, 1e-12)) > 1e-6)
            throw ConfigError("jump_map F(x, y) must vanish as y -> 0");
    }
}

MarkSampler::MarkSampler(const LevyMeasureSpec& measure, double eps_trunc)
    : discrete_(measure.is_discrete()) {
    if (!(eps_trunc > 0.0))
        throw TruncationError("eps_trunc must be strictly positive");
    if (discrete_) {
        double cum = 0.0;
        for (const auto& pm : measure.point_masses) {
            if (std::abs(pm.location) <= eps_trunc) continue;
            cum += pm.intensity;
            cum_intensity_.push_back(cum);
            locations_.push_back(pm.location);
            if (pm.location > 0.0)
                rate_pos_ += pm.intensity;
            else
                rate_neg_ += pm.intensity;
        }
        return;
    }
    pos_ = build_side(measure, +1, eps_trunc);
    neg_ = build_side(measure, -1, eps_trunc);
    rate_pos_ = pos_.rate;
    rate_neg_ = neg_.rate;
}

MarkSampler::SideTable MarkSampler::build_side(const LevyMeasureSpec& measure,
                                               int side, double eps) const {
    SideTable t;
    const double hi = tail_cutoff(measure, side);
    if (hi <= eps) return t;
    const double lo = eps;
    t.log_x.resize(kTableNodes);
    std::vector<double> tail(kTableNodes, 0.0);
    for (std::size_t k = 0; k < kTableNodes; ++k)
        t.log_x[k] = std::log(lo) + (std::log(hi) - std::log(lo)) *
                                        static_cast<double>(k) /
                                        static_cast<double>(kTableNodes - 1);
    auto dens = [&](double x) { return measure.density(side > 0 ? x : -x); };
    // accumulate from the tail inward so the table is exactly monotone
    for (std::size_t k = kTableNodes - 1; k-- > 0;) {
        const double a = std::exp(t.log_x[k]);
        const double b = std::exp(t.log_x[k + 1]);
        const auto seg = gk15_panel<double>(
            [&](double u) { return dens(std::exp(u)) * std::exp(u); }, std::log(a),
            std::log(b));
        tail[k] = tail[k + 1] + std::max(seg.first, 0.0);
    }
    t.rate = tail[0];
    t.log_tail.resize(kTableNodes);
    for (std::size_t k = 0; k < kTableNodes; ++k)
        t.log_tail[k] = std::log(std::max(tail[k], 1e-300));
    return t;
}

double MarkSampler::invert_side(const SideTable& t, double u) const {
    // u in (0, 1): target tail integral u * rate; log_tail is decreasing.
    const double target = std::log(std::max(u * t.rate, 1e-300));
    std::size_t lo = 0, hi = t.log_tail.size() - 1;
    if (target >= t.log_tail[0]) return std::exp(t.log_x[0]);
    if (target <= t.log_tail[hi]) return std::exp(t.log_x[hi]);
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (t.log_tail[mid] >= target)
            lo = mid;
        else
            hi = mid;
    }
    const double w = (t.log_tail[lo] - target) /
                     (t.log_tail[lo] - t.log_tail[hi]);
    return std::exp(t.log_x[lo] + w * (t.log_x[hi] - t.log_x[lo]));
}

double MarkSampler::sample(StreamRng& rng) const {
    const double u = rng.uniform01();
    if (discrete_) {
        const double target = u * cum_intensity_.back();
        const auto it =
            std::lower_bound(cum_intensity_.begin(), cum_intensity_.end(), target);
        return locations_[static_cast<std::size_t>(it - cum_intensity_.begin())];
    }
    const double total = rate_pos_ + rate_neg_;
    if (u * total < rate_pos_) {
        return invert_side(pos_, rng.uniform01());
    }
    return -invert_side(neg_, rng.uniform01());
}

double MarkSampler::tabulated_tail(int side, double x) const {
    const SideTable& t = side > 0 ? pos_ : neg_;
    if (t.log_x.empty()) return 0.0;
    const double lx = std::log(x);
    if (lx <= t.log_x.front()) return t.rate;
    if (lx >= t.log_x.back()) return 0.0;
    const auto it = std::lower_bound(t.log_x.begin(), t.log_x.end(), lx);
    const std::size_t hi = static_cast<std::size_t>(it - t.log_x.begin());
    const std::size_t lo = hi - 1;
    const double w = (lx - t.log_x[lo]) / (t.log_x[hi] - t.log_x[lo]);
    return std::exp(t.log_tail[lo] + w * (t.log_tail[hi] - t.log_tail[lo]));
}

std::vector<JumpEvent> sample_jumps(const MarkSampler& sampler, double T,
                                    StreamRng& rng) {
    std::vector<JumpEvent> events;
    const double rate = sampler.total_rate();
    if (rate <= 0.0) return events;
    double t = rng.exponential(rate);
    while (t < T) {
        events.push_back({t, 0.0});
        t += rng.exponential(rate);
    }
    for (auto& e : events) e.mark = sampler.sample(rng);
    return events;
}

namespace {

// Drift integration between jumps: classical RK4 with step doubling until
// the per-interval defect is below tol * dt.
double integrate_drift(const std::function<double(double)>& g, double x, double dt,
                       double tol = 1e-8) {
    if (dt <= 0.0) return x;
    auto rk4 = [&](int n) {
        double y = x;
        const double h = dt / n;
        for (int i = 0; i < n; ++i) {
            const double k1 = g(y);
            const double k2 = g(y + 0.5 * h * k1);
            const double k3 = g(y + 0.5 * h * k2);
            const double k4 = g(y + h * k3);
            y += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        }
        return y;
    };
    double coarse = rk4(1);
    for (int n = 2; n <= (1 << 12); n *= 2) {
        const double fine = rk4(n);
        if (std::abs(fine - coarse) <= tol * dt) return fine;
        coarse = fine;
    }
    return coarse;
}

struct CompensatedDrift {
    // effective drift g(x) = b(x) - integral_{|y|>eps} F(x, y) nu(dy)
    std::function<double(double)> g;
    double sigma2_eps = 0.0;
};

CompensatedDrift make_compensated_drift(const ProcessSpec& spec, double eps) {
    CompensatedDrift out;
    out.sigma2_eps = small_jump_variance(spec.measure, eps);
    if (spec.state_independent) {
        const double comp = tail_mean(spec.measure, eps);
        const double b = spec.constant_drift;
        out.g = [b, comp](double) { return b - comp; };
        return out;
    }
    // State-dependent F: per-state quadrature of the retained-jump
    // compensator. Slow path, meant for small diagnostic runs.
    const LevyMeasureSpec measure = spec.measure;
    auto F = spec.jump_map;
    auto b = spec.drift_b;
    if (measure.is_discrete()) {
        out.g = [measure, F, b, eps](double x) {
            double comp = 0.0;
            for (const auto& pm : measure.point_masses)
                if (std::abs(pm.location) > eps)
                    comp += pm.intensity * F(x, pm.location);
            return b(x) - comp;
        };
        return out;
    }
    const double hi_p = tail_cutoff(measure, +1);
    const double hi_n = tail_cutoff(measure, -1);
    out.g = [measure, F, b, eps, hi_p, hi_n](double x) {
        double comp = 0.0;
        if (hi_p > eps)
            comp += integrate_gk_log<double>(
                        [&](double y) { return F(x, y) * measure.density(y); }, eps,
                        hi_p, 1e-11, 1e-9)
                        .value;
        if (hi_n > eps)
            comp += integrate_gk_log<double>(
                        [&](double y) { return F(x, -y) * measure.density(-y); }, eps,
                        hi_n, 1e-11, 1e-9)
                        .value;
        return b(x) - comp;
    };
    return out;
}

// Walks one path: records the state at each mesh time. For state-independent
// specs the increments are accumulated separately from x0 so translated
// initial conditions share bit-identical increments.
void walk_path(const ProcessSpec& spec, const CompensatedDrift& drift, double x0,
               const std::vector<double>& mesh, const std::vector<JumpEvent>& events,
               double* out) {
    const std::size_t m = mesh.size();
    if (spec.state_independent) {
        const double g = drift.g(0.0);
        double incr = 0.0;
        double t_prev = mesh.front();
        std::size_t e = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const double t = mesh[j];
            while (e < events.size() && events[e].time <= t) {
                incr += g * (events[e].time - t_prev);
                incr += events[e].mark;  // F(y) = y
                t_prev = events[e].time;
                ++e;
            }
            incr += g * (t - t_prev);
            t_prev = t;
            out[j] = x0 + incr;
        }
        return;
    }
    double x = x0;
    double t_prev = mesh.front();
    std::size_t e = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const double t = mesh[j];
        while (e < events.size() && events[e].time <= t) {
            x = integrate_drift(drift.g, x, events[e].time - t_prev);
            x += spec.jump_map(x, events[e].mark);
            t_prev = events[e].time;
            ++e;
        }
        x = integrate_drift(drift.g, x, t - t_prev);
        t_prev = t;
        out[j] = x;
    }
}

}  // namespace

PathBatch simulate_paths(const ProcessSpec& spec, double x0, double T,
                         const std::vector<double>& mesh, double eps_trunc,
                         std::size_t n_paths, std::uint64_t seed, int threads) {
    if (mesh.size() < 2 || mesh.front() != 0.0 || std::abs(mesh.back() - T) > 1e-12)
        throw ConfigError("mesh must run from 0 to T");
    MarkSampler sampler(spec.measure, eps_trunc);
    const CompensatedDrift drift = make_compensated_drift(spec, eps_trunc);

    PathBatch batch;
    batch.times = mesh;
    batch.states.resize(n_paths * mesh.size());
    batch.seed = seed;
    batch.eps_trunc = eps_trunc;
    batch.sigma2_eps = drift.sigma2_eps;
    batch.n_paths = n_paths;
    batch.jump_counts.resize(n_paths);

    parallel_paths(n_paths, threads, [&](std::size_t p) {
        StreamRng rng(seed, p);
        const auto events = sample_jumps(sampler, T, rng);
        batch.jump_counts[p] = static_cast<std::uint32_t>(events.size());
        walk_path(spec, drift, x0, mesh, events, &batch.states[p * mesh.size()]);
    });
    return batch;
}

PathMomentReport path_moment_diagnostics(const ProcessSpec& spec, double x1,
                                         double x2,
                                         const std::vector<double>& t_grid,
                                         std::size_t n_paths, std::uint64_t seed) {
    if (t_grid.size() < 2 || t_grid.front() != 0.0)
        throw ConfigError("t_grid must start at 0");
    const double T = t_grid.back();
    MarkSampler sampler(spec.measure, 1e-4);
    const CompensatedDrift drift = make_compensated_drift(spec, 1e-4);

    const std::size_t m = t_grid.size();
    std::vector<double> sum_maxsq(m, 0.0), sumsq_maxsq(m, 0.0);
    std::vector<double> sum_window(m * m, 0.0);
    std::vector<double> xa(m), xb(m);
    for (std::size_t p = 0; p < n_paths; ++p) {
        StreamRng rng(seed, p);
        const auto events = sample_jumps(sampler, T, rng);
        walk_path(spec, drift, x1, t_grid, events, xa.data());
        if (spec.state_independent) {
            // shared increments: the gap is exactly x1 - x2 at all times
            for (std::size_t j = 0; j < m; ++j) xb[j] = xa[j] - (x1 - x2);
        } else {
            walk_path(spec, drift, x2, t_grid, events, xb.data());
        }
        double running = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = xa[j] - xb[j];
            running = std::max(running, d * d);
            sum_maxsq[j] += running;
            sumsq_maxsq[j] += running * running;
        }
        // window increments max_{r in [s,t]} |X(r) - X(s)|^2 for mesh pairs
        for (std::size_t s = 0; s + 1 < m; ++s) {
            double wmax = 0.0;
            for (std::size_t r = s + 1; r < m; ++r) {
                const double d = xa[r] - xa[s];
                wmax = std::max(wmax, d * d);
                sum_window[s * m + r] += wmax;
            }
        }
    }
    double increment_C = 0.0;
    for (std::size_t s = 0; s + 1 < m; ++s)
        for (std::size_t r = s + 1; r < m; ++r) {
            const double dt = t_grid[r] - t_grid[s];
            const double envelope = std::max(dt, dt * dt);
            increment_C = std::max(increment_C, sum_window[s * m + r] /
                                                    static_cast<double>(n_paths) /
                                                    envelope);
        }

    PathMomentReport rep;
    rep.t_grid = t_grid;
    rep.sq_diff_at_zero = (x1 - x2) * (x1 - x2);
    rep.mean_max_sq_diff.resize(m);
    rep.stderr_max_sq_diff.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double mean = sum_maxsq[j] / static_cast<double>(n_paths);
        rep.mean_max_sq_diff[j] = mean;
        const double var =
            std::max(0.0, sumsq_maxsq[j] / static_cast<double>(n_paths) - mean * mean);
        rep.stderr_max_sq_diff[j] = std::sqrt(var / static_cast<double>(n_paths));
    }

    // Log-linear fit of m(t) / |x1-x2|^2 against t over the positive mesh.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n_fit = 0;
    for (std::size_t j = 1; j < m; ++j) {
        if (rep.mean_max_sq_diff[j] <= 0.0 || rep.sq_diff_at_zero <= 0.0) continue;
        const double y = std::log(rep.mean_max_sq_diff[j] / rep.sq_diff_at_zero);
        sx += t_grid[j];
        sy += y;
        sxx += t_grid[j] * t_grid[j];
        sxy += t_grid[j] * y;
        ++n_fit;
    }
    if (n_fit >= 2) {
        const double n = static_cast<double>(n_fit);
        const double denom = n * sxx - sx * sx;
        rep.fit_rate = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
        rep.fit_amplitude = std::exp((sy - rep.fit_rate * sx) / n);
    } else {
        rep.fit_rate = 0.0;
        rep.fit_amplitude = 1.0;
    }
    rep.gronwall_C = std::max(rep.fit_amplitude, rep.fit_rate);
    rep.increment_C = increment_C;
    return rep;
}

MartingaleCheck martingale_check(const LevyModel& model, double rate, double T,
                                 std::size_t n_paths, double eps_trunc,
                                 std::uint64_t seed, int threads) {
    const ProcessSpec spec = ProcessSpec::levy(model);
    const std::vector<double> mesh = {0.0, T};
    const PathBatch batch =
        simulate_paths(spec, 0.0, T, mesh, eps_trunc, n_paths, seed, threads);
    std::vector<double> samples(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p)
        samples[p] = std::exp(-rate * T + batch.at(p, 1));
    MartingaleCheck out;
    out.mean = mean_of(samples);
    out.std_error = stderr_of(samples, out.mean);
    // Dropping jumps |y| <= eps removes delta = integral (e^y - 1 - y) nu(dy)
    // from the exponent: |E - 1| = |e^{-delta T} - 1| <= delta T e^{delta T}.
    const double delta = small_jump_exp_bias(model.measure(), eps_trunc);
    out.bias_bound = delta * T * std::exp(delta * T);
    return out;
}

}  // namespace levyob
