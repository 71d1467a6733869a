#include "levyob/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace levyob {

namespace {

// Lattice distances: every step up to 8, then geometric, capped at half the
// interior span.
std::vector<std::size_t> lattice_distances(std::size_t n_interior) {
    std::vector<std::size_t> ds;
    const std::size_t d_max = std::max<std::size_t>(2, n_interior / 2);
    for (std::size_t d = 1; d <= d_max;) {
        ds.push_back(d);
        d = d <= 8 ? d + 1 : static_cast<std::size_t>(std::ceil(d * 1.25));
    }
    return ds;
}

std::vector<ModulusPoint> modulus_of_series(
    const std::vector<const double*>& rows, std::size_t len, std::size_t stride,
    double spacing) {
    const std::size_t margin = std::max<std::size_t>(2, len / 10);
    if (len < 2 * margin + 8) throw ConfigError("series too short for moduli");
    const std::size_t lo = margin, hi = len - margin;  // [lo, hi)
    const auto ds = lattice_distances(hi - lo);
    std::vector<ModulusPoint> out;
    out.reserve(ds.size());
    for (std::size_t d : ds) {
        double w = 0.0;
        for (const double* row : rows)
            for (std::size_t i = lo; i + d < hi; ++i)
                w = std::max(w, std::abs(row[(i + d) * stride] - row[i * stride]));
        out.push_back({spacing * static_cast<double>(d), w});
    }
    return out;
}

}  // namespace

std::vector<ModulusPoint> estimate_modulus(const std::vector<double>& values,
                                           double spacing) {
    if (values.size() < 64) throw ConfigError("need at least 64 nodes");
    return modulus_of_series({values.data()}, values.size(), 1, spacing);
}

std::vector<ModulusPoint> estimate_modulus(const ValueGrid& grid, Direction dir) {
    const std::size_t nx = grid.nx(), nt = grid.nt();
    if (dir == Direction::Space) {
        if (nx < 64) throw ConfigError("need at least 64 nodes");
        std::vector<const double*> rows;
        // interior time slices only (all slices when stationary)
        const std::size_t t_margin = nt >= 8 ? std::max<std::size_t>(1, nt / 10) : 0;
        for (std::size_t m = t_margin; m + t_margin < nt; ++m)
            rows.push_back(&grid.values[m * nx]);
        const double h = grid.x_grid[1] - grid.x_grid[0];
        return modulus_of_series(rows, nx, 1, h);
    }
    if (nt < 64) throw ConfigError("need at least 64 time slices");
    std::vector<const double*> cols;
    const std::size_t x_margin = std::max<std::size_t>(2, nx / 10);
    for (std::size_t i = x_margin; i + x_margin < nx; ++i)
        cols.push_back(&grid.values[i]);
    const double dt = grid.t_mesh[1] - grid.t_mesh[0];
    return modulus_of_series(cols, nt, nx, dt);
}

ExponentFit fit_exponent(const std::vector<ModulusPoint>& moduli) {
    std::vector<std::pair<double, double>> pts;
    bool any_above_floor = false;
    for (const auto& m : moduli) {
        if (m.omega > 1e-14) any_above_floor = true;
        if (m.omega > 0.0) pts.emplace_back(std::log(m.h), std::log(m.omega));
    }
    if (!any_above_floor)
        throw DegenerateFit("all moduli below the noise floor");
    if (pts.size() < 6) throw ConfigError("need at least 6 usable (h, omega) pairs");
    const double n = static_cast<double>(pts.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    ExponentFit fit;
    const double denom = n * sxx - sx * sx;
    fit.alpha = (n * sxy - sx * sy) / denom;
    fit.constant = std::exp((sy - fit.alpha * sx) / n);
    double ss_res = 0.0, ss_tot = 0.0;
    const double y_mean = sy / n;
    const double b0 = (sy - fit.alpha * sx) / n;
    for (auto [x, y] : pts) {
        const double e = y - (b0 + fit.alpha * x);
        ss_res += e * e;
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (pts.size() > 2) {
        const double s2 = ss_res / (n - 2.0);
        fit.alpha_stderr = std::sqrt(s2 * n / denom);
    }
    return fit;
}

ExponentFit fit_exponent_filtered(const std::vector<ModulusPoint>& moduli,
                                  const FitOptions& options) {
    std::vector<ModulusPoint> kept;
    double h_max = 0.0;
    for (const auto& m : moduli) h_max = std::max(h_max, m.h);
    const double h_cap = h_max * std::pow(10.0, -options.skip_largest_decades);
    int idx = 0;
    for (const auto& m : moduli) {
        if (idx++ < options.skip_smallest_scales) continue;
        if (m.h > h_cap && kept.size() >= 6) continue;
        kept.push_back(m);
    }
    return fit_exponent(kept);
}

RegularityReport regularity_report(const ValueGrid& grid,
                                   const ObstacleProblemSpec& spec,
                                   const FitOptions& options) {
    RegularityReport rep;
    rep.condition_c0_ge_lip = spec.c_lower_bound >= spec.lipschitz_b;

    const auto mx = estimate_modulus(grid, Direction::Space);
    bool all_zero = true;
    for (const auto& m : mx)
        if (m.omega > 1e-14) all_zero = false;
    if (all_zero) {
        rep.constant_function = true;
        rep.alpha_x = 1.0;
        rep.r2_x = 1.0;
        return rep;
    }
    const ExponentFit fx = fit_exponent_filtered(mx, options);
    rep.alpha_x = std::min(fx.alpha, 1.05);  // clamped diagnostic band
    rep.alpha_x_stderr = fx.alpha_stderr;
    rep.r2_x = fx.r2;

    // robust Lipschitz constant at the smallest reliable scale
    {
        const std::size_t nx = grid.nx();
        const std::size_t margin = std::max<std::size_t>(2, nx / 10);
        const auto d =
            static_cast<std::size_t>(std::max(1, options.skip_smallest_scales + 1));
        const double h = (grid.x_grid[1] - grid.x_grid[0]) * static_cast<double>(d);
        std::vector<double> slopes;
        for (std::size_t m = 0; m < grid.nt(); ++m)
            for (std::size_t i = margin; i + d + margin < nx; ++i)
                slopes.push_back(std::abs(grid.at(m, i + d) - grid.at(m, i)) / h);
        std::sort(slopes.begin(), slopes.end());
        if (!slopes.empty())
            rep.lip_x = slopes[static_cast<std::size_t>(0.99 * (slopes.size() - 1))];
        rep.fit_h_min = mx[static_cast<std::size_t>(options.skip_smallest_scales)].h;
        rep.fit_h_max = mx.back().h;
    }

    if (grid.nt() >= 64) {
        rep.has_time_direction = true;
        const auto mt = estimate_modulus(grid, Direction::Time);
        bool t_zero = true;
        for (const auto& m : mt)
            if (m.omega > 1e-14) t_zero = false;
        if (!t_zero) {
            const ExponentFit ft = fit_exponent_filtered(mt, options);
            rep.alpha_t = ft.alpha;
            rep.r2_t = ft.r2;
        } else {
            rep.alpha_t = 1.0;
            rep.r2_t = 1.0;
        }
    }
    return rep;
}

}  // namespace levyob
