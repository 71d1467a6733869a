#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace levyob {

template <class T>
struct QuadResult {
    T value{};
    double abs_err = 0.0;    // accumulated Kronrod error estimate
    std::size_t evals = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double kGK15Nodes[8] = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};

inline constexpr double kK15Weights[8] = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};

inline constexpr double kG7Weights[4] = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

inline double norm_of(double v) { return std::abs(v); }
inline double norm_of(const std::complex<double>& v) { return std::abs(v); }

}  // namespace detail

/// One G7/K15 panel on [a, b]; returns the K15 value and |K15 - G7|.
template <class T, class F>
std::pair<T, double> gk15_panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    T fc = f(c);
    T kron = fc * detail::kK15Weights[0];
    T gauss = T{};
    for (int j = 1; j < 8; ++j) {
        const double dx = r * detail::kGK15Nodes[j];
        T fl = f(c - dx);
        T fr = f(c + dx);
        kron += (fl + fr) * detail::kK15Weights[j];
        if (j % 2 == 0) gauss += (fl + fr) * detail::kG7Weights[j / 2];
    }
    gauss += fc * detail::kG7Weights[0];
    kron *= r;
    gauss *= r;
    return {kron, detail::norm_of(kron - gauss)};
}

/// Adaptive Gauss–Kronrod integration of f over consecutive panels given by
/// `breaks` (ascending). Splits the worst panel until the summed error
/// estimate satisfies abs_tol + rel_tol * |value| or the budget runs out.
template <class T, class F>
QuadResult<T> integrate_gk_panels(F&& f, const std::vector<double>& breaks,
                                  double abs_tol = 1e-12, double rel_tol = 1e-10,
                                  int max_panels = 2000) {
    struct Panel {
        double a, b, err;
        T val;
    };
    QuadResult<T> out;
    if (breaks.size() < 2) return out;
    const double a = breaks.front();
    const double b = breaks.back();

    std::vector<Panel> panels;
    panels.reserve(breaks.size() + 64);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        auto [v, e] = gk15_panel<T>(f, breaks[i], breaks[i + 1]);
        out.evals += 15;
        panels.push_back({breaks[i], breaks[i + 1], e, v});
    }

    for (int iter = 0; iter < max_panels; ++iter) {
        T total{};
        double err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].val;
            err += panels[i].err;
            if (panels[i].err > panels[worst].err) worst = i;
        }
        if (err <= abs_tol + rel_tol * detail::norm_of(total) ||
            panels[worst].b - panels[worst].a < 1e-15 * (std::abs(a) + std::abs(b) + 1.0)) {
            out.value = total;
            out.abs_err = err;
            return out;
        }
        Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        auto [vl, el] = gk15_panel<T>(f, p.a, mid);
        auto [vr, er] = gk15_panel<T>(f, mid, p.b);
        out.evals += 30;
        panels[worst] = {p.a, mid, el, vl};
        panels.push_back({mid, p.b, er, vr});
    }
    T total{};
    double err = 0.0;
    for (const auto& p : panels) {
        total += p.val;
        err += p.err;
    }
    out.value = total;
    out.abs_err = err;
    return out;
}

/// Adaptive Gauss–Kronrod integration of f over [a, b].
template <class T, class F>
QuadResult<T> integrate_gk(F&& f, double a, double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-10, int max_panels = 2000) {
    if (a == b) return {};
    return integrate_gk_panels<T>(f, std::vector<double>{a, b}, abs_tol, rel_tol,
                                  max_panels);
}

/// Integrates f over [a, b] with the substitution x = exp(u), 0 < a < b.
/// Suited to integrands with a power-law singularity at 0 or slow tails.
/// Seeds one panel per log unit so wide ranges are never under-sampled.
template <class T, class F>
QuadResult<T> integrate_gk_log(F&& f, double a, double b, double abs_tol = 1e-12,
                               double rel_tol = 1e-10, int max_panels = 4000) {
    auto g = [&f](double u) {
        const double x = std::exp(u);
        return f(x) * x;
    };
    const double ua = std::log(a);
    const double ub = std::log(b);
    const int n_seed = std::max(1, std::min(512, static_cast<int>(ub - ua)));
    std::vector<double> breaks(static_cast<std::size_t>(n_seed) + 1);
    for (int i = 0; i <= n_seed; ++i)
        breaks[static_cast<std::size_t>(i)] = ua + (ub - ua) * i / n_seed;
    return integrate_gk_panels<T>(g, breaks, abs_tol, rel_tol, max_panels);
}

}  // namespace levyob
