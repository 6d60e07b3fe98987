#pragma once

#include "wavecert/field.hpp"
#include "wavecert/grid.hpp"
#include "wavecert/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wavecert {

/// Constants of the uniform Taylor approximations of the exact solution at
/// degree 3 and 4. They are supplied with a case, not derived.
struct Regularity {
    double alpha3 = 1.0;
    double C3 = 1.0;
    double alpha4 = 1.0;
    double C4 = 1.0;
};

/// Continuous initial-boundary value problem on [x_min, x_max] with
/// homogeneous Dirichlet ends.
struct AnalyticCase {
    double c = 1.0;
    double x_min = 0.0;
    double x_max = 1.0;
    std::function<double(double)> p0;
    /// Empty means zero initial velocity.
    std::function<double(double)> p1;
    /// Empty means zero source. Callers should keep s(x, 0) = 0.
    std::function<double(double, double)> s;
    Regularity regularity;
    std::string name = "custom";

    double length() const { return x_max - x_min; }
    bool has_velocity() const { return static_cast<bool>(p1); }
    bool has_source() const { return static_cast<bool>(s); }
};

inline void validate(const AnalyticCase& ac) {
    if (!(ac.c > 0.0) || !std::isfinite(ac.c)) {
        throw std::invalid_argument("case velocity must be positive");
    }
    if (!(ac.x_min < ac.x_max)) {
        throw std::invalid_argument("case domain is empty");
    }
    if (!ac.p0) {
        throw std::invalid_argument("case needs an initial position");
    }
    const Regularity& r = ac.regularity;
    if (!(r.alpha3 > 0 && r.C3 > 0 && r.alpha4 > 0 && r.C4 > 0)) {
        throw std::invalid_argument("regularity constants must be positive");
    }
    const double scale = 1e-12;
    if (std::fabs(ac.p0(ac.x_min)) > scale || std::fabs(ac.p0(ac.x_max)) > scale) {
        throw std::invalid_argument("initial position must vanish at both ends");
    }
}

/// chi(z) = cos(pi z / 2)^5 on (-1, 1), zero elsewhere. C^4 on the real line.
inline double chi_bump(double z) {
    if (!(std::fabs(z) < 1.0)) {
        return 0.0;
    }
    const double c = std::cos(std::numbers::pi / 2.0 * z);
    const double c2 = c * c;
    return c2 * c2 * c;
}

/// The academic test case: a C^4 bump of width l centred at x0 on [0, 1],
/// c = 1, no initial velocity, no source.
inline AnalyticCase bump_case(double x0 = 0.5, double l = 0.25) {
    AnalyticCase ac;
    ac.name = "bump";
    ac.c = 1.0;
    ac.x_min = 0.0;
    ac.x_max = 1.0;
    ac.p0 = [x0, l](double x) { return chi_bump(2.0 * (x - x0) / l); };
    ac.regularity.alpha3 = std::numbers::sqrt2 / 2.0;
    ac.regularity.alpha4 = std::numbers::sqrt2 / 2.0;
    ac.regularity.C3 = 5120.0 * std::numbers::sqrt2;
    ac.regularity.C4 = 409600.0 / 3.0;
    return ac;
}

/// Folds x into [x_min, x_min + 2L) and reports whether it lands in the mirrored half.
/// Returns the point in [x_min, x_max] and the sign of the odd 2L-periodic extension.
inline std::pair<double, double> fold_antisymmetric(double x, double x_min, double x_max) {
    const double L = x_max - x_min;
    double r = std::fmod(x - x_min, 2.0 * L);
    if (r < 0.0) {
        r += 2.0 * L;
    }
    if (r <= L) {
        return {x_min + r, 1.0};
    }
    return {x_min + (2.0 * L - r), -1.0};
}

/// Odd, 2(x_max - x_min)-periodic extension of f to the real line.
template <typename F>
double antisym_extend(const F& f, double x_min, double x_max, double x) {
    const auto [y, sign] = fold_antisymmetric(x, x_min, x_max);
    return sign * f(y);
}

namespace detail {

template <typename F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::fabs(diff) <= 15.0 * tol) {
        return left + right + diff / 15.0;
    }
    if (depth >= max_depth) {
        throw std::runtime_error("adaptive quadrature did not converge");
    }
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1, max_depth) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
///
/// The tolerance is relative to max|f| * (b - a) from a coarse scan, with an
/// absolute floor so that vanishing integrals terminate.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol = 1e-12, int max_depth = 40) {
    if (a == b) {
        return 0.0;
    }
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    // A coarse |f| scan sets the scale; start from 8 panels so narrow features are seen.
    constexpr int panels = 8;
    const double h = (b - a) / panels;
    double scale = 0.0;
    for (int j = 0; j <= 2 * panels; ++j) {
        scale = std::max(scale, std::fabs(f(a + j * h / 2.0)));
    }
    const double tol = std::max(rel_tol * scale * (b - a), 1e-300);
    double total = 0.0;
    for (int j = 0; j < panels; ++j) {
        const double lo = a + j * h;
        const double hi = (j + 1 == panels) ? b : lo + h;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
        total += detail::simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / panels, 0, max_depth);
    }
    return sign * total;
}

/// Exact solution p(x, t) by d'Alembert's formula with image sources.
///
/// The position term is closed form. Velocity and source terms, when present,
/// go through adaptive Simpson quadrature (relative tolerance 1e-12; the outer
/// time integral of the source term uses 1e-10 since its integrand is itself a
/// quadrature result). Any finite t is accepted; for a case without velocity
/// and source the value is even in t.
inline double dalembert_eval(const AnalyticCase& ac, double x, double t) {
    if (!std::isfinite(x) || !std::isfinite(t)) {
        throw std::invalid_argument("x and t must be finite");
    }
    if (x < ac.x_min || x > ac.x_max) {
        throw std::out_of_range("x outside the case domain");
    }
    // Dirichlet ends hold exactly; the folded image terms would only cancel up to rounding.
    if (x == ac.x_min || x == ac.x_max) {
        return 0.0;
    }
    const double c = ac.c;
    const double ct = c * t;
    double value = 0.5 * (antisym_extend(ac.p0, ac.x_min, ac.x_max, x - ct) +
                          antisym_extend(ac.p0, ac.x_min, ac.x_max, x + ct));
    if (ac.has_velocity()) {
        auto ext = [&](double y) { return antisym_extend(ac.p1, ac.x_min, ac.x_max, y); };
        value += adaptive_simpson(ext, x - ct, x + ct) / (2.0 * c);
    }
    if (ac.has_source()) {
        auto inner = [&](double sigma) {
            const double half = c * (t - sigma);
            auto ext = [&](double y) {
                const auto [yy, sign] = fold_antisymmetric(y, ac.x_min, ac.x_max);
                return sign * ac.s(yy, sigma);
            };
            return adaptive_simpson(ext, x - half, x + half, 1e-12, 40);
        };
        value += adaptive_simpson(inner, 0.0, t, 1e-10, 40) / (2.0 * c);
    }
    return value;
}

/// Exact solution sampled on the grid nodes, p_i^k = p(x_i, t^k).
inline Field2D<double> sample_exact(const AnalyticCase& ac, const GridSpec& g) {
    if (g.x_min < ac.x_min || g.x_max > ac.x_max) {
        throw std::invalid_argument("grid extends beyond the case domain");
    }
    Field2D<double> out(g);
    for (int k = 0; k <= g.k_max; ++k) {
        const double t = g.t(k);
        for (int i = 1; i < g.i_max; ++i) {
            out(i, k) = dalembert_eval(ac, g.x(i), t);
        }
    }
    return out;
}

/// Exact solution at the grid nodes of a single time level.
inline std::vector<double> sample_exact_slice(const AnalyticCase& ac, const GridSpec& g, int k) {
    std::vector<double> out(g.nodes(), 0.0);
    const double t = g.t(k);
    for (int i = 1; i < g.i_max; ++i) {
        out[static_cast<std::size_t>(i)] = dalembert_eval(ac, g.x(i), t);
    }
    return out;
}

/// Initial position sampled at the grid nodes, as the reference loop does with p0(i*dx).
inline std::vector<double> sample_initial_position(const AnalyticCase& ac, const GridSpec& g) {
    std::vector<double> out(g.nodes(), 0.0);
    for (int i = 1; i < g.i_max; ++i) {
        out[static_cast<std::size_t>(i)] = ac.p0(g.x(i));
    }
    return out;
}

inline std::vector<double> sample_initial_velocity(const AnalyticCase& ac, const GridSpec& g) {
    std::vector<double> out;
    if (!ac.has_velocity()) {
        return out;
    }
    out.assign(g.nodes(), 0.0);
    for (int i = 1; i < g.i_max; ++i) {
        out[static_cast<std::size_t>(i)] = ac.p1(g.x(i));
    }
    return out;
}

/// Scheme inputs sampled from the case: p0h = p0(x_i), p1h = p1(x_i), sh = s(x_i, t^k).
inline SchemeInputs<double> sample_inputs(const AnalyticCase& ac, const GridSpec& g) {
    SchemeInputs<double> in;
    in.p0 = sample_initial_position(ac, g);
    in.p1 = sample_initial_velocity(ac, g);
    if (ac.has_source()) {
        Field2D<double> s(g);
        for (int k = 0; k <= g.k_max; ++k) {
            for (int i = 1; i < g.i_max; ++i) {
                s(i, k) = ac.s(g.x(i), g.t(k));
            }
        }
        in.source = std::move(s);
    }
    return in;
}

}  // namespace wavecert
