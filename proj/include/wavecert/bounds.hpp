#pragma once

#include "wavecert/analytic.hpp"
#include "wavecert/grid.hpp"
#include "wavecert/roundoff.hpp"
#include "wavecert/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wavecert {

/// Constants of the total error estimate
///   ||E^k||_dx <= C_e (dx^2 + dt^2) + C_Delta / dt^2
/// valid when sqrt(dx^2 + dt^2) <= min(alpha_e, alpha_Delta).
struct BoundConstants {
    double alpha_e = 0.0;
    double C_e = 0.0;
    double mu = 0.0;
    double C_prime = 0.0;
    double C_second = 0.0;
    double alpha_Delta = 0.0;
    double C_Delta = 0.0;

    // Problem data the constants were derived from.
    double t_max = 0.0;
    double length = 0.0;
    double c = 0.0;
    double xi = 0.0;

    double alpha() const { return std::min(alpha_e, alpha_Delta); }
};

inline BoundConstants bound_constants(const Regularity& r, double c, double xi, double t_max, double length) {
    if (!(c > 0) || !(xi > 0 && xi < 1) || !(t_max > 0) || !(length > 0)) {
        throw std::invalid_argument("bound constants need c > 0, 0 < xi < 1, t_max > 0 and a nonempty domain");
    }
    BoundConstants k;
    k.t_max = t_max;
    k.length = length;
    k.c = c;
    k.xi = xi;
    const double c2 = c * c;
    k.alpha_e = std::min({1.0, t_max, r.alpha3, r.alpha4});
    k.mu = std::numbers::sqrt2 / std::sqrt(2.0 * xi - xi * xi);
    k.C_prime = std::max(1.0, r.C3 + c2 * r.C4 + 1.0);
    k.C_second = std::max(k.C_prime, 2.0 * (1.0 + c2) * r.C4);
    k.C_e = 2.0 * k.mu * t_max * std::sqrt(length) *
            (k.C_prime / std::numbers::sqrt2 + k.mu * (t_max + 1.0) * k.C_second);
    k.alpha_Delta = std::min(1.0, t_max / 2.0);
    k.C_Delta = 234.0 * pow2(-53) * t_max * t_max * std::sqrt(length + 1.0);
    return k;
}

inline BoundConstants bound_constants(const AnalyticCase& ac, const PhysicsParams& p, double t_max) {
    return bound_constants(ac.regularity, ac.c, p.xi, t_max, ac.length());
}

/// True when (dx, dt) lies where the total error estimate is proven:
/// sqrt(dx^2 + dt^2) <= min(alpha_e, alpha_Delta), dx <= 1 and dt <= t_max/2.
inline bool total_bound_valid(double dx, double dt, const BoundConstants& k) {
    return dx > 0 && dt > 0 && std::hypot(dx, dt) <= k.alpha() && dx <= 1.0 && dt <= k.t_max / 2.0;
}

/// C_e (dx^2 + dt^2) + C_Delta / dt^2. Refuses points outside the validity region.
inline double total_error_bound(double dx, double dt, const BoundConstants& k) {
    if (!total_bound_valid(dx, dt, k)) {
        throw std::domain_error("total error bound is not established for this (dx, dt)");
    }
    return k.C_e * (dx * dx + dt * dt) + k.C_Delta / (dt * dt);
}

/// (n + 1)(n + 2) <= 3 n^2 for n = t_max/dt >= 2.
inline bool footnote_inequality_holds(double steps_ratio) {
    if (steps_ratio < 2.0) {
        throw std::domain_error("the inequality is stated for t_max/dt >= 2");
    }
    return (steps_ratio + 1.0) * (steps_ratio + 2.0) <= 3.0 * steps_ratio * steps_ratio;
}

/// sqrt(x_max - x_min + 1) * 78 * 2^-53 * 3 * t_max^2 / dt^2, the bound on
/// ||Delta^k||_dx for every k of a run on g.
inline double spatial_roundoff_norm_bound(const GridSpec& g) {
    if (!(g.dx <= 1.0) || !(g.dt <= g.t_max / 2.0)) {
        throw std::domain_error("spatial round-off bound needs dx <= 1 and dt <= t_max/2");
    }
    return std::sqrt(g.length() + 1.0) * 78.0 * pow2(-53) * 3.0 * g.t_max * g.t_max / (g.dt * g.dt);
}

/// Intermediate step of the same chain: sqrt((i_max + 1) dx) * bound(t_max/dt).
inline double spatial_roundoff_norm_bound_fine(const GridSpec& g) {
    const double n = g.t_max / g.dt;
    return std::sqrt((g.i_max + 1.0) * g.dx) * 78.0 * pow2(-53) * (n + 1.0) * (n + 2.0);
}

struct LineMinimum {
    double dx = 0.0;
    double dt = 0.0;
    double bound = 0.0;
    bool interior = false;  ///< false when the minimum sits on the validity limit
};

/// Minimum of the total error bound along dt = ratio * dx.
///
/// There the bound is A dx^2 + B / dx^2 with A = C_e (1 + ratio^2) and
/// B = C_Delta / ratio^2, minimised at dx = (B/A)^(1/4) unless that point
/// leaves the validity region.
inline LineMinimum bound_minimum_on_line(const BoundConstants& k, double ratio) {
    if (!(ratio > 0)) {
        throw std::invalid_argument("line slope must be positive");
    }
    const double A = k.C_e * (1.0 + ratio * ratio);
    const double B = k.C_Delta / (ratio * ratio);
    const double dx_limit = std::min({k.alpha() / std::sqrt(1.0 + ratio * ratio), 1.0, k.t_max / 2.0 / ratio});
    LineMinimum m;
    m.dx = std::pow(B / A, 0.25);
    m.interior = m.dx <= dx_limit;
    if (!m.interior) {
        m.dx = dx_limit;
    }
    m.dt = ratio * m.dx;
    m.bound = A * m.dx * m.dx + B / (m.dx * m.dx);
    return m;
}

struct EffectiveError {
    double dx = 0.0;
    double dt = 0.0;
    int i_max = 0;
    int k_max = 0;
    /// max over the observed levels of ||exact^k - p_fl^k||_dx
    double max_norm = 0.0;
    int worst_k = 0;
    int levels_observed = 0;
};

/// Total error (method plus round-off) of the binary64 run against d'Alembert's
/// solution. Only three time levels are kept in memory; the norm is evaluated
/// at every level when `max_levels` >= k_max + 1, otherwise at evenly spaced
/// levels that always include k_max.
inline EffectiveError effective_total_error(const AnalyticCase& ac, const GridSpec& g, const PhysicsParams& p,
                                            int max_levels = 0) {
    EffectiveError out;
    out.dx = g.dx;
    out.dt = g.dt;
    out.i_max = g.i_max;
    out.k_max = g.k_max;
    const int levels = g.k_max + 1;
    const int stride = (max_levels <= 0 || max_levels >= levels) ? 1 : (levels + max_levels - 1) / max_levels;
    std::vector<double> diff(g.nodes(), 0.0);
    solve_working_streaming(g, p, sample_inputs(ac, g), [&](int k, std::span<const double> slice) {
        if (k % stride != 0 && k != g.k_max) {
            return;
        }
        const double t = g.t(k);
        for (int i = 1; i < g.i_max; ++i) {
            diff[static_cast<std::size_t>(i)] = dalembert_eval(ac, g.x(i), t) - slice[static_cast<std::size_t>(i)];
        }
        const double nrm = norm_dx(diff, g);
        ++out.levels_observed;
        if (nrm > out.max_norm) {
            out.max_norm = nrm;
            out.worst_k = k;
        }
    });
    return out;
}

}  // namespace wavecert
