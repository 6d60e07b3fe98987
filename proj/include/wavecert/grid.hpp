#pragma once

#include "wavecert/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace wavecert {

/// Regular space-time grid over [x_min, x_max] x [0, t_max].
///
/// Nodes are x_i = x_min + i*dx for i in [0, i_max] and t^k = k*dt for
/// k in [0, k_max], with k_max = floor(t_max/dt).
struct GridSpec {
    double x_min = 0.0;
    double x_max = 1.0;
    int i_max = 2;
    double t_max = 1.0;
    double dt = 0.5;
    double dx = 0.5;
    int k_max = 2;

    std::size_t nodes() const { return static_cast<std::size_t>(i_max) + 1; }
    std::size_t steps() const { return static_cast<std::size_t>(k_max) + 1; }
    double x(int i) const { return x_min + i * dx; }
    double t(int k) const { return k * dt; }
    double length() const { return x_max - x_min; }
};

/// Propagation velocity and CFL margin.
struct PhysicsParams {
    double c = 1.0;
    double xi = 0.1;
};

namespace detail {

// floor(q) that snaps to the integer above when q sits a few ulp below it,
// so that 0.3/0.1 maps to 3 rather than 2.
inline long guarded_floor(double q) {
    const double nearest = std::round(q);
    const double guard = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(q));
    if (nearest > q && nearest - q <= guard) {
        return static_cast<long>(nearest);
    }
    return static_cast<long>(std::floor(q));
}

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

}  // namespace detail

inline GridSpec make_grid(double x_min, double x_max, int i_max, double t_max, double dt) {
    detail::require_finite(x_min, "x_min");
    detail::require_finite(x_max, "x_max");
    detail::require_finite(t_max, "t_max");
    detail::require_finite(dt, "dt");
    if (!(x_min < x_max)) {
        throw std::invalid_argument("x_min must be smaller than x_max");
    }
    if (i_max < 2) {
        throw std::invalid_argument("i_max must be at least 2");
    }
    if (!(t_max > 0.0)) {
        throw std::invalid_argument("t_max must be positive");
    }
    if (!(dt > 0.0 && dt < t_max)) {
        throw std::invalid_argument("dt must lie in (0, t_max)");
    }
    GridSpec g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.i_max = i_max;
    g.t_max = t_max;
    g.dt = dt;
    g.dx = (x_max - x_min) / i_max;
    const long k_max = detail::guarded_floor(t_max / dt);
    if (k_max < 1) {
        throw std::invalid_argument("t_max/dt must be at least 1");
    }
    if (k_max > std::numeric_limits<int>::max() - 1) {
        throw std::invalid_argument("too many time steps");
    }
    g.k_max = static_cast<int>(k_max);
    if (!(g.dx > 0.0)) {
        throw std::invalid_argument("dx underflows to zero");
    }
    return g;
}

inline void validate(const PhysicsParams& p) {
    if (!std::isfinite(p.c) || !(p.c > 0.0)) {
        throw std::invalid_argument("c must be positive and finite");
    }
    if (!std::isfinite(p.xi) || !(p.xi > 0.0 && p.xi < 1.0)) {
        throw std::invalid_argument("xi must lie in (0, 1)");
    }
}

/// CFL(xi) condition c*dt/dx <= 1 - xi, evaluated in binary64.
inline bool cfl_check(const GridSpec& g, const PhysicsParams& p) {
    validate(p);
    return p.c * g.dt / g.dx <= 1.0 - p.xi;
}

/// Largest binary64 time step on the line dt = (1 - xi) dx / c that passes cfl_check.
inline double cfl_line_dt(double dx, const PhysicsParams& p) {
    validate(p);
    double dt = (1.0 - p.xi) * dx / p.c;
    while (!(p.c * dt / dx <= 1.0 - p.xi)) {
        dt = std::nextafter(dt, 0.0);
    }
    return dt;
}

/// Time index floor(t/dt), clamped to [0, k_max].
inline int step_of_t(const GridSpec& g, double t) {
    if (!std::isfinite(t) || t < 0.0 || t > g.t_max) {
        throw std::out_of_range("t must lie in [0, t_max]");
    }
    const long k = detail::guarded_floor(t / g.dt);
    return static_cast<int>(std::clamp<long>(k, 0, g.k_max));
}

/// Space index floor((x - x_min)/dx), clamped to [0, i_max].
inline int index_of_x(const GridSpec& g, double x) {
    if (!std::isfinite(x) || x < g.x_min || x > g.x_max) {
        throw std::out_of_range("x must lie in [x_min, x_max]");
    }
    const long i = detail::guarded_floor((x - g.x_min) / g.dx);
    return static_cast<int>(std::clamp<long>(i, 0, g.i_max));
}

/// <q, r>_dx = sum_i q_i r_i dx, summed left to right.
template <SchemeNumber T>
T dot_dx(std::span<const T> q, std::span<const T> r, const GridSpec& g) {
    if (q.size() != g.nodes() || r.size() != g.nodes()) {
        throw std::invalid_argument("vector length must be i_max + 1");
    }
    const T dx = from_double<T>(g.dx);
    T sum = from_double<T>(0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        sum = sum + q[i] * r[i] * dx;
    }
    return sum;
}

/// Squared dx-weighted norm; exact in the rational domain.
template <SchemeNumber T>
T norm_dx_squared(std::span<const T> q, const GridSpec& g) {
    return dot_dx<T>(q, q, g);
}

inline double norm_dx(std::span<const double> q, const GridSpec& g) {
    return std::sqrt(norm_dx_squared<double>(q, g));
}

}  // namespace wavecert
