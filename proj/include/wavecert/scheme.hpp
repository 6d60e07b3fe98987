#pragma once

#include "wavecert/field.hpp"
#include "wavecert/grid.hpp"
#include "wavecert/numeric.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace wavecert {

/// Discrete Cauchy data and source term driving the three-point scheme.
///
/// An empty `p1` means zero initial velocity and an absent `source` means
/// a zero source term, which is the configuration of the reference C loop.
template <SchemeNumber T>
struct SchemeInputs {
    std::vector<T> p0;
    std::vector<T> p1;
    std::optional<Field2D<T>> source;

    static SchemeInputs zero(const GridSpec& g) {
        SchemeInputs in;
        in.p0.assign(g.nodes(), from_double<T>(0.0));
        return in;
    }

    static SchemeInputs from_position(std::vector<T> p0) {
        SchemeInputs in;
        in.p0 = std::move(p0);
        return in;
    }

    bool has_velocity() const { return !p1.empty(); }
    bool has_source() const { return source.has_value(); }
};

template <SchemeNumber T>
void validate_inputs(const SchemeInputs<T>& in, const GridSpec& g) {
    if (in.p0.size() != g.nodes()) {
        throw std::invalid_argument("p0 must have i_max + 1 entries");
    }
    if (!number_traits<T>::is_zero(in.p0.front()) || !number_traits<T>::is_zero(in.p0.back())) {
        throw std::invalid_argument("p0 must vanish at both ends of the string");
    }
    if (in.has_velocity() && in.p1.size() != g.nodes()) {
        throw std::invalid_argument("p1 must have i_max + 1 entries");
    }
    if (in.has_source()) {
        require_grid_shape(*in.source, g);
    }
    if constexpr (std::is_same_v<T, double>) {
        auto finite = [](std::span<const double> v) {
            for (double x : v) {
                if (!std::isfinite(x)) return false;
            }
            return true;
        };
        if (!finite(in.p0) || !finite(in.p1) || (in.has_source() && !finite(in.source->values()))) {
            throw std::invalid_argument("scheme inputs must be finite");
        }
    }
}

/// alpha * lhs + rhs, entrywise on every input component.
template <SchemeNumber T>
SchemeInputs<T> combine(const T& alpha, const SchemeInputs<T>& lhs, const SchemeInputs<T>& rhs,
                        const GridSpec& g) {
    validate_inputs(lhs, g);
    validate_inputs(rhs, g);
    const T zero = from_double<T>(0.0);
    SchemeInputs<T> out;
    out.p0.resize(g.nodes());
    for (std::size_t i = 0; i < g.nodes(); ++i) {
        out.p0[i] = alpha * lhs.p0[i] + rhs.p0[i];
    }
    if (lhs.has_velocity() || rhs.has_velocity()) {
        out.p1.resize(g.nodes());
        for (std::size_t i = 0; i < g.nodes(); ++i) {
            const T l = lhs.has_velocity() ? lhs.p1[i] : zero;
            const T r = rhs.has_velocity() ? rhs.p1[i] : zero;
            out.p1[i] = alpha * l + r;
        }
    }
    if (lhs.has_source() || rhs.has_source()) {
        Field2D<T> s(g);
        for (int k = 0; k <= g.k_max; ++k) {
            for (int i = 0; i <= g.i_max; ++i) {
                const T l = lhs.has_source() ? (*lhs.source)(i, k) : zero;
                const T r = rhs.has_source() ? (*rhs.source)(i, k) : zero;
                s(i, k) = alpha * l + r;
            }
        }
        out.source = std::move(s);
    }
    return out;
}

/// (A_h(c) q)_i = -c^2 (q_{i+1} - 2 q_i + q_{i-1}) / dx^2 on interior nodes.
///
/// The returned vector has i_max + 1 entries; the two boundary entries are 0.
template <SchemeNumber T>
std::vector<T> apply_stiffness(std::span<const T> q, double c, const GridSpec& g) {
    if (q.size() != g.nodes()) {
        throw std::invalid_argument("vector length must be i_max + 1");
    }
    const T c2 = from_double<T>(c) * from_double<T>(c);
    const T dx = from_double<T>(g.dx);
    const T dx2 = dx * dx;
    const T two = from_double<T>(2.0);
    std::vector<T> out(q.size(), from_double<T>(0.0));
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        out[i] = -(c2 * (q[i + 1] - two * q[i] + q[i - 1]) / dx2);
    }
    return out;
}

/// Squared CFL number (c dt / dx)^2 computed exactly in T from the binary64 inputs.
template <SchemeNumber T>
T exact_cfl_coefficient(const GridSpec& g, const PhysicsParams& p) {
    const T r = from_double<T>(p.c) * from_double<T>(g.dt) / from_double<T>(g.dx);
    return r * r;
}

/// Squared CFL number as the reference C code computes it: a1 = dt/dx*v; a = a1*a1.
inline double working_cfl_coefficient(const GridSpec& g, const PhysicsParams& p) {
    const double a1 = g.dt / g.dx * p.c;
    return a1 * a1;
}

namespace detail {

inline void check_working_guards(const GridSpec& g, const PhysicsParams& p) {
    // Keeps the binary64 run away from subnormal and exceptional behaviour.
    if (g.dt < pow2(-1000)) {
        throw std::invalid_argument("dt must be at least 2^-1000");
    }
    if (p.c * g.dt / g.dx < pow2(-500)) {
        throw std::invalid_argument("c*dt/dx must be at least 2^-500");
    }
}

inline void require_finite_slice(std::span<const double> s, int k) {
    for (double v : s) {
        if (!std::isfinite(v)) {
            throw std::overflow_error("non-finite value in time slice " + std::to_string(k));
        }
    }
}

// Slice k = 1 in binary64. With p1 = 0 this is exactly
//   dp = p[i+1][0] - 2.*p[i][0] + p[i-1][0]; p[i][1] = p[i][0] + 0.5*a*dp;
// since adding dt*0 leaves p[i][0] unchanged.
inline void working_first_step(std::span<const double> p0, std::span<const double> p1, double a,
                               double dt, std::span<double> out) {
    const std::size_t ni = p0.size() - 1;
    out[0] = 0.;
    for (std::size_t i = 1; i < ni; ++i) {
        const double dp = p0[i + 1] - 2. * p0[i] + p0[i - 1];
        const double base = p1.empty() ? p0[i] : p0[i] + dt * p1[i];
        out[i] = base + 0.5 * a * dp;
    }
    out[ni] = 0.;
}

// Slice k + 1 from slices k and k - 1, in the evaluation order of
//   dp = p[i+1][k] - 2.*p[i][k] + p[i-1][k]; p[i][k+1] = 2.*p[i][k] - p[i][k-1] + a*dp;
inline void working_step(std::span<const double> prev, std::span<const double> cur,
                         std::span<const double> src, double a, double dt2, std::span<double> next) {
    const std::size_t ni = cur.size() - 1;
    next[0] = 0.;
    if (src.empty()) {
        for (std::size_t i = 1; i < ni; ++i) {
            const double dp = cur[i + 1] - 2. * cur[i] + cur[i - 1];
            next[i] = 2. * cur[i] - prev[i] + a * dp;
        }
    } else {
        for (std::size_t i = 1; i < ni; ++i) {
            const double dp = cur[i + 1] - 2. * cur[i] + cur[i - 1];
            next[i] = 2. * cur[i] - prev[i] + a * dp + dt2 * src[i];
        }
    }
    next[ni] = 0.;
}

}  // namespace detail

/// Runs the binary64 scheme keeping only three time slices and hands every
/// slice to `observer(k, slice)` in increasing k.
///
/// Produces bit-identical slices to solve_scheme<double>.
template <typename Observer>
void solve_working_streaming(const GridSpec& g, const PhysicsParams& p, const SchemeInputs<double>& in,
                             Observer&& observer) {
    validate(p);
    validate_inputs(in, g);
    detail::check_working_guards(g, p);

    const double a = working_cfl_coefficient(g, p);
    const double dt2 = g.dt * g.dt;
    const std::size_t n = g.nodes();
    std::vector<double> s0(n), s1(n), s2(n);
    std::span<double> prev(s0), cur(s1), next(s2);

    prev[0] = 0.;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        prev[i] = in.p0[i];
    }
    prev[n - 1] = 0.;
    detail::require_finite_slice(prev, 0);
    observer(0, std::span<const double>(prev));

    detail::working_first_step(prev, in.p1, a, g.dt, cur);
    detail::require_finite_slice(cur, 1);
    observer(1, std::span<const double>(cur));

    for (int k = 1; k < g.k_max; ++k) {
        std::span<const double> src;
        if (in.has_source()) {
            src = in.source->slice(k);
        }
        detail::working_step(prev, cur, src, a, dt2, next);
        detail::require_finite_slice(next, k + 1);
        observer(k + 1, std::span<const double>(next));
        std::swap(prev, cur);
        std::swap(cur, next);
    }
}

/// Solves the three-point scheme over the whole grid.
///
/// For T = double the arithmetic mirrors the reference C loop operation by
/// operation. For the oracle domains every operation is carried out in T,
/// starting from the exact values of the binary64 inputs.
template <SchemeNumber T>
Field2D<T> solve_scheme(const GridSpec& g, const PhysicsParams& p, const SchemeInputs<T>& in) {
    Field2D<T> out(g);
    if constexpr (std::is_same_v<T, double>) {
        solve_working_streaming(g, p, in, [&](int k, std::span<const double> slice) {
            std::copy(slice.begin(), slice.end(), out.slice(k).begin());
        });
    } else {
        validate(p);
        validate_inputs(in, g);
        const T a = exact_cfl_coefficient<T>(g, p);
        const T half_a = a / from_double<T>(2.0);
        const T dt = from_double<T>(g.dt);
        const T dt2 = dt * dt;
        const T two = from_double<T>(2.0);
        const int ni = g.i_max;

        for (int i = 1; i < ni; ++i) {
            out(i, 0) = in.p0[static_cast<std::size_t>(i)];
        }
        for (int i = 1; i < ni; ++i) {
            const T dp = out(i + 1, 0) - two * out(i, 0) + out(i - 1, 0);
            T v = out(i, 0) + half_a * dp;
            if (in.has_velocity()) {
                v = v + dt * in.p1[static_cast<std::size_t>(i)];
            }
            out(i, 1) = v;
        }
        for (int k = 1; k < g.k_max; ++k) {
            for (int i = 1; i < ni; ++i) {
                const T dp = out(i + 1, k) - two * out(i, k) + out(i - 1, k);
                T v = two * out(i, k) - out(i, k - 1) + a * dp;
                if (in.has_source()) {
                    v = v + dt2 * (*in.source)(i, k);
                }
                out(i, k + 1) = v;
            }
        }
    }
    return out;
}

/// Checks solve(alpha*in1 + in2) == alpha*solve(in1) + solve(in2) entrywise in exact arithmetic.
inline bool linearity_probe(const GridSpec& g, const PhysicsParams& p, const SchemeInputs<Rational>& in1,
                            const SchemeInputs<Rational>& in2, const Rational& alpha) {
    const Field2D<Rational> combined = solve_scheme(g, p, combine(alpha, in1, in2, g));
    const Field2D<Rational> f1 = solve_scheme(g, p, in1);
    const Field2D<Rational> f2 = solve_scheme(g, p, in2);
    for (int k = 0; k <= g.k_max; ++k) {
        for (int i = 0; i <= g.i_max; ++i) {
            if (combined(i, k) != alpha * f1(i, k) + f2(i, k)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace wavecert
