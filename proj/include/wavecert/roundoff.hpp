#pragma once

#include "wavecert/field.hpp"
#include "wavecert/grid.hpp"
#include "wavecert/kernel.hpp"
#include "wavecert/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace wavecert {

/// Bound on a single local round-off error, 78 * 2^-52, valid when every
/// binary64 value stays in [-2, 2] and |a_fl - a| <= 2^-49.
inline double local_delta_bound() { return 78.0 * pow2(-52); }

/// Bound on the global round-off error at time level k, 78 * 2^-53 * (k+1) * (k+2).
inline double roundoff_bound(int k) {
    if (k < 0) {
        throw std::invalid_argument("time level must be nonnegative");
    }
    return 78.0 * pow2(-53) * (static_cast<double>(k) + 1.0) * (static_cast<double>(k) + 2.0);
}

struct DeltaPreconditions {
    /// |a_fl - a| with a the exact squared CFL number of the binary64 inputs.
    double a_error = 0.0;
    double max_abs_value = 0.0;
    bool a_ok = false;
    bool range_ok = false;

    bool ok() const { return a_ok && range_ok; }
};

/// Checks |a_fl - a| <= 2^-49 (exactly, in rationals) and |p_fl| <= 2 everywhere.
inline DeltaPreconditions check_delta_preconditions(const Field2D<double>& working, const GridSpec& g,
                                                    const PhysicsParams& p) {
    require_grid_shape(working, g);
    DeltaPreconditions pre;
    const Rational exact = exact_cfl_coefficient<Rational>(g, p);
    const Rational err = abs_value(Rational(working_cfl_coefficient(g, p)) - exact);
    pre.a_error = to_double(err);
    pre.a_ok = !(Rational(pow2(-49)) < err);
    for (double v : working.values()) {
        pre.max_abs_value = std::max(pre.max_abs_value, std::fabs(v));
    }
    pre.range_ok = pre.max_abs_value <= 2.0;
    return pre;
}

/// Local round-off errors of a binary64 run, measured in T.
///
/// For k >= 2, delta_i^k is p_fl_i^k minus the update evaluated with the
/// exact coefficient a and exact arithmetic on the binary64 values of levels
/// k-1 and k-2. delta^1 does the same for the initialisation update and
/// delta^0 compares level 0 to the initial data.
template <SchemeNumber T>
Field2D<T> local_deltas(const Field2D<double>& working, const SchemeInputs<double>& in, const GridSpec& g,
                        const PhysicsParams& p) {
    static_assert(!std::is_same_v<T, double>, "local errors must be measured in an oracle domain");
    require_grid_shape(working, g);
    validate_inputs(in, g);
    const T a = exact_cfl_coefficient<T>(g, p);
    const T half_a = a / from_double<T>(2.0);
    const T dt = from_double<T>(g.dt);
    const T dt2 = dt * dt;
    const T two = from_double<T>(2.0);
    auto w = [&](int i, int k) { return from_double<T>(working(i, k)); };

    Field2D<T> delta(g);
    for (int i = 1; i < g.i_max; ++i) {
        delta(i, 0) = w(i, 0) - from_double<T>(in.p0[static_cast<std::size_t>(i)]);
    }
    for (int i = 1; i < g.i_max; ++i) {
        const T dp = w(i + 1, 0) - two * w(i, 0) + w(i - 1, 0);
        T exact = w(i, 0) + half_a * dp;
        if (in.has_velocity()) {
            exact = exact + dt * from_double<T>(in.p1[static_cast<std::size_t>(i)]);
        }
        delta(i, 1) = w(i, 1) - exact;
    }
    for (int k = 1; k < g.k_max; ++k) {
        for (int i = 1; i < g.i_max; ++i) {
            const T dp = w(i + 1, k) - two * w(i, k) + w(i - 1, k);
            T exact = two * w(i, k) - w(i, k - 1) + a * dp;
            if (in.has_source()) {
                exact = exact + dt2 * from_double<T>((*in.source)(i, k));
            }
            delta(i, k + 1) = w(i, k + 1) - exact;
        }
    }
    return delta;
}

/// Global round-off error Delta = p_fl - p measured against an oracle field.
template <SchemeNumber T>
Field2D<T> measured_global_roundoff(const Field2D<double>& working, const Field2D<T>& oracle) {
    if (working.i_max() != oracle.i_max() || working.k_max() != oracle.k_max()) {
        throw std::invalid_argument("field shapes differ");
    }
    Field2D<T> out(oracle.i_max(), oracle.k_max());
    for (int k = 0; k <= oracle.k_max(); ++k) {
        for (int i = 0; i <= oracle.i_max(); ++i) {
            out(i, k) = from_double<T>(working(i, k)) - oracle(i, k);
        }
    }
    return out;
}

namespace detail {

// Value of the odd, 2*i_max-periodic extension in space of a time slice.
template <SchemeNumber T>
T odd_extension(std::span<const T> slice, int j) {
    const int n = static_cast<int>(slice.size()) - 1;
    int m = j % (2 * n);
    if (m < 0) {
        m += 2 * n;
    }
    if (m <= n) {
        return slice[static_cast<std::size_t>(m)];
    }
    return -slice[static_cast<std::size_t>(2 * n - m)];
}

}  // namespace detail

/// Rebuilds the global round-off error from the local errors by convolution
/// with the kernel:
///   Delta_i^k = sum_{l=0}^{k} sum_{j=-l}^{l} lambda_j^l delta~_{i+j}^{k-l}
/// where delta~ is the odd 2*i_max-periodic extension of delta in space.
///
/// Level 0 enters the scheme through the half-step initialisation rather
/// than the full update, so its contribution uses the kernel
/// (lambda^l - lambda^{l-2}) / 2 instead of lambda^l. For the usual runs
/// delta^0 = 0 and both forms coincide.
template <SchemeNumber T>
Field2D<T> reconstruct_global_roundoff(const Field2D<T>& delta, const KernelTable<T>& lambda) {
    const int n = delta.i_max();
    const int K = delta.k_max();
    if (lambda.depth() < K) {
        throw std::invalid_argument("kernel table is shallower than the field");
    }
    const T zero = from_double<T>(0.0);
    const T half = from_double<T>(0.5);

    // Response to a unit error injected at level 0.
    std::vector<std::vector<T>> init_kernel(static_cast<std::size_t>(K) + 1);
    for (int l = 0; l <= K; ++l) {
        auto& row = init_kernel[static_cast<std::size_t>(l)];
        row.resize(static_cast<std::size_t>(l) + 1);
        for (int j = 0; j <= l; ++j) {
            if (l == 0) {
                row[0] = lambda.at(0, 0);
            } else if (l == 1) {
                row[static_cast<std::size_t>(j)] = half * lambda.at(j, 1);
            } else {
                row[static_cast<std::size_t>(j)] = half * (lambda.at(j, l) - lambda.at(j, l - 2));
            }
        }
    }

    Field2D<T> out(n, K);
    for (int k = 0; k <= K; ++k) {
        for (int i = 0; i <= n; ++i) {
            T sum = zero;
            for (int l = 0; l <= k; ++l) {
                const int source_level = k - l;
                const auto slice = delta.slice(source_level);
                const bool from_init = source_level == 0;
                const auto& lam_row = lambda.row(l);
                auto weight = [&](int j) -> const T& {
                    return from_init ? init_kernel[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]
                                     : lam_row[static_cast<std::size_t>(j + l)];
                };
                // lambda is even in j, so pair j with -j; this keeps the ends exactly zero.
                sum = sum + weight(0) * detail::odd_extension<T>(slice, i);
                for (int j = 1; j <= l; ++j) {
                    sum = sum + weight(j) * (detail::odd_extension<T>(slice, i + j) +
                                             detail::odd_extension<T>(slice, i - j));
                }
            }
            out(i, k) = sum;
        }
    }
    return out;
}

/// Local errors, global errors and their reconstruction for one run.
template <SchemeNumber T>
struct RoundoffStudy {
    Field2D<double> working;
    Field2D<T> oracle;
    Field2D<T> delta;
    Field2D<T> global;
    std::optional<Field2D<T>> reconstruction;
    DeltaPreconditions preconditions;
    double delta_bound = local_delta_bound();
};

/// Solves in binary64 and in T, then measures delta and Delta. The
/// convolution is evaluated when `reconstruct` is set; its cost grows like
/// i_max * k_max^3.
template <SchemeNumber T>
RoundoffStudy<T> run_roundoff_study(const GridSpec& g, const PhysicsParams& p, const SchemeInputs<double>& in,
                                    bool reconstruct) {
    RoundoffStudy<T> study;
    study.working = solve_scheme<double>(g, p, in);

    SchemeInputs<T> exact_in;
    exact_in.p0.reserve(in.p0.size());
    for (double v : in.p0) exact_in.p0.push_back(from_double<T>(v));
    for (double v : in.p1) exact_in.p1.push_back(from_double<T>(v));
    if (in.has_source()) {
        exact_in.source = convert_field<T>(*in.source);
    }
    study.oracle = solve_scheme<T>(g, p, exact_in);
    study.delta = local_deltas<T>(study.working, in, g, p);
    study.global = measured_global_roundoff<T>(study.working, study.oracle);
    study.preconditions = check_delta_preconditions(study.working, g, p);
    if (reconstruct) {
        const KernelTable<T> lambda = lambda_table<T>(exact_cfl_coefficient<T>(g, p), g.k_max);
        study.reconstruction = reconstruct_global_roundoff<T>(study.delta, lambda);
    }
    return study;
}

/// Largest entrywise |a - b| as a double.
template <SchemeNumber T>
double max_abs_difference(const Field2D<T>& a, const Field2D<T>& b) {
    require_same_shape(a, b);
    T worst = from_double<T>(0.0);
    for (std::size_t n = 0; n < a.values().size(); ++n) {
        const T d = abs_value(a.values()[n] - b.values()[n]);
        if (worst < d) worst = d;
    }
    return to_double(worst);
}

/// Per time level summary of a study.
struct RoundoffLevel {
    int k = 0;
    double max_abs_delta = 0.0;
    double max_abs_global = 0.0;
    double global_norm_dx = 0.0;
    double bound = 0.0;
};

template <SchemeNumber T>
std::vector<RoundoffLevel> summarize_levels(const RoundoffStudy<T>& study, const GridSpec& g) {
    std::vector<RoundoffLevel> out;
    for (int k = 0; k <= g.k_max; ++k) {
        RoundoffLevel lvl;
        lvl.k = k;
        lvl.bound = roundoff_bound(k);
        std::vector<double> row(g.nodes());
        for (int i = 0; i <= g.i_max; ++i) {
            const double d = std::fabs(to_double(study.delta(i, k)));
            const double e = to_double(study.global(i, k));
            lvl.max_abs_delta = std::max(lvl.max_abs_delta, d);
            lvl.max_abs_global = std::max(lvl.max_abs_global, std::fabs(e));
            row[static_cast<std::size_t>(i)] = e;
        }
        lvl.global_norm_dx = norm_dx(row, g);
        out.push_back(lvl);
    }
    return out;
}

}  // namespace wavecert
