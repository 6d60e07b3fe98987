#pragma once

#include "wavecert/field.hpp"
#include "wavecert/grid.hpp"
#include "wavecert/scheme.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace wavecert {

namespace detail {

// Square root clamped at 0, for energies that may round slightly negative.
inline Real256 sqrt_nonnegative(const Real256& v) { return v > 0 ? Real256(sqrt(v)) : Real256(0); }

}  // namespace detail

/// Discrete energy between time levels k and k+1:
///   1/2 ||(p^{k+1} - p^k)/dt||^2 + 1/2 <A_h p^k, p^{k+1}>
/// with both products dx-weighted.
template <SchemeNumber T>
T discrete_energy(std::span<const T> pk, std::span<const T> pk1, double c, const GridSpec& g) {
    if (pk.size() != g.nodes() || pk1.size() != g.nodes()) {
        throw std::invalid_argument("vector length must be i_max + 1");
    }
    const T dt = from_double<T>(g.dt);
    std::vector<T> rate(pk.size());
    for (std::size_t i = 0; i < pk.size(); ++i) {
        rate[i] = (pk1[i] - pk[i]) / dt;
    }
    const std::vector<T> stiff = apply_stiffness<T>(pk, c, g);
    const T half = from_double<T>(0.5);
    return half * norm_dx_squared<T>(rate, g) + half * dot_dx<T>(stiff, pk1, g);
}

template <SchemeNumber T>
T discrete_energy(const Field2D<T>& f, int k, double c, const GridSpec& g) {
    require_grid_shape(f, g);
    if (k < 0 || k >= g.k_max) {
        throw std::out_of_range("energy index must lie in [0, k_max - 1]");
    }
    return discrete_energy<T>(f.slice(k), f.slice(k + 1), c, g);
}

/// E^{k+1/2} for k = 0 .. k_max - 1.
template <SchemeNumber T>
std::vector<T> energy_series(const Field2D<T>& f, double c, const GridSpec& g) {
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(g.k_max));
    for (int k = 0; k < g.k_max; ++k) {
        out.push_back(discrete_energy(f, k, c, g));
    }
    return out;
}

/// max_k |E^{k+1/2} - E^{1/2}| / |E^{1/2}|, or the absolute drift when E^{1/2} = 0.
template <SchemeNumber T>
double relative_energy_drift(const std::vector<T>& series) {
    if (series.empty()) {
        return 0.0;
    }
    const Real256 e0 = to_real256(series.front());
    Real256 worst = 0;
    for (const T& e : series) {
        const Real256 d = abs(to_real256(e) - e0);
        if (d > worst) worst = d;
    }
    if (!e0.is_zero()) {
        worst /= abs(e0);
    }
    return static_cast<double>(worst);
}

struct EnergyCheckRow {
    int k = 0;
    double energy = 0.0;
    /// sqrt(E^{k+1/2}) and its upper estimate from E^{1/2} and the source.
    double over_lhs = 0.0;
    double over_rhs = 0.0;
    /// 1/2 (1 - (c dt/dx)^2) ||(p^{k+1} - p^k)/dt||^2, which must not exceed the energy.
    double under_lhs = 0.0;
    bool over_ok = false;
    bool under_ok = false;
    bool nonnegative = false;

    bool ok() const { return over_ok && under_ok && nonnegative; }
};

struct EnergyReport {
    std::vector<EnergyCheckRow> rows;
    double relative_drift = 0.0;

    bool all_ok() const {
        for (const auto& r : rows) {
            if (!r.ok()) return false;
        }
        return true;
    }
};

/// Checks the energy estimates that hold under CFL(xi) at every k:
/// the upper estimate of sqrt(E^{k+1/2}) by sqrt(E^{1/2}) plus the
/// accumulated source norms, the lower estimate by the kinetic part, and
/// nonnegativity.
///
/// Comparisons are made in T where the quantities are rational, and in
/// 256-bit arithmetic where a square root is involved. `rel_tol` (relative to
/// E^{1/2}) absorbs the rounding of binary64 fields and should be 0 for the
/// exact oracle.
template <SchemeNumber T>
EnergyReport energy_bounds_check(const Field2D<T>& f, const SchemeInputs<T>& in, const PhysicsParams& p,
                                 const GridSpec& g, double rel_tol = 0.0) {
    require_grid_shape(f, g);
    validate_inputs(in, g);
    if (!cfl_check(g, p)) {
        throw std::domain_error("energy estimates require the CFL condition");
    }
    const std::vector<T> energies = energy_series(f, p.c, g);

    const T dt = from_double<T>(g.dt);
    const T a = exact_cfl_coefficient<T>(g, p);
    const T half_margin = (from_double<T>(1.0) - a) / from_double<T>(2.0);
    const Real256 mu_half = sqrt(Real256(2)) / (2 * sqrt(Real256(2 * p.xi - p.xi * p.xi)));

    const T e0 = energies.front();
    const Real256 sqrt_e0 = detail::sqrt_nonnegative(to_real256(e0));
    const T slack = from_double<T>(rel_tol) * abs_value(e0);
    const T zero = from_double<T>(0.0);

    EnergyReport report;
    report.relative_drift = relative_energy_drift(energies);
    Real256 source_sum = 0;
    bool source_seen = false;
    for (int k = 0; k < g.k_max; ++k) {
        if (k >= 1 && in.has_source()) {
            const auto s = in.source->slice(k);
            const T n2 = norm_dx_squared<T>(s, g);
            if (!number_traits<T>::is_zero(n2)) {
                source_seen = true;
                source_sum += sqrt(to_real256(n2));
            }
        }
        const T& e = energies[static_cast<std::size_t>(k)];
        EnergyCheckRow row;
        row.k = k;
        row.energy = to_double(e);

        std::vector<T> rate(g.nodes());
        for (std::size_t i = 0; i < g.nodes(); ++i) {
            rate[i] = (f.slice(k + 1)[i] - f.slice(k)[i]) / dt;
        }
        const T under = half_margin * norm_dx_squared<T>(rate, g);
        row.under_lhs = to_double(under);
        row.under_ok = !(e + slack < under);
        row.nonnegative = !(e + slack < zero);

        const Real256 lhs = detail::sqrt_nonnegative(to_real256(e));
        const Real256 rhs = sqrt_e0 + mu_half * to_real256(dt) * source_sum;
        row.over_lhs = static_cast<double>(lhs);
        row.over_rhs = static_cast<double>(rhs);
        if (!source_seen) {
            // Without forcing the estimate is E^{k+1/2} <= E^{1/2}, decidable exactly in T.
            row.over_ok = !(e0 + slack < e);
        } else {
            row.over_ok = lhs <= rhs + sqrt(to_real256(slack));
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace wavecert
