#pragma once

#include "wavecert/analytic.hpp"
#include "wavecert/field.hpp"
#include "wavecert/grid.hpp"
#include "wavecert/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wavecert {

/// Method error of a discrete solution against the sampled exact solution.
template <SchemeNumber T>
struct ErrorReport {
    /// e_i^k = exact_i^k - discrete_i^k
    Field2D<T> e;
    /// eps_i^k, residual of the exact solution in the scheme operators
    Field2D<T> eps;
    /// ||e^k||_dx for every time level
    std::vector<double> norms_by_k;
    /// Fitted order when the report is part of a sweep, 0 otherwise.
    double order_estimate = 0.0;

    double max_norm() const {
        return norms_by_k.empty() ? 0.0 : *std::max_element(norms_by_k.begin(), norms_by_k.end());
    }
};

template <SchemeNumber T>
double norm_dx_as_double(std::span<const T> q, const GridSpec& g) {
    if constexpr (std::is_same_v<T, double>) {
        return norm_dx(q, g);
    } else {
        return static_cast<double>(sqrt(to_real256(norm_dx_squared<T>(q, g))));
    }
}

/// e = exact - discrete, entrywise, with per-level dx-norms.
template <SchemeNumber T>
ErrorReport<T> convergence_error(const Field2D<T>& exact, const Field2D<T>& discrete, const GridSpec& g) {
    require_same_shape(exact, discrete);
    require_grid_shape(exact, g);
    ErrorReport<T> report;
    report.e = exact - discrete;
    report.norms_by_k.reserve(g.steps());
    for (int k = 0; k <= g.k_max; ++k) {
        report.norms_by_k.push_back(norm_dx_as_double<T>(report.e.slice(k), g));
    }
    return report;
}

/// Truncation error of a grid function `exact` with respect to the scheme
/// driven by `data` (the discrete p0, p1 and source the exact solution is
/// compared to):
///   eps^0 = exact^0 - p0
///   eps^1 = (exact^1 - exact^0)/dt + dt/2 A_h exact^0 - p1
///   eps^k = (exact^k - 2 exact^{k-1} + exact^{k-2})/dt^2 + A_h exact^{k-1} - s^{k-1},  k >= 2
/// on interior nodes; boundary entries are 0.
template <SchemeNumber T>
Field2D<T> truncation_error(const Field2D<T>& exact, const SchemeInputs<T>& data, const GridSpec& g,
                            const PhysicsParams& p) {
    require_grid_shape(exact, g);
    validate_inputs(data, g);
    const T dt = from_double<T>(g.dt);
    const T dt2 = dt * dt;
    const T half_dt = dt / from_double<T>(2.0);
    const T two = from_double<T>(2.0);
    Field2D<T> eps(g);

    for (int i = 1; i < g.i_max; ++i) {
        eps(i, 0) = exact(i, 0) - data.p0[static_cast<std::size_t>(i)];
    }
    {
        const std::vector<T> a0 = apply_stiffness<T>(exact.slice(0), p.c, g);
        for (int i = 1; i < g.i_max; ++i) {
            T v = (exact(i, 1) - exact(i, 0)) / dt + half_dt * a0[static_cast<std::size_t>(i)];
            if (data.has_velocity()) {
                v = v - data.p1[static_cast<std::size_t>(i)];
            }
            eps(i, 1) = v;
        }
    }
    for (int k = 2; k <= g.k_max; ++k) {
        const std::vector<T> ak = apply_stiffness<T>(exact.slice(k - 1), p.c, g);
        for (int i = 1; i < g.i_max; ++i) {
            T v = (exact(i, k) - two * exact(i, k - 1) + exact(i, k - 2)) / dt2 + ak[static_cast<std::size_t>(i)];
            if (data.has_source()) {
                v = v - (*data.source)(i, k - 1);
            }
            eps(i, k) = v;
        }
    }
    return eps;
}

/// Truncation error of the analytic solution of `ac` on grid g, in binary64.
inline Field2D<double> truncation_error(const AnalyticCase& ac, const GridSpec& g, const PhysicsParams& p) {
    const Field2D<double> exact = sample_exact(ac, g);
    return truncation_error<double>(exact, sample_inputs(ac, g), g, p);
}

/// Inputs that make the scheme reproduce the convergence error:
/// p0 = 0, p1 = eps^1, s^k = eps^{k+1}.
template <SchemeNumber T>
SchemeInputs<T> error_scheme_inputs(const Field2D<T>& eps, const GridSpec& g) {
    require_grid_shape(eps, g);
    SchemeInputs<T> in = SchemeInputs<T>::zero(g);
    in.p1.assign(eps.slice(1).begin(), eps.slice(1).end());
    Field2D<T> s(g);
    for (int k = 0; k < g.k_max; ++k) {
        for (int i = 0; i <= g.i_max; ++i) {
            s(i, k) = eps(i, k + 1);
        }
    }
    in.source = std::move(s);
    return in;
}

struct Resolution {
    double dx = 0.0;
    double dt = 0.0;
};

/// Least-squares slope of log(error) against log(dx). Along a sweep with dt
/// proportional to dx this is the order in sqrt(dx^2 + dt^2) as well.
inline double order_fit(const std::vector<Resolution>& resolutions, const std::vector<double>& errors) {
    if (resolutions.size() != errors.size()) {
        throw std::invalid_argument("one error per resolution is required");
    }
    if (resolutions.size() < 3) {
        throw std::invalid_argument("order fit needs at least 3 resolutions");
    }
    const std::size_t n = errors.size();
    double sx = 0, sy = 0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(errors[j] > 0.0) || !std::isfinite(errors[j])) {
            throw std::invalid_argument("errors must be positive and finite");
        }
        if (!(resolutions[j].dx > 0.0)) {
            throw std::invalid_argument("dx must be positive");
        }
        xs[j] = std::log(resolutions[j].dx);
        ys[j] = std::log(errors[j]);
        sx += xs[j];
        sy += ys[j];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < n; ++j) {
        sxx += (xs[j] - mx) * (xs[j] - mx);
        sxy += (xs[j] - mx) * (ys[j] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("resolutions must not all share the same dx");
    }
    return sxy / sxx;
}

/// Runs the binary64 scheme for `ac` on g and measures the method error
/// against d'Alembert's solution.
inline ErrorReport<double> method_error(const AnalyticCase& ac, const GridSpec& g, const PhysicsParams& p) {
    const Field2D<double> exact = sample_exact(ac, g);
    const Field2D<double> discrete = solve_scheme<double>(g, p, sample_inputs(ac, g));
    ErrorReport<double> report = convergence_error(exact, discrete, g);
    report.eps = truncation_error<double>(exact, sample_inputs(ac, g), g, p);
    return report;
}

}  // namespace wavecert
