#include "wavecert/bounds.hpp"

#include <gtest/gtest.h>

using namespace wavecert;

namespace {

BoundConstants bump_constants() {
    return bound_constants(bump_case(), PhysicsParams{1.0, 0.1}, 1.0);
}

}  // namespace

TEST(BoundConstants, BumpCaseValues) {
    const BoundConstants k = bump_constants();
    // Re-derived in 256-bit arithmetic from C3 = 5120 sqrt(2), C4 = 409600/3.
    const Real256 C3 = 5120 * sqrt(Real256(2));
    const Real256 C4 = Real256(409600) / 3;
    const Real256 Cp = C3 + C4 + 1;
    const Real256 Cs = 4 * C4;
    const Real256 mu = sqrt(Real256(2)) / sqrt(Real256(0.2) - Real256(0.01));
    const Real256 Ce = 2 * mu * (Cp / sqrt(Real256(2)) + mu * 2 * Cs);

    EXPECT_NEAR(k.C_prime, static_cast<double>(Cp), 1e-9);
    EXPECT_NEAR(k.C_second, static_cast<double>(Cs), 1e-9);
    EXPECT_NEAR(k.mu, static_cast<double>(mu), 1e-12);
    EXPECT_NEAR(k.C_e / static_cast<double>(Ce), 1.0, 1e-13);

    EXPECT_NEAR(k.C_prime, 143775.1068, 1e-4);
    EXPECT_NEAR(k.C_second, 546133.3333, 1e-4);
    EXPECT_NEAR(k.mu, 3.244428423, 1e-9);
    EXPECT_NEAR(k.C_e, 23654773.15, 1e-2);
    EXPECT_NEAR(k.C_Delta, 3.674016353e-14, 1e-23);
    EXPECT_NEAR(k.alpha_e, 0.7071067811865476, 1e-15);
    EXPECT_EQ(k.alpha_Delta, 0.5);
    EXPECT_EQ(k.alpha(), 0.5);
}

TEST(BoundConstants, RejectBadParameters) {
    const Regularity r;
    EXPECT_THROW(bound_constants(r, 0.0, 0.1, 1, 1), std::invalid_argument);
    EXPECT_THROW(bound_constants(r, 1.0, 1.0, 1, 1), std::invalid_argument);
    EXPECT_THROW(bound_constants(r, 1.0, 0.1, 0, 1), std::invalid_argument);
}

TEST(TotalErrorBound, FormulaAndValidity) {
    const BoundConstants k = bump_constants();
    const double dx = 1e-3, dt = 9e-4;
    EXPECT_DOUBLE_EQ(total_error_bound(dx, dt, k), k.C_e * (dx * dx + dt * dt) + k.C_Delta / (dt * dt));
    EXPECT_THROW(total_error_bound(0.4, 0.4, k), std::domain_error);
    EXPECT_THROW(total_error_bound(1e-3, 0.0, k), std::domain_error);
    EXPECT_FALSE(total_bound_valid(0.45, 0.3, k));
    EXPECT_TRUE(total_bound_valid(0.3, 0.3, k));
}

TEST(LineMinimum, MatchesBruteForceScan) {
    const BoundConstants k = bump_constants();
    const double ratio = 0.9;
    const LineMinimum m = bound_minimum_on_line(k, ratio);
    EXPECT_TRUE(m.interior);

    double best = 1e300, best_dx = 0;
    const int points = 100000;
    for (int j = 0; j < points; ++j) {
        const double dx = std::pow(10.0, -7.0 + 6.0 * j / (points - 1));
        if (!total_bound_valid(dx, ratio * dx, k)) continue;
        const double b = total_error_bound(dx, ratio * dx, k);
        if (b < best) best = b, best_dx = dx;
    }
    EXPECT_NEAR(m.bound / best, 1.0, 1e-8);
    EXPECT_NEAR(m.dx / best_dx, 1.0, 2e-4);
    EXPECT_NEAR(m.bound, 0.00278713, 1e-8);
    EXPECT_NEAR(m.dx, 5.70512e-6, 1e-10);
}

TEST(LineMinimum, ClampsToTheValidityLimit) {
    BoundConstants k = bump_constants();
    k.C_Delta = 1e6;  // pushes the unconstrained minimum far beyond alpha
    const LineMinimum m = bound_minimum_on_line(k, 0.9);
    EXPECT_FALSE(m.interior);
    EXPECT_TRUE(total_bound_valid(m.dx * (1 - 1e-12), m.dt * (1 - 1e-12), k));
    EXPECT_THROW(bound_minimum_on_line(k, 0.0), std::invalid_argument);
}

TEST(Footnote, EqualityAtTwoAndTrueBeyond) {
    EXPECT_EQ((2.0 + 1) * (2.0 + 2), 3.0 * 2.0 * 2.0);
    EXPECT_TRUE(footnote_inequality_holds(2.0));
    for (double n = 2.0; n < 1e6; n *= 1.37) {
        EXPECT_TRUE(footnote_inequality_holds(n)) << n;
    }
    EXPECT_FALSE((1.5 + 1) * (1.5 + 2) <= 3 * 1.5 * 1.5);
    EXPECT_THROW(footnote_inequality_holds(1.5), std::domain_error);
}

TEST(SpatialRoundoffBound, ScalesWithInverseSquareStep) {
    const GridSpec g1 = make_grid(0, 1, 100, 1, 0.01);
    const GridSpec g2 = make_grid(0, 1, 100, 1, 0.005);
    EXPECT_DOUBLE_EQ(spatial_roundoff_norm_bound(g2), 4.0 * spatial_roundoff_norm_bound(g1));
    EXPECT_LE(spatial_roundoff_norm_bound_fine(g1), spatial_roundoff_norm_bound(g1));
    EXPECT_THROW(spatial_roundoff_norm_bound(make_grid(0, 1, 4, 1, 0.6)), std::domain_error);
}

TEST(SpatialRoundoffBound, BoundsMeasuredNorms) {
    const PhysicsParams p{1.0, 0.1};
    const GridSpec g = make_grid(0, 1, 80, 1, cfl_line_dt(1.0 / 80, p));
    const auto study = run_roundoff_study<Real256>(g, p, sample_inputs(bump_case(), g), false);
    const double bound = spatial_roundoff_norm_bound(g);
    for (const auto& lvl : summarize_levels(study, g)) {
        EXPECT_LE(lvl.global_norm_dx, bound);
    }
}

TEST(EffectiveError, BelowTheBoundOnCoarseGrids) {
    const PhysicsParams p{1.0, 0.1};
    const BoundConstants k = bump_constants();
    for (int n : {10, 40, 160}) {
        const GridSpec g = make_grid(0, 1, n, 1, cfl_line_dt(1.0 / n, p));
        const EffectiveError e = effective_total_error(bump_case(), g, p);
        EXPECT_EQ(e.levels_observed, g.k_max + 1);
        EXPECT_LT(e.max_norm, total_error_bound(g.dx, g.dt, k));
        EXPECT_GT(e.max_norm, 0.0);
    }
}

TEST(EffectiveError, StridedLevelsIncludeTheLast) {
    const PhysicsParams p{1.0, 0.1};
    const GridSpec g = make_grid(0, 1, 50, 1, cfl_line_dt(0.02, p));
    const EffectiveError all = effective_total_error(bump_case(), g, p);
    const EffectiveError some = effective_total_error(bump_case(), g, p, 7);
    EXPECT_LE(some.levels_observed, 8);
    EXPECT_LE(some.max_norm, all.max_norm);
}
