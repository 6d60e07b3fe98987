#include "wavecert/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace wavecert;

TEST(MakeGrid, ComputesStepsAndCounts) {
    const GridSpec g = make_grid(0, 1, 4, 1, 0.25);
    EXPECT_EQ(g.dx, 0.25);
    EXPECT_EQ(g.k_max, 4);
    EXPECT_EQ(g.nodes(), 5u);
    EXPECT_EQ(g.steps(), 5u);
}

TEST(MakeGrid, FloorsTheStepCount) {
    EXPECT_EQ(make_grid(0, 1, 4, 1, 0.3).k_max, 3);
}

TEST(MakeGrid, GuardsAgainstQuotientsJustBelowAnInteger) {
    // 0.3/0.1 is 2.9999999999999996 in binary64
    ASSERT_LT(0.3 / 0.1, 3.0);
    EXPECT_EQ(make_grid(0, 1, 4, 0.3, 0.1).k_max, 3);
}

TEST(MakeGrid, RejectsInvalidInput) {
    EXPECT_THROW(make_grid(0, 1, 1, 1, 0.25), std::invalid_argument);
    EXPECT_THROW(make_grid(1, 0, 4, 1, 0.25), std::invalid_argument);
    EXPECT_THROW(make_grid(0, 1, 4, 1, 0.0), std::invalid_argument);
    EXPECT_THROW(make_grid(0, 1, 4, 1, 1.0), std::invalid_argument);
    EXPECT_THROW(make_grid(0, 1, 4, 1, 2.0), std::invalid_argument);
    EXPECT_THROW(make_grid(0, NAN, 4, 1, 0.25), std::invalid_argument);
    EXPECT_THROW(make_grid(0, 1, 4, INFINITY, 0.25), std::invalid_argument);
}

TEST(MakeGrid, NodePositionsAreMonotoneAndHitTheEnds) {
    const GridSpec g = make_grid(-0.3, 0.7, 37, 1, 0.01);
    EXPECT_EQ(g.x(0), g.x_min);
    EXPECT_LE(std::fabs(g.x(g.i_max) - g.x_max), std::nextafter(g.x_max, 2.0) - g.x_max);
    for (int i = 1; i <= g.i_max; ++i) {
        EXPECT_LT(g.x(i - 1), g.x(i));
    }
}

TEST(Cfl, EqualityCasesPass) {
    PhysicsParams p{1.0, 0.1};
    GridSpec g = make_grid(0, 1, 100, 1, 0.009);
    ASSERT_EQ(g.dx, 0.01);
    EXPECT_TRUE(cfl_check(g, p));

    p = {1.0, 0.5};
    g = make_grid(0, 1, 100, 1, 0.005);
    EXPECT_TRUE(cfl_check(g, p));
}

TEST(Cfl, FastWaveFails) {
    const GridSpec g = make_grid(0, 1, 100, 1, 0.01);
    EXPECT_FALSE(cfl_check(g, PhysicsParams{2.0, 0.1}));
}

TEST(Cfl, RejectsBadParams) {
    const GridSpec g = make_grid(0, 1, 100, 1, 0.01);
    EXPECT_THROW(cfl_check(g, PhysicsParams{0.0, 0.1}), std::invalid_argument);
    EXPECT_THROW(cfl_check(g, PhysicsParams{1.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(cfl_check(g, PhysicsParams{1.0, 1.0}), std::invalid_argument);
}

TEST(Cfl, MonotoneInTimeStep) {
    const PhysicsParams p{1.3, 0.2};
    bool seen_true = false;
    for (double dt = 0.02; dt > 1e-4; dt *= 0.93) {
        const bool ok = cfl_check(make_grid(0, 1, 100, 1, dt), p);
        if (seen_true) {
            EXPECT_TRUE(ok) << "dt = " << dt;
        }
        seen_true = seen_true || ok;
    }
    EXPECT_TRUE(seen_true);
}

TEST(Cfl, LineStepPassesTheCheck) {
    const PhysicsParams p{1.0, 0.1};
    for (int n : {10, 50, 100, 200, 400, 1000, 175281}) {
        const double dx = 1.0 / n;
        const double dt = cfl_line_dt(dx, p);
        EXPECT_TRUE(p.c * dt / dx <= 1.0 - p.xi);
        EXPECT_LE((1.0 - p.xi) * dx / p.c - dt, 4 * std::numeric_limits<double>::epsilon() * dt);
    }
}

TEST(StepOfT, Examples) {
    EXPECT_EQ(step_of_t(make_grid(0, 1, 4, 1, 0.25), 0.0), 0);
    EXPECT_EQ(step_of_t(make_grid(0, 1, 4, 1, 0.1), 0.35), 3);
    EXPECT_EQ(step_of_t(make_grid(0, 1, 4, 1, 0.25), 1.0), 4);
    EXPECT_THROW(step_of_t(make_grid(0, 1, 4, 1, 0.25), 1.5), std::out_of_range);
    EXPECT_THROW(step_of_t(make_grid(0, 1, 4, 1, 0.25), -0.1), std::out_of_range);
}

TEST(StepOfT, MonotoneAndExactOnMultiples) {
    const GridSpec g = make_grid(0, 1, 4, 1, 0.0625);
    int last = 0;
    for (int j = 0; j <= 1000; ++j) {
        const int k = step_of_t(g, j / 1000.0);
        EXPECT_GE(k, last);
        last = k;
    }
    for (int k = 0; k <= g.k_max; ++k) {
        EXPECT_EQ(step_of_t(g, k * g.dt), k);
    }
}

TEST(NormDx, Examples) {
    const GridSpec g = make_grid(0, 1, 2, 1, 0.25);
    const std::vector<double> zeros(3, 0.0);
    EXPECT_EQ(norm_dx(zeros, g), 0.0);
    const std::vector<double> ones(3, 1.0);
    EXPECT_NEAR(norm_dx(ones, g), std::sqrt(1.5), 1e-15);
    EXPECT_THROW(norm_dx(std::vector<double>(4, 1.0), g), std::invalid_argument);
}

TEST(NormDx, MatchesDotAndIsHomogeneous) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    const GridSpec g = make_grid(0, 1, 5, 1, 0.1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> q(6);
        for (double& v : q) v = u(rng);
        const double n = norm_dx(q, g);
        EXPECT_EQ(n, std::sqrt(dot_dx<double>(q, q, g)));
        EXPECT_GT(n, 0.0);

        const double alpha = u(rng);
        std::vector<double> scaled(q);
        for (double& v : scaled) v *= alpha;
        const double ns = norm_dx(scaled, g);
        const double expect = std::fabs(alpha) * n;
        EXPECT_LE(std::fabs(ns - expect), 4 * std::numeric_limits<double>::epsilon() * expect);

        // Exact domain: homogeneity of the squared norm holds with equality.
        std::vector<Rational> qr, sr;
        for (double v : q) qr.emplace_back(v);
        const Rational ar(alpha);
        for (const auto& v : qr) sr.push_back(ar * v);
        EXPECT_EQ(norm_dx_squared<Rational>(sr, g), ar * ar * norm_dx_squared<Rational>(qr, g));
    }
}

TEST(NormDx, ZeroOnlyForZeroVectorInExactMode) {
    const GridSpec g = make_grid(0, 1, 3, 1, 0.1);
    std::vector<Rational> q(4, Rational(0));
    EXPECT_EQ(norm_dx_squared<Rational>(q, g), 0);
    q[2] = Rational(1e-300);
    EXPECT_GT(norm_dx_squared<Rational>(q, g), 0);
}
