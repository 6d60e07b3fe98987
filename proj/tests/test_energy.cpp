#include "wavecert/analytic.hpp"
#include "wavecert/energy.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wavecert;

namespace {

SchemeInputs<Rational> to_rational(const SchemeInputs<double>& in) {
    SchemeInputs<Rational> out;
    for (double v : in.p0) out.p0.emplace_back(v);
    for (double v : in.p1) out.p1.emplace_back(v);
    if (in.has_source()) out.source = convert_field<Rational>(*in.source);
    return out;
}

}  // namespace

TEST(DiscreteEnergy, ZeroField) {
    const GridSpec g = make_grid(0, 1, 5, 1, 0.1);
    const std::vector<double> z(6, 0.0);
    EXPECT_EQ(discrete_energy<double>(z, z, 1.0, g), 0.0);
}

TEST(DiscreteEnergy, HandExample) {
    // Stationary hat on three nodes: only the stiffness term contributes,
    // 1/2 * (8 * 1 * 0.5) = 2.
    const GridSpec g = make_grid(0, 1, 2, 1, 0.1);
    const std::vector<double> q{0, 1, 0};
    EXPECT_EQ(discrete_energy<double>(q, q, 1.0, g), 2.0);
    // A pure translation in time adds the kinetic part 1/2 * (1/0.1)^2 * 0.5.
    const std::vector<double> q1{0, 2, 0};
    EXPECT_NEAR(discrete_energy<double>(q, q1, 1.0, g), 0.5 * 100.0 * 0.5 + 0.5 * 8.0 * 2.0 * 0.5, 1e-12);
}

TEST(DiscreteEnergy, IndexRange) {
    const GridSpec g = make_grid(0, 1, 4, 1, 0.25);
    const Field2D<double> f(g);
    EXPECT_NO_THROW(discrete_energy(f, 0, 1.0, g));
    EXPECT_NO_THROW(discrete_energy(f, g.k_max - 1, 1.0, g));
    EXPECT_THROW(discrete_energy(f, g.k_max, 1.0, g), std::out_of_range);
    EXPECT_THROW(discrete_energy(f, -1, 1.0, g), std::out_of_range);
}

TEST(EnergyConservation, ExactInRationals) {
    const PhysicsParams p{1.0, 0.1};
    const GridSpec g = make_grid(0, 1, 16, 1, cfl_line_dt(1.0 / 16, p));
    auto in = to_rational(sample_inputs(bump_case(), g));
    in.p1.assign(g.nodes(), Rational(0));
    for (int i = 1; i < g.i_max; ++i) in.p1[static_cast<std::size_t>(i)] = Rational(i % 3, 7);
    const Field2D<Rational> f = solve_scheme<Rational>(g, p, in);
    const auto series = energy_series(f, p.c, g);
    for (const Rational& e : series) {
        EXPECT_EQ(e, series.front());
    }
    EXPECT_GT(series.front(), 0);
    EXPECT_EQ(relative_energy_drift(series), 0.0);
}

TEST(EnergyConservation, Binary64DriftIsTiny) {
    const PhysicsParams p{1.0, 0.1};
    const GridSpec g = make_grid(0, 1, 100, 1, cfl_line_dt(0.01, p));
    const Field2D<double> f = solve_scheme<double>(g, p, sample_inputs(bump_case(), g));
    EXPECT_LE(relative_energy_drift(energy_series(f, p.c, g)), 1e-10);
}

TEST(EnergyBounds, HoldExactlyForTheBump) {
    const PhysicsParams p{1.0, 0.1};
    const GridSpec g = make_grid(0, 1, 24, 1, cfl_line_dt(1.0 / 24, p));
    const auto in = to_rational(sample_inputs(bump_case(), g));
    const Field2D<Rational> f = solve_scheme<Rational>(g, p, in);
    const EnergyReport r = energy_bounds_check(f, in, p, g);
    EXPECT_TRUE(r.all_ok());
    EXPECT_EQ(r.rows.size(), static_cast<std::size_t>(g.k_max));
    for (const auto& row : r.rows) {
        EXPECT_LE(row.under_lhs, row.energy);
    }
}

TEST(EnergyBounds, HoldInBinary64WithTolerance) {
    const PhysicsParams p{1.0, 0.1};
    const GridSpec g = make_grid(0, 1, 100, 1, cfl_line_dt(0.01, p));
    const auto in = sample_inputs(bump_case(), g);
    const Field2D<double> f = solve_scheme<double>(g, p, in);
    EXPECT_TRUE(energy_bounds_check(f, in, p, g, 1e-10).all_ok());
}

TEST(EnergyBounds, OverEstimateWithRandomSource) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> u(-64, 64);
    const PhysicsParams p{1.0, 0.25};
    const GridSpec g = make_grid(0, 1, 8, 1, 0.0625);
    ASSERT_TRUE(cfl_check(g, p));
    for (int trial = 0; trial < 5; ++trial) {
        SchemeInputs<Rational> in = SchemeInputs<Rational>::zero(g);
        in.p1.assign(g.nodes(), Rational(0));
        Field2D<Rational> s(g);
        for (int i = 1; i < g.i_max; ++i) {
            in.p0[static_cast<std::size_t>(i)] = Rational(u(rng), 64);
            in.p1[static_cast<std::size_t>(i)] = Rational(u(rng), 16);
            for (int k = 1; k <= g.k_max; ++k) s(i, k) = Rational(u(rng), 4);
        }
        in.source = s;
        const Field2D<Rational> f = solve_scheme<Rational>(g, p, in);
        const EnergyReport r = energy_bounds_check(f, in, p, g);
        EXPECT_TRUE(r.all_ok()) << "trial " << trial;
        // Forcing changes the energy, so the report must use the source branch.
        EXPECT_GT(r.relative_drift, 0.0);
    }
}

TEST(EnergyBounds, CflViolationGivesNegativeEnergyAndIsRefused) {
    // Highest mode on four nodes with p^{k+1} = -p^k:
    // E = ||p^k||^2 (2/dt^2 - 3 c^2 / (2 dx^2)), negative once c dt/dx > 2/sqrt(3).
    const GridSpec g = make_grid(0, 1, 3, 1, 0.5);
    const PhysicsParams p{1.0, 0.1};
    ASSERT_GT(p.c * g.dt / g.dx, 2.0 / std::sqrt(3.0));
    const std::vector<double> pk{0, 1, -1, 0};
    const std::vector<double> pk1{0, -1, 1, 0};
    EXPECT_LT(discrete_energy<double>(pk, pk1, p.c, g), 0.0);

    Field2D<double> f(g);
    for (int i = 0; i <= 3; ++i) {
        f(i, 0) = pk[static_cast<std::size_t>(i)];
        f(i, 1) = pk1[static_cast<std::size_t>(i)];
    }
    EXPECT_FALSE(cfl_check(g, p));
    EXPECT_THROW(energy_bounds_check(f, SchemeInputs<double>::from_position(pk), p, g), std::domain_error);
}
