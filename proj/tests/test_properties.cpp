#include "support/properties.hpp"

#include <gtest/gtest.h>

using namespace wavecert;
using namespace wavecert::testing;

namespace {
constexpr int kCases = 40;
}

TEST(Properties, BoundaryZero) {
    Rng rng(101);
    for (int n = 0; n < kCases; ++n) EXPECT_TRUE(boundary_zero_holds(rng)) << "case " << n;
}

TEST(Properties, Linearity) {
    Rng rng(102);
    for (int n = 0; n < kCases; ++n) EXPECT_TRUE(linearity_holds(rng)) << "case " << n;
}

TEST(Properties, Symmetry) {
    Rng rng(103);
    for (int n = 0; n < kCases; ++n) EXPECT_TRUE(symmetry_holds(rng)) << "case " << n;
}

TEST(Properties, ConvergenceErrorSolvesTheScheme) {
    Rng rng(104);
    for (int n = 0; n < kCases; ++n) EXPECT_TRUE(error_scheme_identity_holds(rng)) << "case " << n;
}

TEST(Properties, RandomGridsRespectCfl) {
    Rng rng(105);
    const PhysicsParams p{1.0, 0.1};
    for (int n = 0; n < kCases; ++n) {
        const GridSpec g = random_grid(rng, p);
        EXPECT_TRUE(cfl_check(g, p));
        EXPECT_GE(g.k_max, 2);
    }
}

TEST(Properties, SymmetryCheckDetectsAsymmetricData) {
    // Guard against a vacuous property: an asymmetric p0 must break the mirror identity.
    const PhysicsParams p{1.0, 0.1};
    const GridSpec g = make_grid(0, 1, 5, 1, 0.1);
    std::vector<Rational> p0(6, Rational(0));
    p0[1] = 1;
    const auto f = solve_scheme<Rational>(g, p, SchemeInputs<Rational>::from_position(p0));
    EXPECT_NE(f(1, 0), f(4, 0));
}
