#include <gtest/gtest.h>

#include <cmath>

#include "conefoliate/radial.hpp"

using namespace conefoliate;

namespace {
const ConeParams kCone = ConeParams::make(3, 3);
}

TEST(Radial, HomogeneousSolutionsAreAnnihilatedToSecondOrder) {
    const Mode m = make_mode(3, 1, kCone);
    for (double g : {m.gamma_plus, m.gamma_minus}) {
        double res[2];
        for (int lev = 0; lev < 2; ++lev) {
            const RadialGrid grid = RadialGrid::make(lev ? 801 : 401, 1e-3, 1.0);
            Eigen::VectorXd a(grid.N);
            for (int i = 0; i < grid.N; ++i) a(i) = std::pow(grid.r(i), g);
            const ModeField Lu = apply_L_cone(ModeField{kCone, grid, {{m, a}}, 1.3});
            res[lev] = 0;
            for (int i = 1; i + 1 < grid.N; ++i)
                res[lev] = std::max(res[lev], std::abs(Lu.entries[0].a(i)) * grid.r(i) * grid.r(i) / std::abs(a(i)));
        }
        const double h = std::log(1e3) / 800;
        // leading truncation of the central differences on exp(g t)
        const double lead = h * h * std::abs(std::pow(g, 4) / 12 + (kCone.n - 2) * std::pow(g, 3) / 6);
        EXPECT_NEAR(res[1], lead, 0.05 * lead);
        EXPECT_NEAR(std::log2(res[0] / res[1]), 2.0, 0.1);
    }
}

TEST(Radial, DeltaWindow) {
    EXPECT_NO_THROW(check_delta(kCone, 1.3));
    EXPECT_THROW(check_delta(kCone, 1.0), std::invalid_argument);
    EXPECT_THROW(check_delta(kCone, gamma4_plus(kCone) + 0.1), std::invalid_argument);
    EXPECT_GT(gamma4_plus(kCone), 1.0);
}

TEST(Radial, HOperatorIsJacobiExtension) {
    const RadialGrid grid = RadialGrid::make(65);
    const Mode m = make_mode(3, 1, kCone);
    const ModeField u = H_operator({{m, 0.5}, {make_mode(1, 1, kCone), 7.0}}, kCone, grid, 1.3);
    ASSERT_EQ(u.entries.size(), 1u);
    EXPECT_DOUBLE_EQ(u.entries[0].a(grid.N - 1), 0.5);
    EXPECT_NEAR(u.entries[0].a(0), 0.5 * std::pow(1e-4, m.gamma_plus), 1e-15);
}

TEST(Radial, DirichletSolveHitsBoundaryAndResidual) {
    const RadialGrid grid = RadialGrid::make(513);
    const Mode m = make_mode(3, 1, kCone);
    Eigen::VectorXd f(grid.N);
    for (int i = 0; i < grid.N; ++i) f(i) = std::sin(3 * grid.r(i)) * std::pow(grid.r(i), 0.5);
    LinearSolveReport rep;
    const ModeField u = linear_dirichlet_solve(ModeField{kCone, grid, {{m, f}}, 1.3}, {{m, 0.25}}, 1.3, &rep);
    EXPECT_LE(rep.boundary_error, 1e-14);
    EXPECT_LT(rep.residual_max, 1e-3);
    EXPECT_GT(rep.schauder_constant, 0.0);
    EXPECT_TRUE(std::isfinite(rep.schauder_constant));
}

TEST(Radial, LinearityOfSolve) {
    const RadialGrid grid = RadialGrid::make(257);
    const Mode m = make_mode(4, 1, kCone);
    Eigen::VectorXd f1(grid.N), f2(grid.N);
    for (int i = 0; i < grid.N; ++i) {
        f1(i) = grid.r(i);
        f2(i) = std::cos(grid.r(i));
    }
    auto solve = [&](const Eigen::VectorXd& f, double g) {
        return linear_dirichlet_solve(ModeField{kCone, grid, {{m, f}}, 1.3}, {{m, g}}, 1.3).entries[0].a;
    };
    const Eigen::VectorXd a = solve(f1, 0.3), b = solve(f2, -0.2), ab = solve(2 * f1 + f2, 0.4);
    EXPECT_LT((ab - 2 * a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Radial, ObstructedBoundaryDataIsDiscarded) {
    const RadialGrid grid = RadialGrid::make(129);
    LinearSolveReport rep;
    const ModeField u = linear_dirichlet_solve(ModeField{kCone, grid, {}, 1.3},
                                               {{make_mode(2, 1, kCone), 1.0}}, 1.3, &rep);
    ASSERT_EQ(rep.discarded.size(), 1u);
    EXPECT_EQ(u.entries[0].a.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Radial, WeightedNormScalesWithWeight) {
    // r^delta has weighted sup norm 1 in every dyadic annulus
    const RadialGrid grid = RadialGrid::make(1025, 1e-4, 1.0);
    Eigen::VectorXd a(grid.N);
    for (int i = 0; i < grid.N; ++i) a(i) = std::pow(grid.r(i), 1.3);
    const WeightedNormReport w0 = weighted_norm_radial(grid, a, 0, 0.5, 1.3);
    EXPECT_GE(w0.value, 1.0);
    EXPECT_LT(w0.value, 3.0);
    const WeightedNormReport w2 = weighted_norm_radial(grid, 5 * a, 0, 0.5, 1.3);
    EXPECT_NEAR(w2.value, 5 * w0.value, 1e-12 * w2.value);
}
