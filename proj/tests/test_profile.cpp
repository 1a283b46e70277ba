#include <gtest/gtest.h>

#include <cmath>

#include "conefoliate/profile.hpp"

using namespace conefoliate;

namespace {
const ConeParams kCone = ConeParams::make(3, 3);
const ProfileCurve& splus() {
    static const ProfileCurve c = shoot_profile(kCone, Side::E_plus, 1e3);
    return c;
}
}

TEST(Profile, StartsOnTheAxisPerpendicularly) {
    const ProfileSample t = splus().sample_at(0.0);
    EXPECT_EQ(t.y, 0.0);
    EXPECT_GT(t.x, 0.0);
    EXPECT_NEAR(t.xdot, 0.0, 1e-12);
    EXPECT_NEAR(t.ydot, 1.0, 1e-12);
}

TEST(Profile, DenseOutputIsFiniteNearTheTip) {
    const ProfileCurve& c = splus();
    for (double s : {1e-7, 1e-5, 5e-5, 3e-4}) {
        const ProfileSample m = c.sample_at(s);
        EXPECT_TRUE(std::isfinite(m.x) && std::isfinite(m.y));
        EXPECT_NEAR(m.y, s, 1e-6);
    }
}

TEST(Profile, NormalizedDecayCoefficient) {
    const AsymptoticFit f = asymptotic_fit(splus());
    EXPECT_NEAR(f.coeff, 1.0, 1e-6);
    EXPECT_NEAR(f.gamma_hat, -2.0, 0.01);
    ProfileCurve m = shoot_profile(kCone, Side::E_minus, 1e3);
    EXPECT_NEAR(asymptotic_fit(m).coeff, -1.0, 1e-6);
}

TEST(Profile, ApproachesTheCone) {
    const ProfileCurve& c = splus();
    const ProfileSample end = c.sample(c.size() - 1);
    EXPECT_LT(std::abs(end.U) / std::hypot(end.rho, end.U), 1e-5);
    EXPECT_NEAR(cone_angle(kCone), std::atan(1.0), 1e-15);
}

TEST(Profile, ScalingHomogeneity) {
    const ProfileCurve s = scale_leaf(splus(), 0.01);
    const Eigen::VectorXd r1 = (Eigen::VectorXd(3) << 0.05, 0.1, 0.5).finished();
    const Eigen::VectorXd r0 = r1 / 0.01;
    const Eigen::VectorXd h1 = graph_over_cone(s, r1), h0 = graph_over_cone(splus(), r0);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(h1(i), 0.01 * h0(i), 1e-10 * std::abs(h0(i)) + 1e-14);
}

TEST(Profile, SideFoliationRaysCrossOnce) {
    const double a = cone_angle(kCone);
    for (double t : {0.01, 0.5, 0.9, 0.999}) {
        const RayProbe p = ray_probe(splus(), a * t);
        EXPECT_EQ(p.crossings, 1);
        EXPECT_GT(p.min_transversality, 0.0);
    }
}
