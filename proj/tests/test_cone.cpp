#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "conefoliate/cone.hpp"

using namespace conefoliate;

TEST(Cone, MakeRejectsSmallFactors) {
    EXPECT_THROW(ConeParams::make(0, 3), std::invalid_argument);
    EXPECT_THROW(ConeParams::make(1, 5), std::invalid_argument);
    EXPECT_NO_THROW(ConeParams::make(1, 5, false));
    const ConeParams c = ConeParams::make(2, 4);
    EXPECT_EQ(c.n, 7);
}

TEST(Cone, MinimizingList) {
    EXPECT_TRUE(is_minimizing(3, 3));
    EXPECT_TRUE(is_minimizing(2, 4));
    EXPECT_TRUE(is_minimizing(4, 2));
    EXPECT_TRUE(is_minimizing(3, 4));
    EXPECT_FALSE(is_minimizing(2, 3));
    EXPECT_FALSE(is_minimizing(1, 5));
}

TEST(Cone, LinkRadiiSquaresSumToOne) {
    for (auto [p, q] : {std::pair{3, 3}, {2, 4}, {4, 4}, {3, 5}}) {
        const ConeParams c = ConeParams::make(p, q);
        EXPECT_NEAR(c.cp() * c.cp() + c.cq() * c.cq(), 1.0, 1e-15);
        EXPECT_NEAR(c.cp() * c.cp(), double(p) / (p + q), 1e-15);
    }
}

TEST(Cone, SideClassification) {
    const ConeParams c = ConeParams::make(3, 3);
    AmbientPoint a{Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4)};
    a.x(0) = 1;
    EXPECT_EQ(side_classify(a, c), Side::E_plus);
    AmbientPoint b{Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4)};
    b.y(2) = 1;
    EXPECT_EQ(side_classify(b, c), Side::E_minus);
    EXPECT_EQ(side_classify(link_point(c, 0.7), c), Side::on_cone);
    EXPECT_EQ(side_from_name("E_minus"), Side::E_minus);
    EXPECT_STREQ(side_name(Side::E_plus), "E_plus");
    EXPECT_THROW(side_from_name("up"), std::invalid_argument);
}

TEST(Cone, LinkNormalIsUnitTangentAndPointsIntoEplus) {
    const ConeParams c = ConeParams::make(2, 4);
    for (double th : {0.0, 0.4, 1.3, 2.9}) {
        const AmbientPoint w = link_point(c, th);
        ASSERT_TRUE(on_link(w, c));
        const AmbientPoint nu = link_normal(w, c);
        EXPECT_NEAR(nu.norm(), 1.0, 1e-14);
        EXPECT_NEAR(w.x.dot(nu.x) + w.y.dot(nu.y), 0.0, 1e-14);
        AmbientPoint pushed{w.x + 1e-3 * nu.x, w.y + 1e-3 * nu.y};
        EXPECT_EQ(side_classify(pushed, c), Side::E_plus);
    }
}

TEST(Cone, SphericalExpStaysOnSphere) {
    const ConeParams c = ConeParams::make(3, 4);
    const AmbientPoint w = link_point(c, 0.9);
    for (double t : {-0.5, 0.1, 1.2}) EXPECT_NEAR(spherical_exp(w, t, c).norm(), 1.0, 1e-14);
    EXPECT_THROW(spherical_exp(w, 2.0, c), std::invalid_argument);
}

TEST(Cone, TMapPreservesLinkForEqualFactors) {
    const ConeParams c = ConeParams::make(3, 3);
    const AmbientPoint w = link_point(c, 0.3);
    const AmbientPoint t = T_map(w);
    EXPECT_TRUE(on_link(t, c));
    const AmbientPoint tt = T_map(t);
    EXPECT_NEAR((tt.x + w.x).norm() + (tt.y + w.y).norm(), 0.0, 1e-15);
    const ConeParams d = ConeParams::make(2, 4);
    EXPECT_THROW(T_map(link_point(d, 0.3)), std::invalid_argument);
}
