#include <gtest/gtest.h>

#include <cmath>

#include "conefoliate/glued.hpp"

using namespace conefoliate;

namespace {
const ConeParams kCone = ConeParams::make(3, 3);

struct Fixture {
    GlueConfig gc;
    GluedSurface S;
    std::unique_ptr<GluedLinearSystem> sys;
    Fixture() {
        gc.N = 200;
        S = build_approx_surface(kCone, 1e-3, gc);
        sys = std::make_unique<GluedLinearSystem>(S, gc);
    }
};
const Fixture& fx() {
    static const Fixture f;
    return f;
}

LinearData masked(const GluedLinearSystem& sys, LinearData d) {
    d.f.v.row(d.f.rows() - 1).setZero();
    for (int j = 1; j <= sys.modes(); ++j)
        if (sys.low(j)) d.g(j - 1) = 0;
    return d;
}
}

TEST(Glued, CutoffEndpoints) {
    const double lam = 1e-3;
    EXPECT_DOUBLE_EQ(cutoff_beta(std::pow(lam, 0.5), lam, 0.5, 0.7), 0.0);
    EXPECT_DOUBLE_EQ(cutoff_beta(std::pow(lam, 0.7), lam, 0.5, 0.7), 1.0);
    const double mid = cutoff_beta(std::pow(lam, 0.6), lam, 0.5, 0.7);
    EXPECT_NEAR(mid, 0.5, 1e-12);
    EXPECT_THROW(cutoff_beta(0.1, 2.0, 0.5, 0.7), std::invalid_argument);
}

TEST(Glued, CutoffOrdering) {
    const GluedSurface& S = fx().S;
    EXPECT_NO_THROW(S.validate());
    EXPECT_NEAR(S.r_lambda, std::pow(1e-3, 6.0 / 7.0), 1e-15);
    EXPECT_DOUBLE_EQ(S.beta2(0.5 * std::pow(1e-3, S.a_plus)), 0.0);
    EXPECT_DOUBLE_EQ(S.beta2(S.r_lambda * 1.01), 1.0);
    EXPECT_DOUBLE_EQ(S.beta1(std::pow(1e-3, S.a_mid()) * 0.99), 1.0);
    EXPECT_DOUBLE_EQ(S.beta1(std::pow(1e-3, S.a_minus) * 1.01), 0.0);
    for (double r : {1e-4, S.r_lambda, 1.5 * S.r_lambda, 0.5}) EXPECT_DOUBLE_EQ(S.gamma1(r) + S.gamma2(r), 1.0);
}

TEST(Glued, BaseJoinsLeafAndCone) {
    const GluedSurface& S = fx().S;
    const BaseSurface& b = *S.base;
    EXPECT_EQ(b.kind, BaseKind::glued);
    EXPECT_NEAR(b.r(b.size() - 1), 1.0, 1e-12);
    // beyond 2 r_lambda the base lies on the cone line
    for (int i = 0; i < b.size(); ++i) {
        if (b.r(i) < 2.5 * S.r_lambda) continue;
        const double X = b.nodes[i].X.value(), Y = b.nodes[i].Y.value();
        EXPECT_NEAR(std::atan2(Y, X), std::atan(1.0), 1e-12);
    }
    EXPECT_DOUBLE_EQ(S.blend_height(3 * S.r_lambda), 0.0);
}

TEST(Glued, DirectSolveInvertsOperator) {
    const GluedLinearSystem& sys = *fx().sys;
    const LinearData d = masked(sys, random_linear_data(sys, 5));
    const AxisymField u = sys.direct_solve(d);
    const LinearData back = masked(sys, sys.LL(u));
    const double scale = d.f.v.cwiseAbs().maxCoeff();
    const int N = d.f.rows();
    EXPECT_LT((back.f.v.topRows(N - 1) - d.f.v.topRows(N - 1)).cwiseAbs().maxCoeff(), 1e-8 * scale);
    EXPECT_LT((back.g - d.g).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Glued, ZeroDataGivesZero) {
    const GluedLinearSystem& sys = *fx().sys;
    LinearData d = sys.zero_data();
    d.g(0) = 3.0;  // obstructed, ignored
    EXPECT_EQ(sys.direct_solve(d).v.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(sys.P(d).v.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Glued, ApproximateInverseIsLinear) {
    const GluedLinearSystem& sys = *fx().sys;
    const LinearData a = random_linear_data(sys, 11), b = random_linear_data(sys, 12);
    LinearData c = a;
    c.f.v = 2 * a.f.v - b.f.v;
    c.g = 2 * a.g - b.g;
    const Eigen::MatrixXd diff = sys.P(c).v - 2 * sys.P(a).v + sys.P(b).v;
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-10 * (1 + sys.P(a).v.cwiseAbs().maxCoeff()));
}

TEST(Glued, DefectBelowOne) {
    const DefectReport r = measure_defect(*fx().sys);
    EXPECT_LT(r.defect, 1.0);
    EXPECT_GT(r.defect, 0.0);
}

TEST(Glued, SplusGraphicalModesDecay) {
    const auto unit = unit_leaf(kCone, 1e3);
    const BaseSurface b = BaseSurface::make_leaf(*unit, 1.0, 1e3, 200);
    const auto zonal = std::make_shared<const ZonalBasis>(kCone, 8);
    const SplusSolver s(unit, b.h, 200, zonal);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(200);
    for (int i = 0; i < 40; ++i) f(i) = 1.0;
    const Eigen::VectorXd a = s.solve_mode(3, f);
    EXPECT_LT(std::abs(a(199)), 1e-3 * a.cwiseAbs().maxCoeff());
}
