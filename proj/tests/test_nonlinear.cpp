#include <gtest/gtest.h>

#include <cmath>

#include "conefoliate/nonlinear.hpp"

using namespace conefoliate;

namespace {
const ConeParams kCone = ConeParams::make(3, 3);

struct Fixture {
    SolveConfig cfg;
    GluedSurface S;
    std::unique_ptr<GluedLinearSystem> sys;
    Fixture() {
        cfg.grid.N = 200;
        S = build_approx_surface(kCone, cfg.lambda, cfg.grid);
        sys = std::make_unique<GluedLinearSystem>(S, cfg.grid);
    }
};
const Fixture& fx() {
    static const Fixture f;
    return f;
}

const ThetaContext& ctx() {
    static const ThetaContext c(ThetaConfig{});
    return c;
}
}

TEST(RightInverse, ZeroAndLinearity) {
    const GluedLinearSystem& sys = *fx().sys;
    EXPECT_EQ(right_inverse_R(sys, sys.zero_data()).v.cwiseAbs().maxCoeff(), 0.0);
    const LinearData a = random_linear_data(sys, 3), b = random_linear_data(sys, 4);
    LinearData c = a;
    c.f.v = a.f.v + b.f.v;
    c.g = a.g + b.g;
    const Eigen::MatrixXd ra = right_inverse_R(sys, a).v, rb = right_inverse_R(sys, b).v;
    const Eigen::MatrixXd rc = right_inverse_R(sys, c).v;
    EXPECT_LT((rc - ra - rb).cwiseAbs().maxCoeff(), 1e-8 * rc.cwiseAbs().maxCoeff());
}

TEST(RightInverse, MatchesDirectSolve) {
    const GluedLinearSystem& sys = *fx().sys;
    LinearData d = random_linear_data(sys, 9);
    d.f.v.row(d.f.rows() - 1).setZero();
    for (int j = 1; j <= sys.modes(); ++j)
        if (sys.low(j)) d.g(j - 1) = 0;
    NeumannInfo info;
    const Eigen::MatrixXd r = right_inverse_R(sys, d, &info).v;
    const Eigen::MatrixXd s = sys.direct_solve(d).v;
    EXPECT_LT(info.relative_residual, 1e-10);
    EXPECT_LT((r - s).cwiseAbs().maxCoeff(), 1e-8 * s.cwiseAbs().maxCoeff());
}

TEST(Picard, CertificateForSmallGraphicalData) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(fx().sys->modes());
    g(2) = 2e-3;
    const PicardResult r = picard_iterate(*fx().sys, g, fx().cfg);
    EXPECT_TRUE(r.report.converged) << r.report.failure;
    EXPECT_LE(r.report.boundary_error, 1e-12);
    EXPECT_LE(r.report.max_contraction_tail, 0.5);
    EXPECT_LE(r.report.final_residual, 1e-8);
    // boundary trace of the graphical mode is exact
    const double tr = r.u.modes()(r.u.rows() - 1, 2);
    EXPECT_NEAR(tr, 2e-3, 1e-12);
}

TEST(Picard, RejectsNonZonalData) {
    EXPECT_THROW(zonal_coefficients({{make_mode(2, 2, kCone), 1.0}}, 8), std::invalid_argument);
    EXPECT_THROW(zonal_coefficients({{make_mode(9, 1, kCone), 1.0}}, 8), std::invalid_argument);
}

TEST(Transfer, ZeroFieldIsTheConeGap) {
    const LeafTransfer t = transfer_to_leaf(fx().S, AxisymField(fx().S.grid));
    EXPECT_LT(t.inner_identity_error, 1e-12);
    // the gap between S~ and the leaf is axisymmetric in theta: constant trace difference
    EXPECT_LT(t.boundary_spread, 1e-10 * (1 + std::abs(t.boundary_constant)));
    const Eigen::MatrixXd m = t.height.modes();
    const int last = t.height.rows() - 1;
    for (int j = 2; j < m.cols(); ++j) EXPECT_LT(std::abs(m(last, j)), 1e-10 * (1 + std::abs(m(last, 0))));
}

TEST(Transfer, InnerRegionIsIdentity) {
    const AxisymGrid& g = fx().S.grid;
    const AxisymField u = sample_nodes(g, [&](int i, double th) { return 1e-3 * g.base->r(i) * std::cos(th); });
    const LeafTransfer t = transfer_to_leaf(fx().S, u);
    EXPECT_LT(t.inner_identity_error, 1e-12);
}

TEST(GTransfer, IdentityAtZeroTheta) {
    const ZonalBasis& z = ctx().zonal();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(z.size());
    g(2) = 1e-3;
    g(4) = -5e-4;
    const Eigen::VectorXd out = g_transfer(kCone, z, g, ThetaParams{});
    EXPECT_LT((out - g).cwiseAbs().maxCoeff(), 1e-14);
    // a pure leaf change keeps the link fixed
    const Eigen::VectorXd out2 = g_transfer(kCone, z, g, ThetaParams{0, 1e-6});
    EXPECT_LT((out2 - g).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(GTransfer, TranslationOfZeroDataIsMinusConeHeight) {
    const ZonalBasis& z = ctx().zonal();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(z.size());
    for (double a : {1e-4, 1e-5}) {
        const Eigen::VectorXd gt = g_transfer(kCone, z, zero, ThetaParams{a, 0});
        const Eigen::VectorXd h = z.to_modes(translated_link_height(kCone, z, a));
        EXPECT_LT((gt + h).cwiseAbs().maxCoeff(), 10 * a * a);
        // only low modes at first order
        EXPECT_LT(gt.tail(z.size() - 2).cwiseAbs().maxCoeff(), 10 * a * a);
    }
}

TEST(GTransfer, ErrorScalesLikeEpsTimesEtaPlusEps) {
    const ZonalBasis& z = ctx().zonal();
    Eigen::VectorXd gh = Eigen::VectorXd::Zero(z.size());
    gh(2) = 1.0;
    gh(3) = 0.5;
    std::vector<double> ratio;
    for (double eta : {1e-3, 1e-4})
        for (double eps : {1e-3, 1e-4}) {
            const Eigen::VectorXd g = eta * gh;
            const Eigen::VectorXd e = g_transfer(kCone, z, g, ThetaParams{eps, 0}) - g +
                                      z.to_modes(translated_link_height(kCone, z, eps));
            ratio.push_back(e.cwiseAbs().maxCoeff() / (eps * (eta + eps)));
        }
    const double hi = *std::max_element(ratio.begin(), ratio.end());
    const double lo = *std::min_element(ratio.begin(), ratio.end());
    EXPECT_LT(hi, 100.0);
    EXPECT_LT(hi / lo, 20.0);
}

TEST(Theta, VanishesAtOrigin) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(ctx().zonal().size());
    const ThetaEval e = theta_map(ctx(), zero, ThetaParams{});
    EXPECT_LT(e.value.norm(), 1e-8);
}

TEST(Theta, IdentityOnGroupDirections) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(ctx().zonal().size());
    for (ThetaParams th : {ThetaParams{2e-6, 0}, ThetaParams{0, 2e-6}, ThetaParams{-1e-6, -1e-6}}) {
        const ThetaParams v = theta_map(ctx(), zero, th).value;
        EXPECT_LT(std::abs(v.a_axis - th.a_axis) + std::abs(v.lambda - th.lambda), 0.1 * th.norm());
    }
}

TEST(NearCone, ZeroDataGivesZero) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(ctx().zonal().size());
    const NearConeResult r = solve_near_cone(ctx(), zero);
    EXPECT_TRUE(r.report.converged);
    EXPECT_LT(r.theta.norm(), 1e-12);
    // theta = 0 is carried by the floor leaf; u is the correction at that scale
    double lam;
    Side side;
    ctx().leaf_of(0.0, lam, side);
    EXPECT_LT(r.eval.picard.u.sup(), 0.1 * lam);
}

TEST(NearCone, DilationDataFindsTheLeaf) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(ctx().zonal().size());
    const double ell = 3e-6;
    g(0) = ctx().dilation_coefficient(ell);
    const NearConeResult r = solve_near_cone(ctx(), g);
    ASSERT_TRUE(r.report.converged) << r.report.failure;
    EXPECT_LT(std::abs(r.theta.a_axis), 1e-3 * ell);
    EXPECT_NEAR(r.theta.lambda, ell, 1e-2 * ell);
    EXPECT_LE(r.report.residuals.back(), 1e-6);
}
