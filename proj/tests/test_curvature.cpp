#include <gtest/gtest.h>

#include <cmath>

#include "conefoliate/curvature.hpp"
#include "conefoliate/glued.hpp"

using namespace conefoliate;

namespace {
const ConeParams kCone = ConeParams::make(3, 3);

AxisymGrid cone_grid() {
    return AxisymGrid(std::make_shared<const BaseSurface>(BaseSurface::make_cone(kCone, 1e-2, 1.0, 120)), 8);
}
AxisymGrid leaf_grid() {
    static const auto unit = unit_leaf(kCone, 1e3);
    return AxisymGrid(std::make_shared<const BaseSurface>(BaseSurface::make_leaf(*unit, 1.0, 100.0, 160)), 8);
}

AxisymField smooth_field(const AxisymGrid& g, double amp) {
    return sample_nodes(g, [&](int i, double th) {
        const double r = g.base->r(i);
        return amp * r * (0.3 + 0.2 * std::cos(th) + 0.1 * std::cos(2 * th)) / (1 + r);
    });
}
}

TEST(Curvature, ConeAndLeafAreMinimal) {
    for (const AxisymGrid& g : {cone_grid(), leaf_grid()}) {
        const CurvatureOperator op(g);
        const AxisymField m = op.M(AxisymField(g));
        double worst = 0;
        for (int i = op.first_row(); i <= op.last_row(); ++i)
            worst = std::max(worst, g.base->r(i) * m.v.row(i).cwiseAbs().maxCoeff());
        EXPECT_LT(worst, 1e-7);
    }
}

TEST(Curvature, LinearizationMatchesDirectionalDerivative) {
    for (const AxisymGrid& g : {cone_grid(), leaf_grid()}) {
        const CurvatureOperator op(g);
        const AxisymField u = smooth_field(g, 1.0);
        const double eps = 1e-4;
        AxisymField up(g, eps * u.v), um(g, -eps * u.v);
        const Eigen::MatrixXd fd = (op.M(up).v - op.M(um).v) / (2 * eps);
        const Eigen::MatrixXd lu = op.L(u).v;
        const double scale = lu.cwiseAbs().maxCoeff();
        EXPECT_LT((fd - lu).cwiseAbs().maxCoeff(), 1e-6 * scale);
    }
}

TEST(Curvature, RemainderIsQuadratic) {
    const AxisymGrid g = cone_grid();
    const CurvatureOperator op(g);
    const AxisymField u = smooth_field(g, 1.0);
    const double q1 = op.Q(AxisymField(g, 1e-2 * u.v)).v.cwiseAbs().maxCoeff();
    const double q2 = op.Q(AxisymField(g, 5e-3 * u.v)).v.cwiseAbs().maxCoeff();
    EXPECT_NEAR(std::log2(q1 / q2), 2.0, 0.1);
}

TEST(Curvature, OperatorCoefficientsAreZonal) {
    const CurvatureOperator op(leaf_grid());
    EXPECT_LT(op.coeffs().theta_spread, 1e-10);
    EXPECT_LT(op.coeffs().cross_term, 1e-10);
    EXPECT_LT(op.coeffs().cot_defect, 1e-10);
}

TEST(Curvature, ApplyModeMatchesFieldOperator) {
    const AxisymGrid g = leaf_grid();
    const CurvatureOperator op(g);
    const int j = 3;
    Eigen::VectorXd a(g.rows());
    for (int i = 0; i < g.rows(); ++i) a(i) = 1.0 / (1 + g.base->r(i) * g.base->r(i));
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    c.col(j - 1) = a;
    const Eigen::MatrixXd lm = op.L(AxisymField::from_modes(g, c)).modes();
    const Eigen::VectorXd la = op.apply_mode(j, a);
    for (int i = op.first_row(); i <= op.last_row(); ++i) EXPECT_NEAR(lm(i, j - 1), la(i), 1e-9 * (1 + std::abs(la(i))));
}

TEST(Curvature, PointFormulaAgreesWithEmbeddingOracle) {
    const AxisymGrid g = cone_grid();
    const BaseNode& nd = g.base->nodes[60];
    const double xi0 = g.base->xi(60), th = 0.9;
    auto u = [&](double xi, double t) {
        const double d = xi - xi0;
        return 0.02 * nd.r * (1 + std::cos(t)) * (1 + 0.5 * d + 0.25 * d * d);
    };
    HeightJet J;
    J.u = 0.02 * nd.r * (1 + std::cos(th));
    J.us = 0.5 * J.u;
    J.uss = 0.5 * J.u;
    J.ut = -0.02 * nd.r * std::sin(th);
    J.ust = 0.5 * J.ut;
    J.utt = -0.02 * nd.r * std::cos(th);
    const double m = mean_curvature_point(kCone, nd, th, J);
    const Eigen::Vector3d nrm(nd.n1.value() * std::cos(th), nd.n1.value() * std::sin(th), nd.n2.value());
    const double h = embedding_oracle(kCone, local_graph_chart(nd, xi0, u), xi0, th, nrm, 1e-3);
    EXPECT_NEAR(m, h, 1e-5 / nd.r);
}
