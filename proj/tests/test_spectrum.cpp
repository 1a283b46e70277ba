#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "conefoliate/quadrature.hpp"
#include "conefoliate/spectrum.hpp"

using namespace conefoliate;

TEST(Rational, Arithmetic) {
    const Rational a(1, 2), b(1, 3);
    EXPECT_EQ(a + b, Rational(5, 6));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 6));
    EXPECT_EQ(a / b, Rational(3, 2));
    EXPECT_EQ(Rational(4, -8), Rational(-1, 2));
    Rational r;
    EXPECT_TRUE(rational_sqrt(Rational(9, 4), r));
    EXPECT_EQ(r, Rational(3, 2));
    EXPECT_FALSE(rational_sqrt(Rational(2), r));
}

TEST(Spectrum, SimonsConeLowEigenvalues) {
    // (3,3): n = 7
    const ConeParams c = ConeParams::make(3, 3);
    EXPECT_EQ(mu_exact(1, 1, c), Rational(-6));
    EXPECT_EQ(mu_exact(2, 1, c), Rational(0));
    EXPECT_EQ(mu_exact(1, 2, c), Rational(0));
    EXPECT_EQ(mu_exact(2, 2, c), Rational(6));
    EXPECT_EQ(mu_exact(3, 1, c), Rational(10));
    const Mode d = make_mode(1, 1, c);
    EXPECT_EQ(d.cls, ModeClass::dilation);
    EXPECT_DOUBLE_EQ(d.gamma_plus, -2.0);
    EXPECT_DOUBLE_EQ(d.gamma_minus, -3.0);
    const Mode t = make_mode(2, 1, c);
    EXPECT_EQ(t.cls, ModeClass::translation);
    EXPECT_DOUBLE_EQ(t.gamma_plus, 0.0);
    EXPECT_DOUBLE_EQ(t.gamma_minus, -5.0);
    const Mode r = make_mode(2, 2, c);
    EXPECT_EQ(r.cls, ModeClass::rotation);
    EXPECT_DOUBLE_EQ(r.gamma_plus, 1.0);
    EXPECT_DOUBLE_EQ(r.gamma_minus, -6.0);
    const Mode g = make_mode(3, 1, c);
    EXPECT_EQ(g.cls, ModeClass::graphical);
    EXPECT_NEAR(g.gamma_plus, -2.5 + std::sqrt(6.25 + 10.0), 1e-14);
}

TEST(Spectrum, GammaExactAgreesWithClosedForm) {
    for (auto [p, q] : {std::pair{2, 4}, {4, 2}, {3, 4}, {4, 4}}) {
        const ConeParams c = ConeParams::make(p, q);
        for (const Mode& m : enumerate_modes(c, 40)) {
            const ExactGamma g = gamma_exact(m.j, m.k, c);
            const double disc = (c.n - 2) * (c.n - 2) / 4.0 + m.mu;
            EXPECT_NEAR(g.value(+1), -(c.n - 2) / 2.0 + std::sqrt(disc), 1e-12);
            EXPECT_NEAR(g.value(-1), -(c.n - 2) / 2.0 - std::sqrt(disc), 1e-12);
        }
    }
}

TEST(Spectrum, EnumerationIsSortedAndLowModesFirst) {
    const ConeParams c = ConeParams::make(2, 4);
    const auto modes = enumerate_modes(c, 50);
    ASSERT_GE(modes.size(), 5u);
    for (std::size_t i = 1; i < modes.size(); ++i) EXPECT_LE(modes[i - 1].mu, modes[i].mu);
    bool seen_graphical = false;
    for (const auto& m : modes) {
        if (!m.low()) seen_graphical = true;
        else EXPECT_FALSE(seen_graphical);
    }
}

TEST(Spectrum, HarmonicDimensions) {
    EXPECT_EQ(harmonic_dimension(0, 3), 1);
    EXPECT_EQ(harmonic_dimension(1, 3), 4);
    EXPECT_EQ(harmonic_dimension(2, 3), 9);
    EXPECT_EQ(harmonic_dimension(2, 2), 5);
}

TEST(Spectrum, ProjectionDropsLowModes) {
    const ConeParams c = ConeParams::make(3, 3);
    const BoundaryData g = {{make_mode(1, 1, c), 1.0}, {make_mode(2, 1, c), 2.0}, {make_mode(3, 1, c), 3.0}};
    const BoundaryData pg = project_Pi(g);
    ASSERT_EQ(pg.size(), 1u);
    EXPECT_EQ(pg[0].first.j, 3);
}

TEST(Spectrum, ConstantModeNormalization) {
    // |S^3(r)| = 2 pi^2 r^3, both radii sqrt(1/2): |link| = pi^4 / 2
    const ConeParams c = ConeParams::make(3, 3);
    EXPECT_NEAR(link_area(c), std::pow(std::numbers::pi, 4) / 2, 1e-12);
    EXPECT_NEAR(axisym_eigenfunction(1, 0.3, c), 0.14329, 1e-5);
}

TEST(Spectrum, ZonalBasisIsOrthonormal) {
    const ConeParams c = ConeParams::make(2, 4);
    const ZonalBasis z(c, 8);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            EXPECT_NEAR(z.inner(z.phi().col(a), z.phi().col(b)), a == b ? 1.0 : 0.0, 1e-12);
}

TEST(Spectrum, EigenfunctionDerivativesMatchDifferences) {
    const ConeParams c = ConeParams::make(3, 3);
    const double th = 0.8, h = 1e-5;
    for (int j = 1; j <= 5; ++j) {
        double f, df, d2f;
        axisym_eigenfunction_d(j, th, c, f, df, d2f);
        const double fp = axisym_eigenfunction(j, th + h, c), fm = axisym_eigenfunction(j, th - h, c);
        EXPECT_NEAR(df, (fp - fm) / (2 * h), 1e-7);
        EXPECT_NEAR(d2f, (fp - 2 * f + fm) / (h * h), 1e-4);
    }
}

TEST(Spectrum, EigenfunctionSatisfiesLinkEigenEquation) {
    // -Delta_link phi_j = (lambda_j / cp^2) phi_j on the scaled S^p factor
    const ConeParams c = ConeParams::make(2, 4);
    const double th = 1.1;
    for (int j = 1; j <= 4; ++j) {
        double f, df, d2f;
        axisym_eigenfunction_d(j, th, c, f, df, d2f);
        const double lap = d2f + (c.p - 1) * std::cos(th) / std::sin(th) * df;
        EXPECT_NEAR(-lap, unit_sphere_eigenvalue(j, c.p) * f, 1e-9);
    }
}
