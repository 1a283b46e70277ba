#include "conefoliate/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conefoliate/spectrum.hpp"

namespace conefoliate {

ThetaQuadrature gauss_theta(int p, int count) {
    if (count < 1) throw std::invalid_argument("gauss_theta: count must be positive");
    if (p < 1) throw std::invalid_argument("gauss_theta: p must be positive");
    // Golub-Welsch on the Gegenbauer recurrence, x = cos(theta)
    const double alpha = 0.5 * (p - 1);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(count, count);
    for (int k = 1; k < count; ++k) {
        double b;
        if (alpha == 0.0 && k == 1)
            b = 0.5;  // Chebyshev first step
        else
            b = k * (k + 2.0 * alpha - 1.0) / (4.0 * (k + alpha) * (k + alpha - 1.0));
        J(k, k - 1) = J(k - 1, k) = std::sqrt(b);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 =
        std::sqrt(std::numbers::pi) * std::tgamma(alpha + 0.5) / std::tgamma(alpha + 1.0);
    ThetaQuadrature q;
    q.theta.resize(count);
    q.weight.resize(count);
    for (int i = 0; i < count; ++i) {
        // eigenvalues ascend in x, so theta descends; flip
        const int src = count - 1 - i;
        q.theta(i) = std::acos(std::clamp(es.eigenvalues()(src), -1.0, 1.0));
        const double v0 = es.eigenvectors()(0, src);
        q.weight(i) = mu0 * v0 * v0;
    }
    return q;
}

ZonalBasis::ZonalBasis(const ConeParams& cone, int count)
    : cone_(cone), quad_(gauss_theta(cone.p, count)) {
    measure_ = sphere_area(cone.p - 1) * std::pow(cone.cp(), cone.p) * sphere_area(cone.q) *
               std::pow(cone.cq(), cone.q);
    phi_.resize(count, count);
    Eigen::MatrixXd dphi(count, count), d2phi(count, count);
    for (int i = 0; i < count; ++i)
        for (int j = 1; j <= count; ++j)
            axisym_eigenfunction_d(j, quad_.theta(i), cone, phi_(i, j - 1), dphi(i, j - 1),
                                   d2phi(i, j - 1));
    analysis_.resize(count, count);
    for (int j = 0; j < count; ++j)
        for (int i = 0; i < count; ++i) analysis_(j, i) = measure_ * quad_.weight(i) * phi_(i, j);
    d1_ = dphi * analysis_;
    d2_ = d2phi * analysis_;
}

double ZonalBasis::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    double s = 0;
    for (int i = 0; i < size(); ++i) s += quad_.weight(i) * a(i) * b(i);
    return measure_ * s;
}

}  // namespace conefoliate
