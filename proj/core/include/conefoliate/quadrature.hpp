#pragma once

#include <Eigen/Dense>

#include "conefoliate/cone.hpp"

namespace conefoliate {

/// Gauss nodes in theta for the weight sin^{p-1}(theta) on [0, pi].
struct ThetaQuadrature {
    Eigen::VectorXd theta;   ///< ascending
    Eigen::VectorXd weight;  ///< int_0^pi F sin^{p-1} ~ sum w_i F(theta_i)
};

ThetaQuadrature gauss_theta(int p, int count);

/// Zonal modes j = 1..N sampled on the Gauss nodes, with L^2(link) transforms.
class ZonalBasis {
public:
    ZonalBasis() = default;
    ZonalBasis(const ConeParams& cone, int count);

    int size() const { return int(quad_.theta.size()); }
    const ThetaQuadrature& quadrature() const { return quad_; }
    const ConeParams& cone() const { return cone_; }

    /// phi(i, j-1) = phi_j(theta_i)
    const Eigen::MatrixXd& phi() const { return phi_; }
    /// Nodal values -> L^2(link) coefficients <u, phi_j>.
    const Eigen::MatrixXd& analysis() const { return analysis_; }
    /// Nodal first and second theta-derivative matrices.
    const Eigen::MatrixXd& d1() const { return d1_; }
    const Eigen::MatrixXd& d2() const { return d2_; }

    Eigen::VectorXd to_modes(const Eigen::VectorXd& nodal) const { return analysis_ * nodal; }
    Eigen::VectorXd to_nodes(const Eigen::VectorXd& modes) const { return phi_ * modes; }

    /// L^2(link) inner product of two nodal functions.
    double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

private:
    ConeParams cone_;
    ThetaQuadrature quad_;
    double measure_ = 1.0;
    Eigen::MatrixXd phi_, analysis_, d1_, d2_;
};

}  // namespace conefoliate
