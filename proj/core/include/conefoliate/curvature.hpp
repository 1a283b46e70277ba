#pragma once

#include <functional>

#include <Eigen/Dense>

#include "conefoliate/axisym.hpp"

namespace conefoliate {

/// Derivatives of a height function at one point, in (xi, theta).
struct HeightJet {
    double u = 0, us = 0, ut = 0, uss = 0, ust = 0, utt = 0;
};

/// Mean curvature (minus the divergence of the unit normal oriented like the
/// base normal) of graph(u) at one point, from the orbit-space reduction.
double mean_curvature_point(const ConeParams& cone, const BaseNode& node, double theta,
                            const HeightJet& u);

/// Row coefficients of the linearization at u = 0:
/// L u = A u_xixi + B u_xi + C u + D (u_thth + (p-1) cot(theta) u_th).
struct LinearCoeffs {
    Eigen::VectorXd A, B, C, D;
    double theta_spread = 0;  ///< max relative variation of A, B, C, D over theta
    double cross_term = 0;    ///< max relative size of the u_xitheta coefficient
    double cot_defect = 0;    ///< max relative mismatch of the u_theta coefficient
};

class CurvatureOperator {
public:
    explicit CurvatureOperator(const AxisymGrid& grid);

    const AxisymGrid& grid() const { return grid_; }
    const LinearCoeffs& coeffs() const { return coeffs_; }
    int first_row() const { return grid_.base->first_row(); }
    int last_row() const { return grid_.rows() - 2; }

    /// Interior rows [first_row, last_row]; other rows are zero.
    AxisymField M(const AxisymField& u) const;
    AxisymField L(const AxisymField& u) const;
    AxisymField Q(const AxisymField& u) const;

    /// Sign of the reflected ghost value for zonal mode j at the tip.
    double ghost_sign(int j) const;
    /// Three-point stencil of mode j at row i (ghost folded in at a tip).
    void stencil(int j, int i, double& lo, double& mid, double& hi) const;
    /// L_j a for one zonal mode; interior rows filled.
    Eigen::VectorXd apply_mode(int j, const Eigen::VectorXd& a) const;
    /// |A|^2 of the base at row i.
    double A2(int i) const { return coeffs_.C(i); }

    /// Height derivatives of u at row i, theta node k (central differences in
    /// xi, spectral in theta).
    HeightJet height_jet(const AxisymField& u, int i, int k) const;

private:
    AxisymGrid grid_;
    LinearCoeffs coeffs_;
    Eigen::VectorXd eig_;  ///< unit-sphere eigenvalue per zonal mode
};

AxisymField mean_curvature(const AxisymField& u);
AxisymField linearized_L(const AxisymField& u);
AxisymField Q_remainder(const AxisymField& u);

/// Orbit-space parametrization (xi, theta) -> (x1, |x_perp|, |y|).
using OrbitChart = std::function<Eigen::Vector3d(double, double)>;

/// Graph of u over the cubic Taylor curve of a base node at xi0, with the
/// exact normal of that curve.
OrbitChart local_graph_chart(const BaseNode& node, double xi0,
                             std::function<double(double, double)> u);

/// Mean curvature from the full n x n fundamental forms of the embedded
/// hypersurface in R^{p+q+2}, by central differences in an explicit chart;
/// the normal is oriented to agree with orbit_normal.
double embedding_oracle(const ConeParams& cone, const OrbitChart& chart, double xi, double theta,
                        const Eigen::Vector3d& orbit_normal, double step = 1e-3);

}  // namespace conefoliate
