#pragma once

#include <memory>

#include <Eigen/Dense>

#include "conefoliate/base.hpp"
#include "conefoliate/quadrature.hpp"

namespace conefoliate {

/// Base surface together with the theta quadrature.
struct AxisymGrid {
    BasePtr base;
    std::shared_ptr<const ZonalBasis> zonal;

    AxisymGrid() = default;
    AxisymGrid(BasePtr b, int n_theta);
    AxisymGrid(BasePtr b, std::shared_ptr<const ZonalBasis> z);

    int rows() const { return base->size(); }
    int cols() const { return zonal->size(); }
    double theta(int k) const { return zonal->quadrature().theta(k); }
    bool same_as(const AxisymGrid& o) const { return base == o.base && zonal == o.zonal; }
};

/// Normal-graph height u(xi_i, theta_k) over an axisymmetric base.
struct AxisymField {
    AxisymGrid grid;
    Eigen::MatrixXd v;  ///< rows: xi nodes, cols: theta nodes

    AxisymField() = default;
    explicit AxisymField(const AxisymGrid& g);
    AxisymField(const AxisymGrid& g, Eigen::MatrixXd values);

    int rows() const { return int(v.rows()); }
    int cols() const { return int(v.cols()); }

    /// Zonal coefficients per row: result(i, j-1) = <u(xi_i, .), phi_j>.
    Eigen::MatrixXd modes() const;
    static AxisymField from_modes(const AxisymGrid& g, const Eigen::MatrixXd& coeffs);

    /// sup |u| over rows [first, last].
    double sup(int first = 0, int last = -1) const;
};

/// u_i(theta) = sum_j a_j(r_i) phi_j(theta) from a callable a(j, r).
template <class F>
AxisymField sample_modes(const AxisymGrid& g, int jmax, F&& coeff) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 1; j <= std::min(jmax, g.cols()); ++j) c(i, j - 1) = coeff(j, g.base->r(i));
    return AxisymField::from_modes(g, c);
}

/// Samples a callable u(i, theta).
template <class F>
AxisymField sample_nodes(const AxisymGrid& g, F&& fn) {
    AxisymField u(g);
    for (int i = 0; i < g.rows(); ++i)
        for (int k = 0; k < g.cols(); ++k) u.v(i, k) = fn(i, g.theta(k));
    return u;
}

}  // namespace conefoliate
