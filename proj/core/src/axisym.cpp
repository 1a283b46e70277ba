#include "conefoliate/axisym.hpp"

#include <stdexcept>

namespace conefoliate {

AxisymGrid::AxisymGrid(BasePtr b, int n_theta)
    : base(std::move(b)), zonal(std::make_shared<const ZonalBasis>(base->cone, n_theta)) {
    if (base->size() < 5 || n_theta < 5) throw std::invalid_argument("axisym grid: need at least 5x5 nodes");
}

AxisymGrid::AxisymGrid(BasePtr b, std::shared_ptr<const ZonalBasis> z)
    : base(std::move(b)), zonal(std::move(z)) {
    if (base->size() < 5 || zonal->size() < 5)
        throw std::invalid_argument("axisym grid: need at least 5x5 nodes");
}

AxisymField::AxisymField(const AxisymGrid& g)
    : grid(g), v(Eigen::MatrixXd::Zero(g.rows(), g.cols())) {}

AxisymField::AxisymField(const AxisymGrid& g, Eigen::MatrixXd values) : grid(g), v(std::move(values)) {
    if (v.rows() != g.rows() || v.cols() != g.cols())
        throw std::invalid_argument("axisym field: value shape does not match the grid");
}

Eigen::MatrixXd AxisymField::modes() const { return v * grid.zonal->analysis().transpose(); }

AxisymField AxisymField::from_modes(const AxisymGrid& g, const Eigen::MatrixXd& coeffs) {
    if (coeffs.rows() != g.rows() || coeffs.cols() != g.cols())
        throw std::invalid_argument("axisym field: coefficient shape does not match the grid");
    return AxisymField(g, coeffs * g.zonal->phi().transpose());
}

double AxisymField::sup(int first, int last) const {
    if (last < 0) last = rows() - 1;
    if (last < first) return 0.0;
    return v.middleRows(first, last - first + 1).cwiseAbs().maxCoeff();
}

}  // namespace conefoliate
