#include "conefoliate/base.hpp"

#include <cmath>
#include <stdexcept>

#include "conefoliate/cutoff.hpp"

namespace conefoliate {

std::string base_kind_name(BaseKind k) {
    switch (k) {
        case BaseKind::cone: return "cone";
        case BaseKind::leaf: return "leaf";
        case BaseKind::glued: return "glued";
    }
    return "?";
}

Eigen::VectorXd BaseSurface::rvec() const {
    Eigen::VectorXd r(size());
    for (int i = 0; i < size(); ++i) r(i) = nodes[i].r;
    return r;
}

Eigen::Vector3d orbit_point(const BaseNode& node, double theta, double u) {
    const double X = node.X.value() + u * node.n1.value();
    return {X * std::cos(theta), X * std::sin(theta), node.Y.value() + u * node.n2.value()};
}

namespace {

void finish_normal(BaseNode& nd) {
    const Jet<3> Xd = derivative(nd.X), Yd = derivative(nd.Y);
    const Jet<3> len = sqrt(Xd * Xd + Yd * Yd);
    nd.n1 = Yd / len;
    nd.n2 = -Xd / len;
}

// Node of |lambda| * unit (optionally glued to the cone) at xi.
BaseNode profile_node(const ProfileCurve& unit, double lambda, double a, double xi, bool glue,
                      double r_lambda) {
    const double sh = std::sinh(xi), ch = std::cosh(xi);
    Jet<3> sj;
    sj[0] = a * sh;
    sj[1] = a * ch;
    sj[2] = a * sh / 2;
    sj[3] = a * ch / 6;
    Jet<3> rho, U, psi;
    unit.jets_at(sj.value(), rho, U, psi);
    const double L = std::abs(lambda);
    Jet<3> R = compose(rho, sj) * L;
    Jet<3> V = compose(U, sj) * L;
    if (glue) V = V * cutoff_gamma1(R, r_lambda);
    const double cp = unit.cone.cp(), cq = unit.cone.cq();
    BaseNode nd;
    nd.X = R * cp + V * cq;
    nd.Y = R * cq - V * cp;
    nd.r = R.value();
    nd.s = L * sj.value();
    finish_normal(nd);
    return nd;
}

void check_unit(const ProfileCurve& unit, double lambda) {
    if (lambda == 0.0) throw std::invalid_argument("base: lambda = 0 is the cone");
    if ((lambda > 0) != (unit.side == Side::E_plus))
        throw std::invalid_argument("base: sign of lambda does not match the profile side");
}

BaseSurface profile_base(const ProfileCurve& unit, double lambda, double h, int N, double a,
                         bool glue, double r_lambda) {
    check_unit(unit, lambda);
    if (N < 5) throw std::invalid_argument("base: need at least 5 nodes");
    BaseSurface b;
    b.cone = unit.cone;
    b.kind = glue ? BaseKind::glued : BaseKind::leaf;
    b.lambda = lambda;
    b.r_lambda = r_lambda;
    b.map_a = a;
    b.h = h;
    b.xi0 = 0.5 * h;
    b.tip_parity = unit.side == Side::E_plus ? 1 : -1;
    const double s_top = unit.s_max();
    b.nodes.reserve(N);
    for (int i = 0; i < N; ++i) {
        const double xi = b.xi(i);
        if (a * std::sinh(xi) > s_top * (1 + 1e-12))
            throw std::out_of_range("base: grid extends beyond the shot profile; increase R_max");
        b.nodes.push_back(profile_node(unit, lambda, a, xi, glue, r_lambda));
    }
    return b;
}

double xi_at_radius(const ProfileCurve& unit, double lambda, double r_out, double a) {
    const double s = unit.s_at_rho(r_out / std::abs(lambda));
    return std::asinh(s / a);
}

}  // namespace

BaseSurface BaseSurface::make_cone(const ConeParams& cone, double r_min, double r_max, int N) {
    if (N < 5) throw std::invalid_argument("base: need at least 5 nodes");
    if (!(r_min > 0 && r_max > r_min)) throw std::invalid_argument("base: need 0 < r_min < r_max");
    BaseSurface b;
    b.cone = cone;
    b.kind = BaseKind::cone;
    b.xi0 = std::log(r_min);
    b.h = (std::log(r_max) - b.xi0) / (N - 1);
    const double cp = cone.cp(), cq = cone.cq();
    for (int i = 0; i < N; ++i) {
        const Jet<3> e = exp(Jet<3>::variable(b.xi(i)));
        BaseNode nd;
        nd.X = e * cp;
        nd.Y = e * cq;
        nd.n1 = Jet<3>(cq);
        nd.n2 = Jet<3>(-cp);
        nd.r = e.value();
        b.nodes.push_back(nd);
    }
    return b;
}

BaseSurface BaseSurface::make_leaf(const ProfileCurve& unit, double lambda, double r_out, int N,
                                   double a) {
    check_unit(unit, lambda);
    const double h = xi_at_radius(unit, lambda, r_out, a) / (N - 0.5);
    return profile_base(unit, lambda, h, N, a, false, 0.0);
}

BaseSurface BaseSurface::make_leaf_spacing(const ProfileCurve& unit, double lambda, double h,
                                           int N, double a) {
    return profile_base(unit, lambda, h, N, a, false, 0.0);
}

BaseSurface BaseSurface::make_glued(const ProfileCurve& unit, double lambda, double r_lambda,
                                    int N, double a) {
    check_unit(unit, lambda);
    if (!(2 * r_lambda < 1.0)) throw std::invalid_argument("base: gluing annulus must lie inside r < 1");
    const double h = xi_at_radius(unit, lambda, 1.0, a) / (N - 0.5);
    return profile_base(unit, lambda, h, N, a, true, r_lambda);
}

}  // namespace conefoliate
