#include "conefoliate/cone.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace conefoliate {

bool is_minimizing(int p, int q) {
    if (p + q > 6) return true;
    return (p == 3 && q == 3) || (p == 2 && q == 4) || (p == 4 && q == 2);
}

ConeParams ConeParams::make(int p, int q, bool require_minimizing) {
    if (p < 1 || q < 1)
        throw std::invalid_argument("cone: p and q must be positive");
    if (require_minimizing && (p < 2 || q < 2))
        throw std::invalid_argument("cone: p, q < 2 not supported for minimizing cones");
    ConeParams c;
    c.p = p;
    c.q = q;
    c.n = p + q + 1;
    c.minimizing = is_minimizing(p, q);
    if (require_minimizing && !c.minimizing)
        throw std::invalid_argument("cone: (" + std::to_string(p) + "," + std::to_string(q) +
                                    ") is not area-minimizing");
    return c;
}

double ConeParams::cp() const { return std::sqrt(double(p) / double(n - 1)); }
double ConeParams::cq() const { return std::sqrt(double(q) / double(n - 1)); }

double AmbientPoint::norm() const { return std::sqrt(x.squaredNorm() + y.squaredNorm()); }

const char* side_name(Side s) {
    switch (s) {
        case Side::E_plus: return "E_plus";
        case Side::E_minus: return "E_minus";
        default: return "on_cone";
    }
}

Side side_from_name(const std::string& s) {
    if (s == "E_plus" || s == "plus" || s == "+") return Side::E_plus;
    if (s == "E_minus" || s == "minus" || s == "-") return Side::E_minus;
    throw std::invalid_argument("unknown side '" + s + "'");
}

static void check_dims(const AmbientPoint& pt, const ConeParams& cone) {
    if (pt.x.size() != cone.p + 1 || pt.y.size() != cone.q + 1)
        throw std::invalid_argument("ambient point dimension mismatch");
}

Side side_classify(const AmbientPoint& pt, const ConeParams& cone, double tol) {
    check_dims(pt, cone);
    const double x2 = pt.x.squaredNorm(), y2 = pt.y.squaredNorm();
    const double f = cone.q * x2 - cone.p * y2;
    const double thr = tol * (x2 + y2);
    if (f > thr) return Side::E_plus;
    if (f < -thr) return Side::E_minus;
    return Side::on_cone;
}

AmbientPoint link_point(const ConeParams& cone, double theta) {
    AmbientPoint w{Eigen::VectorXd::Zero(cone.p + 1), Eigen::VectorXd::Zero(cone.q + 1)};
    w.x(0) = cone.cp() * std::cos(theta);
    w.x(1) = cone.cp() * std::sin(theta);
    w.y(0) = cone.cq();
    return w;
}

bool on_link(const AmbientPoint& w, const ConeParams& cone, double tol) {
    check_dims(w, cone);
    return std::abs(w.x.norm() - cone.cp()) <= tol && std::abs(w.y.norm() - cone.cq()) <= tol;
}

AmbientPoint link_normal(const AmbientPoint& w, const ConeParams& cone, double tol) {
    if (!on_link(w, cone, tol)) throw std::invalid_argument("link_normal: point not on the link");
    const double a = std::sqrt(double(cone.q) / cone.p);
    return {a * w.x, -w.y / a};
}

AmbientPoint spherical_exp(const AmbientPoint& w, double t, const ConeParams& cone) {
    if (!(std::abs(t) < std::numbers::pi / 2))
        throw std::invalid_argument("spherical_exp: |t| must be below pi/2");
    const AmbientPoint nu = link_normal(w, cone);
    return {std::cos(t) * w.x + std::sin(t) * nu.x, std::cos(t) * w.y + std::sin(t) * nu.y};
}

AmbientPoint T_map(const AmbientPoint& w) {
    if (w.x.size() != w.y.size())
        throw std::invalid_argument("T_map: factors must have equal dimension");
    return {-w.y, w.x};
}

}  // namespace conefoliate
