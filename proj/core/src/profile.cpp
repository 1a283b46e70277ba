#include "conefoliate/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>

#include "conefoliate/spectrum.hpp"

namespace conefoliate {

double cone_angle(const ConeParams& cone) { return std::atan2(cone.cq(), cone.cp()); }

double profile_curvature(const ConeParams& c, double x, double y, double xdot, double ydot) {
    return c.q * xdot / y - c.p * ydot / x;
}

double profile_A2(const ConeParams& c, double x, double y, double xdot, double ydot, double kappa) {
    return kappa * kappa + c.p * (ydot / x) * (ydot / x) + c.q * (xdot / y) * (xdot / y);
}

namespace {

// Curvature in (rho, U, psi) form; the exactly cancelling rho cos(psi) term
// is dropped analytically so the far field keeps full relative precision.
template <class T>
T kappa_of(const ConeParams& c, const T& rho, const T& U, const T& psi) {
    using std::cos;
    using std::sin;
    const double cp = c.cp(), cq = c.cq();
    const T x = rho * cp + U * cq;
    const T y = rho * cq - U * cp;
    const T sp = sin(psi), cs = cos(psi);
    const double n1 = c.n - 1;
    const T num = n1 * cp * cq * (U * cs - rho * sp) + (double(c.p * c.p - c.q * c.q) / n1) * (U * sp);
    return num / (x * y);
}

ProfileState rhs(const ConeParams& c, const ProfileState& st) {
    if (st(0) * c.cp() + st(1) * c.cq() <= 0 && st(0) * c.cq() - st(1) * c.cp() <= 0)
        throw std::domain_error("profile_rhs: state at the origin");
    return {std::cos(st(2)), -std::sin(st(2)), kappa_of(c, st(0), st(1), st(2))};
}

// One Dormand-Prince step; returns the 5th-order state and the error estimate.
void dp_step(const ConeParams& c, const ProfileState& y, double h, ProfileState& out,
             ProfileState& err) {
    const ProfileState k1 = rhs(c, y);
    const ProfileState k2 = rhs(c, y + h * (1.0 / 5) * k1);
    const ProfileState k3 = rhs(c, y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
    const ProfileState k4 = rhs(c, y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
    const ProfileState k5 = rhs(c, y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                             64448.0 / 6561 * k3 - 212.0 / 729 * k4));
    const ProfileState k6 = rhs(c, y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                                             49.0 / 176 * k4 - 5103.0 / 18656 * k5));
    out = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 - 2187.0 / 6784 * k5 +
                   11.0 / 84 * k6);
    const ProfileState k7 = rhs(c, out);
    const ProfileState y4 = y + h * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 + 393.0 / 640 * k4 -
                                     92097.0 / 339200 * k5 + 187.0 / 2100 * k6 + 1.0 / 40 * k7);
    err = out - y4;
}

ProfileSample make_sample(const ConeParams& c, double s, const ProfileState& st) {
    ProfileSample m;
    m.s = s;
    m.rho = st(0);
    m.U = st(1);
    m.psi = st(2);
    m.x = st(0) * c.cp() + st(1) * c.cq();
    m.y = st(0) * c.cq() - st(1) * c.cp();
    const double phi = cone_angle(c) + st(2);
    m.xdot = std::cos(phi);
    m.ydot = std::sin(phi);
    return m;
}

}  // namespace

ProfileState profile_rhs(const ConeParams& cone, const ProfileState& st) { return rhs(cone, st); }

ProfileSample ProfileCurve::sample(std::size_t i) const {
    ProfileSample m = raw.at(i);
    m.s *= scale;
    m.x *= scale;
    m.y *= scale;
    m.rho *= scale;
    m.U *= scale;
    return m;
}

double ProfileCurve::r_max() const {
    const auto& b = raw.back();
    return scale * std::hypot(b.rho, b.U);
}

ProfileState ProfileCurve::state_at(double s) const {
    const double sr = s / scale;
    if (sr < -1e-14 || sr > raw.back().s * (1 + 1e-12))
        throw std::out_of_range("profile: arclength outside the integrated range");
    auto it = std::upper_bound(raw.begin(), raw.end(), sr,
                               [](double v, const ProfileSample& m) { return v < m.s; });
    std::size_t i = (it == raw.begin()) ? 0 : std::size_t(it - raw.begin()) - 1;
    if (i + 1 >= raw.size()) i = raw.size() - 2;
    // the equations are singular on the axis: step back from the next sample
    if (i == 0 && sr > 0) i = 1;
    const ProfileSample& a = raw[i];
    ProfileState st(a.rho, a.U, a.psi);
    const double h = sr - a.s;
    if (h != 0.0) {
        ProfileState out, err;
        dp_step(cone, st, h, out, err);
        st = out;
    }
    st(0) *= scale;
    st(1) *= scale;
    return st;
}

ProfileSample ProfileCurve::sample_at(double s) const {
    ProfileState st = state_at(s);
    ProfileSample m = make_sample(cone, s, st);
    return m;
}

void ProfileCurve::jets_at(double s, Jet<3>& rho, Jet<3>& U, Jet<3>& psi) const {
    const ProfileState st = state_at(s);
    // raw units, then rescale
    const Jet<3> r0(st(0) / scale), u0(st(1) / scale), p0(st(2));
    rho = r0;
    U = u0;
    psi = p0;
    for (int it = 0; it < 4; ++it) {
        const Jet<3> k = kappa_of(cone, rho, U, psi);
        const Jet<3> cs = cos(psi), sn = sin(psi);
        rho = r0 + integral(cs);
        U = u0 - integral(sn);
        psi = p0 + integral(k);
    }
    double f = 1.0;
    for (int k = 0; k <= 3; ++k) {
        rho[k] *= scale * f;
        U[k] *= scale * f;
        psi[k] *= f;
        f /= scale;
    }
}

double ProfileCurve::s_at_rho(double rho) const {
    double rr = rho / scale;
    const double slack = 1e-12 * raw.back().rho;
    if (rr < raw.front().rho - slack || rr > raw.back().rho + slack)
        throw std::out_of_range("profile: cone radius outside the curve's graphical range");
    rr = std::clamp(rr, raw.front().rho, raw.back().rho);
    auto it = std::lower_bound(raw.begin(), raw.end(), rr,
                               [](const ProfileSample& m, double v) { return m.rho < v; });
    std::size_t i = (it == raw.begin()) ? 1 : std::size_t(it - raw.begin());
    const ProfileSample &a = raw[i - 1], &b = raw[i];
    double s = a.s + (b.s - a.s) * (rr - a.rho) / (b.rho - a.rho);
    for (int k = 0; k < 30; ++k) {
        const ProfileState st = state_at(s * scale);
        const double f = st(0) / scale - rr;
        const double ds = f / std::cos(st(2));
        s = std::clamp(s - ds, a.s, b.s);
        if (std::abs(ds) <= 1e-15 * std::max(1.0, std::abs(s))) break;
    }
    return s * scale;
}

ProfileCurve shoot_profile(const ConeParams& cone, Side side, double R_max, double tol, bool normalize) {
    if (!cone.minimizing) throw std::invalid_argument("shoot_profile: cone is not minimizing");
    if (side == Side::on_cone) throw std::invalid_argument("shoot_profile: side must be E_plus or E_minus");
    if (!(R_max > 1.0)) throw std::invalid_argument("shoot_profile: R_max must exceed 1");
    const double cp = cone.cp(), cq = cone.cq(), alpha = cone_angle(cone);
    const double h0 = 1e-4;

    ProfileCurve curve;
    curve.cone = cone;
    curve.side = side;
    curve.tol = tol;

    double x, y, phi, x0, y0, phi0;
    if (side == Side::E_plus) {
        const double k1 = -double(cone.p) / (cone.q + 1);
        x0 = 1;
        y0 = 0;
        phi0 = std::numbers::pi / 2;
        x = 1 - 0.5 * k1 * h0 * h0;
        y = h0 - k1 * k1 * h0 * h0 * h0 / 6;
        phi = phi0 + k1 * h0;
    } else {
        const double k1 = double(cone.q) / (cone.p + 1);
        x0 = 0;
        y0 = 1;
        phi0 = 0;
        x = h0 - k1 * k1 * h0 * h0 * h0 / 6;
        y = 1 + 0.5 * k1 * h0 * h0;
        phi = k1 * h0;
    }
    auto to_state = [&](double xx, double yy, double ph) {
        return ProfileState(xx * cp + yy * cq, xx * cq - yy * cp, ph - alpha);
    };
    curve.raw.push_back(make_sample(cone, 0.0, to_state(x0, y0, phi0)));
    ProfileState st = to_state(x, y, phi);
    double s = h0;
    curve.raw.push_back(make_sample(cone, s, st));

    const double sgn = side == Side::E_plus ? 1.0 : -1.0;
    double h = h0;
    long steps = 0;
    while (std::hypot(st(0), st(1)) < R_max) {
        if (++steps > 2000000) throw std::runtime_error("shoot_profile: step budget exhausted");
        ProfileState out, err;
        dp_step(cone, st, h, out, err);
        double en = 0;
        for (int i = 0; i < 3; ++i) {
            const double sc = (i == 0 ? 1e-14 : 1e-300) + tol * std::max(std::abs(st(i)), std::abs(out(i)));
            en = std::max(en, std::abs(err(i)) / sc);
        }
        if (en <= 1.0) {
            s += h;
            st = out;
            if (sgn * st(1) <= 0) throw std::runtime_error("shoot_profile: curve left the declared side");
            curve.raw.push_back(make_sample(cone, s, st));
        }
        const double fac = en > 0 ? 0.9 * std::pow(en, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (h < 1e-14 * std::max(1.0, s)) throw std::runtime_error("shoot_profile: step size underflow");
    }
    if (normalize && R_max >= 10.0) normalize_profile(curve);
    return curve;
}

AsymptoticFit asymptotic_fit(const ProfileCurve& curve, double r_lo, double r_hi) {
    const double R = curve.r_max();
    if (r_hi <= 0) {
        r_hi = R;
        r_lo = R / 10;
    }
    if (!(r_lo > 0 && r_hi > r_lo * 1.5)) throw std::invalid_argument("asymptotic_fit: window too short");
    const double rho_top = curve.raw.back().rho * curve.scale;
    r_hi = std::min(r_hi, rho_top);
    if (!(r_hi > r_lo * 1.5)) throw std::invalid_argument("asymptotic_fit: window too short");
    const int m = 64;
    Eigen::VectorXd lr(m), lu(m), rr(m), uu(m);
    for (int i = 0; i < m; ++i) {
        rr(i) = r_lo * std::pow(r_hi / r_lo, double(i) / (m - 1));
        const ProfileState st = curve.state_at(curve.s_at_rho(rr(i)));
        uu(i) = st(1);
        lr(i) = std::log(rr(i));
        lu(i) = std::log(std::abs(uu(i)));
        if (i > 0 && !(std::abs(uu(i)) < std::abs(uu(i - 1))))
            throw std::runtime_error("asymptotic_fit: heights are not monotone on the window");
    }
    const double mx = lr.mean(), my = lu.mean();
    const double sxy = ((lr.array() - mx) * (lu.array() - my)).sum();
    const double sxx = (lr.array() - mx).square().sum();
    AsymptoticFit f;
    f.gamma_hat = sxy / sxx;
    f.coeff = std::copysign(std::exp(my - f.gamma_hat * mx), uu(0));
    f.r_lo = r_lo;
    f.r_hi = r_hi;

    // next order: two-term fit with the exact leading exponent
    const double g1 = make_mode(1, 1, curve.cone).gamma_plus;
    Eigen::MatrixXd A(m, 2);
    for (int i = 0; i < m; ++i) {
        A(i, 0) = std::pow(rr(i), g1);
        A(i, 1) = std::pow(rr(i), g1 - 1);
    }
    const Eigen::Vector2d cb = A.colPivHouseholderQr().solve(uu);
    Eigen::VectorXd lres(m);
    bool ok = true;
    for (int i = 0; i < m; ++i) {
        const double d = uu(i) - cb(0) * std::pow(rr(i), g1);
        if (d == 0.0) ok = false;
        lres(i) = std::log(std::abs(d));
    }
    if (ok) {
        const double my2 = lres.mean();
        f.next_exponent = ((lr.array() - mx) * (lres.array() - my2)).sum() / sxx;
    }
    return f;
}

void normalize_profile(ProfileCurve& curve, double r_lo, double r_hi) {
    const AsymptoticFit f = asymptotic_fit(curve, r_lo, r_hi);
    const double mu = std::pow(std::abs(f.coeff), -1.0 / (1.0 - f.gamma_hat));
    curve.scale *= mu;
    const double lo = r_lo > 0 ? r_lo * mu : 0, hi = r_hi > 0 ? r_hi * mu : 0;
    curve.norm_coeff = asymptotic_fit(curve, lo, hi).coeff;
}

ProfileCurve scale_leaf(const ProfileCurve& curve, double lambda) {
    if (lambda == 0.0) throw std::invalid_argument("scale_leaf: lambda = 0 is the cone");
    if ((lambda > 0) != (curve.side == Side::E_plus))
        throw std::invalid_argument("scale_leaf: sign of lambda does not match the curve's side");
    ProfileCurve out = curve;
    out.scale *= std::abs(lambda);
    out.lambda = curve.lambda * lambda;
    return out;
}

Eigen::VectorXd graph_over_cone(const ProfileCurve& curve, const Eigen::VectorXd& r) {
    Eigen::VectorXd u(r.size());
    for (int i = 0; i < r.size(); ++i) {
        const ProfileState st = curve.state_at(curve.s_at_rho(r(i)));
        if (std::cos(st(2)) <= 0) throw std::runtime_error("graph_over_cone: curve not graphical");
        u(i) = st(1);
    }
    return u;
}

RayProbe ray_probe(const ProfileCurve& curve, double beta) {
    RayProbe out;
    out.min_transversality = std::numeric_limits<double>::infinity();
    auto angle = [&](double s) {
        const ProfileSample m = curve.sample_at(s);
        return std::atan2(m.y, m.x) - beta;
    };
    const int sub = 4;
    double sprev = 0, fprev = angle(0);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double s0 = curve.raw[i - 1].s * curve.scale, s1 = curve.raw[i].s * curve.scale;
        for (int k = 1; k <= sub; ++k) {
            const double s = s0 + (s1 - s0) * k / sub;
            const double f = angle(s);
            if ((fprev < 0) != (f < 0)) {
                double a = sprev, b = s, fa = fprev;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double fm = angle(mid);
                    if ((fm < 0) == (fa < 0)) { a = mid; fa = fm; } else b = mid;
                }
                const ProfileState st = curve.state_at(0.5 * (a + b));
                const double tr = st(0) * std::sin(st(2)) + st(1) * std::cos(st(2));
                out.min_transversality = std::min(out.min_transversality, tr);
                ++out.crossings;
            }
            sprev = s;
            fprev = f;
        }
    }
    if (out.crossings == 0) out.min_transversality = 0;
    return out;
}

}  // namespace conefoliate
