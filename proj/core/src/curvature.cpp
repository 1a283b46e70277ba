#include "conefoliate/curvature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "conefoliate/spectrum.hpp"

namespace conefoliate {

namespace {

// Forward-mode dual number, used to extract the exact linearization.
struct Dual {
    double v = 0, d = 0;
    Dual() = default;
    Dual(double x) : v(x) {}  // NOLINT
    Dual(double x, double dx) : v(x), d(dx) {}
};
Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator-(Dual a) { return {-a.v, -a.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
Dual sqrt(Dual a) {
    const double s = std::sqrt(a.v);
    return {s, a.d / (2 * s)};
}
double val(double x) { return x; }
double val(const Dual& x) { return x.v; }

struct Geo {
    double X[4], Y[4], n1[3], n2[3];
};

Geo geo_of(const BaseNode& nd) {
    Geo g;
    for (int k = 0; k < 4; ++k) {
        g.X[k] = nd.X.deriv(k);
        g.Y[k] = nd.Y.deriv(k);
    }
    for (int k = 0; k < 3; ++k) {
        g.n1[k] = nd.n1.deriv(k);
        g.n2[k] = nd.n2.deriv(k);
    }
    return g;
}

template <class T>
using V3 = std::array<T, 3>;

template <class T>
T dot(const V3<T>& a, const V3<T>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Point and derivatives of the revolved curve (a(xi) cos th, a(xi) sin th, b(xi)).
struct Rev {
    V3<double> v, s, t, ss, st, tt;
};
Rev revolve(double a0, double a1, double a2, double b0, double b1, double b2, double th) {
    const double c = std::cos(th), sn = std::sin(th);
    Rev r;
    r.v = {a0 * c, a0 * sn, b0};
    r.s = {a1 * c, a1 * sn, b1};
    r.t = {-a0 * sn, a0 * c, 0.0};
    r.ss = {a2 * c, a2 * sn, b2};
    r.st = {-a1 * sn, a1 * c, 0.0};
    r.tt = {-a0 * c, -a0 * sn, 0.0};
    return r;
}

template <class T>
T mc_point(const ConeParams& cone, const Geo& g, double th, const T& u, const T& us, const T& ut,
           const T& uss, const T& ust, const T& utt) {
    using std::sqrt;
    const Rev B = revolve(g.X[0], g.X[1], g.X[2], g.Y[0], g.Y[1], g.Y[2], th);
    const Rev N = revolve(g.n1[0], g.n1[1], g.n1[2], g.n2[0], g.n2[1], g.n2[2], th);
    V3<T> Xs, Xt, Xss, Xst, Xtt;
    for (int a = 0; a < 3; ++a) {
        Xs[a] = B.s[a] + us * N.v[a] + u * N.s[a];
        Xt[a] = B.t[a] + ut * N.v[a] + u * N.t[a];
        Xss[a] = B.ss[a] + uss * N.v[a] + 2.0 * us * N.s[a] + u * N.ss[a];
        Xst[a] = B.st[a] + ust * N.v[a] + us * N.t[a] + ut * N.s[a] + u * N.st[a];
        Xtt[a] = B.tt[a] + utt * N.v[a] + 2.0 * ut * N.t[a] + u * N.tt[a];
    }
    const T g11 = dot(Xs, Xs), g12 = dot(Xs, Xt), g22 = dot(Xt, Xt);
    V3<T> cr{Xs[1] * Xt[2] - Xs[2] * Xt[1], Xs[2] * Xt[0] - Xs[0] * Xt[2],
             Xs[0] * Xt[1] - Xs[1] * Xt[0]};
    const T len = sqrt(dot(cr, cr));
    V3<T> nn;
    for (int a = 0; a < 3; ++a) nn[a] = -cr[a] / len;
    const T h11 = dot(Xss, nn), h12 = dot(Xst, nn), h22 = dot(Xtt, nn);
    const T det = g11 * g22 - g12 * g12;
    const T P2 = (g.X[0] + u * g.n1[0]) * std::sin(th);
    const T P3 = g.Y[0] + u * g.n2[0];
    if (!(val(det) > 0) || !(val(P2) > 0) || !(val(P3) > 0))
        throw std::domain_error("mean_curvature: graph is not embedded at this node");
    const T H = (g22 * h11 - 2.0 * g12 * h12 + g11 * h22) / det;
    return H - double(cone.p - 1) * nn[1] / P2 - double(cone.q) * nn[2] / P3;
}

double rel_spread(const Eigen::VectorXd& x) {
    const double m = x.cwiseAbs().maxCoeff();
    return m > 0 ? (x.maxCoeff() - x.minCoeff()) / m : 0.0;
}

}  // namespace

double mean_curvature_point(const ConeParams& cone, const BaseNode& node, double theta,
                            const HeightJet& u) {
    return mc_point<double>(cone, geo_of(node), theta, u.u, u.us, u.ut, u.uss, u.ust, u.utt);
}

CurvatureOperator::CurvatureOperator(const AxisymGrid& grid) : grid_(grid) {
    const BaseSurface& b = *grid_.base;
    const int N = b.size(), K = grid_.cols();
    const ConeParams& cone = b.cone;
    coeffs_.A = coeffs_.B = coeffs_.C = coeffs_.D = Eigen::VectorXd::Zero(N);
    eig_.resize(K);
    for (int j = 1; j <= K; ++j) eig_(j - 1) = unit_sphere_eigenvalue(j, cone.p);
    Eigen::VectorXd a(K), bb(K), c(K), d(K);
    for (int i = 0; i < N; ++i) {
        const Geo g = geo_of(b.nodes[i]);
        for (int k = 0; k < K; ++k) {
            const double th = grid_.theta(k);
            auto seed = [&](int which) {
                Dual z[6];
                z[which].d = 1.0;
                return mc_point<Dual>(cone, g, th, z[0], z[1], z[2], z[3], z[4], z[5]).d;
            };
            const double cu = seed(0), cs = seed(1), ct = seed(2), css = seed(3), cst = seed(4),
                         ctt = seed(5);
            a(k) = css;
            bb(k) = cs;
            c(k) = cu;
            d(k) = ctt;
            const double scale = std::abs(css) + std::abs(ctt);
            coeffs_.cross_term = std::max(coeffs_.cross_term, std::abs(cst) / scale);
            const double expect = (cone.p - 1) * std::cos(th) / std::sin(th) * ctt;
            coeffs_.cot_defect =
                std::max(coeffs_.cot_defect, std::abs(ct - expect) / (std::abs(ctt) / std::sin(th)));
        }
        coeffs_.A(i) = a.mean();
        coeffs_.B(i) = bb.mean();
        coeffs_.C(i) = c.mean();
        coeffs_.D(i) = d.mean();
        coeffs_.theta_spread = std::max({coeffs_.theta_spread, rel_spread(a), rel_spread(d),
                                         (bb.maxCoeff() - bb.minCoeff()) / (std::abs(bb.mean()) + a.mean() / b.h),
                                         (c.maxCoeff() - c.minCoeff()) / (std::abs(c.mean()) + a.mean())});
    }
}

double CurvatureOperator::ghost_sign(int j) const {
    const int par = grid_.base->tip_parity;
    if (par >= 0) return 1.0;
    return (j - 1) % 2 == 0 ? 1.0 : -1.0;
}

void CurvatureOperator::stencil(int j, int i, double& lo, double& mid, double& hi) const {
    const double h = grid_.base->h;
    const double A = coeffs_.A(i), B = coeffs_.B(i);
    lo = A / (h * h) - B / (2 * h);
    hi = A / (h * h) + B / (2 * h);
    mid = -2 * A / (h * h) + coeffs_.C(i) - coeffs_.D(i) * eig_(j - 1);
    if (i == 0 && grid_.base->tip_parity != 0) {
        mid += ghost_sign(j) * lo;
        lo = 0;
    }
}

Eigen::VectorXd CurvatureOperator::apply_mode(int j, const Eigen::VectorXd& a) const {
    const int N = grid_.rows();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(N);
    for (int i = first_row(); i <= last_row(); ++i) {
        double lo, mid, hi;
        stencil(j, i, lo, mid, hi);
        out(i) = mid * a(i) + hi * a(i + 1) + (i > 0 ? lo * a(i - 1) : 0.0);
    }
    return out;
}

AxisymField CurvatureOperator::L(const AxisymField& u) const {
    const Eigen::MatrixXd m = u.modes();
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (int j = 1; j <= m.cols(); ++j) out.col(j - 1) = apply_mode(j, m.col(j - 1));
    return AxisymField::from_modes(grid_, out);
}

HeightJet CurvatureOperator::height_jet(const AxisymField& u, int i, int k) const {
    const BaseSurface& b = *grid_.base;
    const int K = grid_.cols();
    const Eigen::MatrixXd& d1 = grid_.zonal->d1();
    const Eigen::MatrixXd& d2 = grid_.zonal->d2();
    auto row = [&](int ii) -> Eigen::VectorXd {
        if (ii >= 0) return u.v.row(ii).transpose();
        if (b.tip_parity == 0) throw std::out_of_range("height_jet: no ghost row on this base");
        Eigen::VectorXd g = u.v.row(0).transpose();
        if (b.tip_parity < 0) g.reverseInPlace();
        return g;
    };
    if (i + 1 >= u.rows() || (i == 0 && b.tip_parity == 0))
        throw std::out_of_range("height_jet: row is on the boundary");
    const Eigen::VectorXd um = row(i - 1), u0 = row(i), up = row(i + 1);
    const double h = b.h;
    HeightJet J;
    J.u = u0(k);
    J.us = (up(k) - um(k)) / (2 * h);
    J.uss = (up(k) - 2 * u0(k) + um(k)) / (h * h);
    J.ut = d1.row(k).dot(u0);
    J.utt = d2.row(k).dot(u0);
    J.ust = (d1.row(k).dot(up) - d1.row(k).dot(um)) / (2 * h);
    (void)K;
    return J;
}

AxisymField CurvatureOperator::M(const AxisymField& u) const {
    const BaseSurface& b = *grid_.base;
    const int K = grid_.cols();
    const Eigen::MatrixXd& d1 = grid_.zonal->d1();
    const Eigen::MatrixXd& d2 = grid_.zonal->d2();
    const Eigen::MatrixXd Ut = u.v * d1.transpose();
    const Eigen::MatrixXd Utt = u.v * d2.transpose();
    Eigen::VectorXd ghost, ghost_t;
    if (b.tip_parity != 0) {
        ghost = u.v.row(0).transpose();
        if (b.tip_parity < 0) ghost.reverseInPlace();
        ghost_t = d1 * ghost;
    }
    const double h = b.h;
    AxisymField out(grid_);
    for (int i = first_row(); i <= last_row(); ++i) {
        const Geo g = geo_of(b.nodes[i]);
        for (int k = 0; k < K; ++k) {
            const double um = i > 0 ? u.v(i - 1, k) : ghost(k);
            const double utm = i > 0 ? Ut(i - 1, k) : ghost_t(k);
            const double u0 = u.v(i, k), up = u.v(i + 1, k);
            const double us = (up - um) / (2 * h), uss = (up - 2 * u0 + um) / (h * h);
            const double ust = (Ut(i + 1, k) - utm) / (2 * h);
            out.v(i, k) = mc_point<double>(b.cone, g, grid_.theta(k), u0, us, Ut(i, k), uss, ust,
                                           Utt(i, k));
        }
    }
    return out;
}

AxisymField CurvatureOperator::Q(const AxisymField& u) const {
    AxisymField m = M(u);
    m.v -= L(u).v;
    return m;
}

AxisymField mean_curvature(const AxisymField& u) { return CurvatureOperator(u.grid).M(u); }
AxisymField linearized_L(const AxisymField& u) { return CurvatureOperator(u.grid).L(u); }
AxisymField Q_remainder(const AxisymField& u) { return CurvatureOperator(u.grid).Q(u); }

OrbitChart local_graph_chart(const BaseNode& node, double xi0,
                             std::function<double(double, double)> u) {
    return [node, xi0, u](double xi, double th) -> Eigen::Vector3d {
        const double d = xi - xi0;
        const double X = node.X[0] + d * (node.X[1] + d * (node.X[2] + d * node.X[3]));
        const double Y = node.Y[0] + d * (node.Y[1] + d * (node.Y[2] + d * node.Y[3]));
        const double Xd = node.X[1] + d * (2 * node.X[2] + d * 3 * node.X[3]);
        const double Yd = node.Y[1] + d * (2 * node.Y[2] + d * 3 * node.Y[3]);
        const double len = std::hypot(Xd, Yd);
        const double uu = u(xi, th);
        const double P = X + uu * Yd / len;
        return {P * std::cos(th), P * std::sin(th), Y - uu * Xd / len};
    };
}

double embedding_oracle(const ConeParams& cone, const OrbitChart& chart, double xi, double theta,
                        const Eigen::Vector3d& orbit_normal, double step) {
    const int p = cone.p, q = cone.q;
    const int n = p + q + 1, dim = p + q + 2;
    if (std::sin(theta) < 1e-3) throw std::domain_error("embedding_oracle: chart degenerate near the axis");
    // chart coordinates: xi, theta, p-1 gnomonic angles on S^{p-1}, q on S^q
    auto F = [&](const Eigen::VectorXd& c) {
        const Eigen::Vector3d P = chart(c(0), c(1));
        Eigen::VectorXd w(p), z(q + 1);
        for (int a = 0; a < p - 1; ++a) w(a) = c(2 + a);
        w(p - 1) = 1.0;
        for (int a = 0; a < q; ++a) z(a) = c(1 + p + a);
        z(q) = 1.0;
        w.normalize();
        z.normalize();
        Eigen::VectorXd out(dim);
        out(0) = P(0);
        out.segment(1, p) = P(1) * w;
        out.segment(p + 1, q + 1) = P(2) * z;
        return out;
    };
    Eigen::VectorXd c0 = Eigen::VectorXd::Zero(n);
    c0(0) = xi;
    c0(1) = theta;
    const Eigen::VectorXd f0 = F(c0);
    Eigen::MatrixXd T(dim, n);
    std::vector<Eigen::VectorXd> fp(n), fm(n);
    for (int a = 0; a < n; ++a) {
        Eigen::VectorXd cp = c0, cm = c0;
        cp(a) += step;
        cm(a) -= step;
        fp[a] = F(cp);
        fm[a] = F(cm);
        T.col(a) = (fp[a] - fm[a]) / (2 * step);
    }
    const Eigen::MatrixXd g = T.transpose() * T;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(T);
    Eigen::VectorXd nu = qr.householderQ() * Eigen::VectorXd::Unit(dim, dim - 1);
    Eigen::VectorXd hint = Eigen::VectorXd::Zero(dim);
    hint(0) = orbit_normal(0);
    hint(p) = orbit_normal(1);
    hint(dim - 1) = orbit_normal(2);
    if (nu.dot(hint) < 0) nu = -nu;
    Eigen::MatrixXd hh(n, n);
    for (int a = 0; a < n; ++a) {
        hh(a, a) = (fp[a] - 2 * f0 + fm[a]).dot(nu) / (step * step);
        for (int b = a + 1; b < n; ++b) {
            Eigen::VectorXd cpp = c0, cpm = c0, cmp = c0, cmm = c0;
            cpp(a) += step; cpp(b) += step;
            cpm(a) += step; cpm(b) -= step;
            cmp(a) -= step; cmp(b) += step;
            cmm(a) -= step; cmm(b) -= step;
            hh(a, b) = hh(b, a) = (F(cpp) - F(cpm) - F(cmp) + F(cmm)).dot(nu) / (4 * step * step);
        }
    }
    return g.ldlt().solve(hh).trace();
}

}  // namespace conefoliate
