#include "conefoliate/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conefoliate {

namespace {

void mask_data(const GluedLinearSystem& sys, LinearData& d) {
    d.f.v.row(d.f.rows() - 1).setZero();
    for (int j = 1; j <= sys.modes(); ++j)
        if (sys.low(j)) d.g(j - 1) = 0.0;
}

double norm2(const GluedLinearSystem& sys, const AxisymField& u, double alpha, double delta) {
    return weighted_norm_tilde(sys.surface(), u, 2, alpha, delta).value;
}

}  // namespace

AxisymField right_inverse_R(const GluedLinearSystem& sys, const LinearData& d0, NeumannInfo* info,
                            double tol, int max_iter, double max_tol) {
    LinearData d = d0;
    mask_data(sys, d);
    const double nd = sys.data_norm(d);
    if (info) *info = NeumannInfo{};
    if (nd == 0.0) return AxisymField(sys.grid());
    LinearData w = d;
    AxisymField best;
    double best_rr = INFINITY;
    for (int it = 1; it <= max_iter; ++it) {
        AxisymField u = sys.P(w);
        LinearData y = sys.LL(u);
        LinearData res = d;
        res.f.v -= y.f.v;
        res.g -= y.g;
        mask_data(sys, res);
        const double rr = sys.data_norm(res) / nd;
        if (info) {
            info->iterations = it;
            info->relative_residual = std::min(rr, best_rr);
        }
        const bool improved = rr < best_rr;
        if (improved) {
            best_rr = rr;
            best = u;
        }
        if (rr <= tol || (!improved && best_rr <= max_tol)) break;
        w.f.v += res.f.v;
        w.g += res.g;
    }
    if (!(best_rr <= max_tol))
        throw std::runtime_error("right inverse: Neumann series did not converge (residual " +
                                 std::to_string(best_rr) + ")");
    return best;
}

Eigen::VectorXd zonal_coefficients(const BoundaryData& g, int modes) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(modes);
    for (const auto& [m, v] : g) {
        if (m.k != 1) throw std::invalid_argument("nonlinear path: boundary data must be zonal (k = 1)");
        if (m.j < 1 || m.j > modes)
            throw std::invalid_argument("nonlinear path: zonal mode beyond the theta basis");
        c(m.j - 1) += v;
    }
    return c;
}

PicardResult picard_iterate(const GluedLinearSystem& sys, const Eigen::VectorXd& g,
                            const SolveConfig& cfg) {
    PicardResult out;
    SolveReport& rep = out.report;
    const int N = sys.grid().rows();
    LinearData d = sys.zero_data();
    for (int j = 1; j <= sys.modes() && j <= g.size(); ++j)
        if (!sys.low(j)) d.g(j - 1) = g(j - 1);
    rep.g_norm = sys.data_norm(d);

    auto boundary_error = [&](const AxisymField& u) {
        const Eigen::VectorXd tr = u.modes().row(N - 1).transpose();
        double e = 0;
        for (int j = 1; j <= sys.modes(); ++j)
            if (!sys.low(j)) e = std::max(e, std::abs(tr(j - 1) - d.g(j - 1)));
        return e;
    };

    NeumannInfo ni;
    out.seed = right_inverse_R(sys, d, &ni);
    rep.neumann_iterations.push_back(ni.iterations);
    AxisymField u = out.seed;
    rep.iterate_norms.push_back(norm2(sys, u, cfg.alpha, cfg.delta));
    rep.boundary_error = boundary_error(u);
    const CurvatureOperator& op = sys.op();
    double prev = -1;
    const double noise = 100 * cfg.tol_residual;
    for (int k = 0; k < cfg.max_iter; ++k) {
        LinearData dk = d;
        try {
            AxisymField m = op.M(u);
            dk.f.v = op.L(u).v - m.v;
        } catch (const std::domain_error& e) {
            rep.failure = std::string("graph left the admissible band: ") + e.what();
            break;
        }
        AxisymField un = right_inverse_R(sys, dk, &ni);
        rep.neumann_iterations.push_back(ni.iterations);
        AxisymField diff(sys.grid(), un.v - u.v);
        const double step = norm2(sys, diff, cfg.alpha, cfg.delta);
        u = un;
        rep.iterations = k + 1;
        rep.step_norms.push_back(step);
        rep.iterate_norms.push_back(norm2(sys, u, cfg.alpha, cfg.delta));
        rep.boundary_error = std::max(rep.boundary_error, boundary_error(u));
        if (prev >= 0) {
            const double c = prev > 0 ? step / prev : 0.0;
            rep.contraction.push_back(c);
            if (c >= 1.0 && prev > noise) {
                rep.failure = "contraction factor >= 1 (boundary data too large)";
                break;
            }
        }
        prev = step;
        if (step < cfg.tol_residual) {
            rep.converged = true;
            break;
        }
    }
    if (rep.failure.empty() && !rep.converged) rep.failure = "max_iter exceeded";
    const int nc = int(rep.contraction.size());
    for (int i = std::max(0, nc - 5); i < nc; ++i)
        rep.max_contraction_tail = std::max(rep.max_contraction_tail, rep.contraction[i]);
    try {
        AxisymField m = op.M(u);
        m.v.row(N - 1).setZero();
        rep.final_residual = weighted_norm_tilde(sys.surface(), m, 0, cfg.alpha, cfg.delta - 2).value;
        rep.final_residual_sup = m.sup(0, N - 2);
    } catch (const std::domain_error&) {
        rep.final_residual = rep.final_residual_sup = INFINITY;
    }
    AxisymField dist(sys.grid(), u.v - out.seed.v);
    rep.seed_distance = norm2(sys, dist, cfg.alpha, cfg.delta);
    rep.eg_ratio = rep.g_norm > 0 ? rep.seed_distance / (rep.g_norm * rep.g_norm) : 0.0;
    rep.in_ball = rep.seed_distance <= cfg.ball_c * rep.g_norm * rep.g_norm;
    out.u = u;
    return out;
}

PicardResult picard_solve(const SolveConfig& cfg) {
    check_delta(cfg.cone, cfg.delta);
    GlueConfig gc = cfg.grid;
    gc.delta = cfg.delta;
    GluedSurface S = build_approx_surface(cfg.cone, cfg.lambda, gc);
    S.validate();
    GluedLinearSystem sys(S, gc);
    return picard_iterate(sys, zonal_coefficients(cfg.g, sys.modes()), cfg);
}

namespace {

// Lagrange interpolation through up to four samples around x.
double lagrange4(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const int n = int(xs.size());
    int i = int(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
    int lo = std::clamp(i - 2, 0, std::max(0, n - 4));
    int hi = std::min(n, lo + 4);
    double s = 0;
    for (int a = lo; a < hi; ++a) {
        double w = 1;
        for (int b = lo; b < hi; ++b)
            if (b != a) w *= (x - xs[b]) / (xs[a] - xs[b]);
        s += w * ys[a];
    }
    return s;
}

}  // namespace

LeafTransfer transfer_to_leaf(const GluedSurface& S, const AxisymField& u) {
    const BaseSurface& gb = *S.base;
    const double sgn = S.side == Side::E_plus ? 1.0 : -1.0;
    auto leaf = std::make_shared<const BaseSurface>(
        BaseSurface::make_leaf_spacing(*S.unit, sgn * S.lambda, gb.h, gb.size(), gb.map_a));
    AxisymGrid lg(leaf, S.grid.zonal);
    LeafTransfer tr{AxisymField(lg)};
    const int N = gb.size(), K = u.cols();
    const double L = S.lambda;
    const ProfileCurve& unit = *S.unit;
    const double s_top = unit.s_max() * L;
    for (int k = 0; k < K; ++k) {
        std::vector<double> ss(N), hh(N);
        for (int i = 0; i < N; ++i) {
            const BaseNode& nd = gb.nodes[i];
            const double qx = nd.X.value() + u.v(i, k) * nd.n1.value();
            const double qy = nd.Y.value() + u.v(i, k) * nd.n2.value();
            double s = nd.s;
            ProfileSample m;
            for (int it = 0; it < 50; ++it) {
                m = unit.sample_at(std::min(s, s_top) / L);
                const double dx = qx - L * m.x, dy = qy - L * m.y;
                const double F = dx * m.xdot + dy * m.ydot;
                const double kap = profile_curvature(S.cone, m.x, m.y, m.xdot, m.ydot) / L;
                // d/ds of F: -1 + (q - c) . t' with t' = kappa n, n = (ydot, -xdot)
                const double dF = -1.0 + kap * (dx * m.ydot - dy * m.xdot);
                const double ds = -F / dF;
                s += ds;
                if (std::abs(ds) <= 1e-15 * std::max(s, L)) break;
            }
            if (!(s > -0.5 * nd.s) || s > s_top)
                throw std::runtime_error("transfer_to_leaf: projection left the leaf");
            m = unit.sample_at(std::max(s, 0.0) / L);
            ss[i] = s;
            hh[i] = (qx - L * m.x) * m.ydot - (qy - L * m.y) * m.xdot;
            tr.max_shift = std::max(tr.max_shift, std::abs(s - nd.s));
        }
        for (int i = 1; i < N; ++i)
            if (!(ss[i] > ss[i - 1])) throw std::runtime_error("transfer_to_leaf: projection not injective");
        for (int i = 0; i < N; ++i) {
            const double v = (i == N - 1 || ss[i] == leaf->nodes[i].s)
                                 ? hh[i]
                                 : lagrange4(ss, hh, leaf->nodes[i].s);
            tr.height.v(i, k) = v;
            if (gb.r(i) <= S.r_lambda)
                tr.inner_identity_error = std::max(tr.inner_identity_error, std::abs(v - u.v(i, k)));
        }
    }
    // The last glued node is the boundary; its projection lands near the
    // last leaf node, so compare traces there.
    Eigen::VectorXd diff = tr.height.v.row(N - 1) - u.v.row(N - 1);
    tr.boundary_constant = diff.mean();
    tr.boundary_spread = (diff.array() - tr.boundary_constant).abs().maxCoeff();
    return tr;
}

namespace {

using V3 = Eigen::Vector3d;

V3 link3(const ConeParams& c, double phi) { return {c.cp() * std::cos(phi), c.cp() * std::sin(phi), c.cq()}; }
V3 normal3(const ConeParams& c, double phi) {
    return {c.cq() * std::cos(phi), c.cq() * std::sin(phi), -c.cp()};
}

double zonal_eval(const ConeParams& c, const Eigen::VectorXd& g, double phi) {
    double s = 0;
    for (int j = 1; j <= g.size(); ++j)
        if (g(j - 1) != 0.0) s += g(j - 1) * axisym_eigenfunction(j, phi, c);
    return s;
}

// Root of f on [a, b] by bisection refined with secant steps.
template <class F>
double bracket_root(F&& f, double a, double b, const char* what) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw std::runtime_error(std::string(what) + ": root not bracketed");
    for (int it = 0; it < 200; ++it) {
        double m = b - fb * (b - a) / (fb - fa);
        if (!(m > std::min(a, b) && m < std::max(a, b))) m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
            fb *= 0.5;
        } else {
            b = m;
            fb = fm;
            fa *= 0.5;
        }
        if (std::abs(b - a) <= 1e-16 * std::max(1.0, std::abs(m))) return m;
    }
    return 0.5 * (a + b);
}

}  // namespace

Eigen::VectorXd translated_link_height(const ConeParams& cone, const ZonalBasis& zonal, double a) {
    const int K = zonal.size();
    Eigen::VectorXd h = Eigen::VectorXd::Zero(K);
    if (a == 0.0) return h;
    const double p = cone.p, q = cone.q, cp = cone.cp(), cq = cone.cq();
    const double sp = std::sqrt(p), sq = std::sqrt(q), k = (p + q) / std::sqrt(double(cone.n - 1));
    for (int i = 0; i < K; ++i) {
        const double c = std::cos(zonal.quadrature().theta(i));
        // q|x - a e1|^2 - p|y|^2 along the geodesic, with the cone factor split off
        auto G = [&](double t) {
            const double X = cp * std::cos(t) + cq * std::sin(t), Y = cq * std::cos(t) - cp * std::sin(t);
            return std::sin(t) * k * (sq * X + sp * Y) - 2 * q * a * X * c + q * a * a;
        };
        const double t0 = q * a * c / (cq * (p + q));
        const double span = 4 * std::abs(a) + 1e-300;
        h(i) = bracket_root(G, t0 - span, t0 + span, "translated link height");
    }
    return h;
}

double leaf_boundary_height(const ConeParams& cone, double ell,
                            const std::shared_ptr<const ProfileCurve>& unit) {
    if (ell == 0.0) return 0.0;
    const double gp = make_mode(1, 1, cone).gamma_plus;
    const double lam = std::pow(std::abs(ell), 1.0 / (1.0 - gp));
    const double R = 1.0 / lam;
    if (R > unit->r_max()) throw std::out_of_range("leaf boundary height: leaf too small for the shot profile");
    auto F = [&](double s) {
        const ProfileState st = unit->state_at(s);
        return std::hypot(st(0), st(1)) - R;
    };
    const double s0 = unit->s_at_rho(std::min(R, unit->sample(unit->size() - 1).rho));
    const double s = bracket_root(F, std::max(0.0, s0 - 0.5 * R), std::min(unit->s_max(), s0 + 0.5 * R),
                                  "leaf boundary height");
    const ProfileState st = unit->state_at(s);
    return std::atan2(st(1), st(0));
}

Eigen::VectorXd g_transfer(const ConeParams& cone, const ZonalBasis& zonal, const Eigen::VectorXd& g,
                           const ThetaParams& theta) {
    const double a = theta.a_axis;
    if (a == 0.0) return g;
    const int K = zonal.size();
    Eigen::VectorXd gt(K);
    for (int k = 0; k < K; ++k) {
        const double phi = zonal.quadrature().theta(k);
        const V3 c0 = link3(cone, phi);
        const double b = a * c0(0);
        const double rho = -b + std::sqrt(b * b - a * a + 1.0);
        const V3 wt = rho * c0 + V3(a, 0, 0);
        V3 nt = normal3(cone, phi);
        nt -= nt.dot(wt) * wt;
        nt.normalize();
        const V3 m = wt.cross(nt);
        auto Gam = [&](double psi) {
            const double gv = zonal_eval(cone, g, psi);
            return V3(std::cos(gv) * link3(cone, psi) + std::sin(gv) * normal3(cone, psi));
        };
        auto F = [&](double psi) { return Gam(psi).dot(m); };
        double span = 1e-3;
        double psi = phi;
        for (;; span *= 4) {
            const double lo = std::max(1e-12, phi - span), hi = std::min(M_PI - 1e-12, phi + span);
            if ((F(lo) > 0) != (F(hi) > 0) || F(lo) == 0 || F(hi) == 0) {
                psi = bracket_root(F, lo, hi, "g_transfer");
                break;
            }
            if (span > 1.0) throw std::runtime_error("g_transfer: geodesic intersection not found");
        }
        const V3 G = Gam(psi);
        gt(k) = std::atan2(G.dot(nt), G.dot(wt));
    }
    return zonal.to_modes(gt);
}

ThetaContext::ThetaContext(const ThetaConfig& cfg) : cfg_(cfg) {
    check_delta(cfg.solve.cone, cfg.solve.delta);
    zonal_ = std::make_shared<const ZonalBasis>(cfg.solve.cone, cfg.solve.grid.n_theta);
    const double gp = make_mode(1, 1, cfg.solve.cone).gamma_plus;
    const double lam_min = std::pow(cfg.ell_floor, 1.0 / (1.0 - gp));
    plus_ = unit_leaf(cfg.solve.cone, 1.0 / lam_min, Side::E_plus);
    minus_ = unit_leaf(cfg.solve.cone, 1.0 / lam_min, Side::E_minus);
}

void ThetaContext::leaf_of(double ell, double& lambda, Side& side) const {
    const double gp = make_mode(1, 1, cfg_.solve.cone).gamma_plus;
    if (std::abs(ell) < cfg_.ell_floor) {
        lambda = std::pow(cfg_.ell_floor, 1.0 / (1.0 - gp));
        side = Side::E_plus;
        return;
    }
    lambda = std::pow(std::abs(ell), 1.0 / (1.0 - gp));
    side = ell > 0 ? Side::E_plus : Side::E_minus;
}

double ThetaContext::dilation_coefficient(double ell) const {
    const double k1 = zonal_->to_modes(Eigen::VectorXd::Ones(zonal_->size()))(0);
    if (std::abs(ell) < cfg_.ell_floor) return k1 * ell;
    return k1 * leaf_boundary_height(cfg_.solve.cone, ell, ell > 0 ? plus_ : minus_);
}

double ThetaContext::translation_coefficient(double a) const {
    return zonal_->to_modes(translated_link_height(cfg_.solve.cone, *zonal_, a))(1);
}

namespace {

// Monotone 1-D inversion of f near the origin with f(x) ~ slope x.
template <class F>
double invert(F&& f, double target, double slope) {
    if (target == 0.0) return 0.0;
    double x0 = target / slope;
    double lo = 0.5 * x0, hi = 2.0 * x0;
    auto g = [&](double x) { return f(x) - target; };
    for (int it = 0; it < 20 && (g(lo) > 0) == (g(hi) > 0); ++it) {
        lo *= 0.5;
        hi *= 2.0;
    }
    return bracket_root(g, lo, hi, "identification");
}

}  // namespace

ThetaParams ThetaContext::identify(double c_dilation, double c_translation) const {
    const double k1 = zonal_->to_modes(Eigen::VectorXd::Ones(zonal_->size()))(0);
    const double t0 = 1e-7;
    const double k2 = translation_coefficient(t0) / t0;
    ThetaParams th;
    th.lambda = invert([&](double e) { return dilation_coefficient(e); }, c_dilation, k1);
    th.a_axis = invert([&](double a) { return translation_coefficient(a); }, c_translation, k2);
    return th;
}

ThetaEval theta_map(const ThetaContext& ctx, const Eigen::VectorXd& g, const ThetaParams& theta) {
    const ThetaConfig& cfg = ctx.config();
    const ConeParams& cone = cfg.solve.cone;
    ThetaEval ev;
    ev.g_theta = g_transfer(cone, ctx.zonal(), g, theta);
    double lam;
    Side side;
    ctx.leaf_of(theta.lambda, lam, side);
    GlueConfig gc = cfg.solve.grid;
    gc.delta = cfg.solve.delta;
    GluedSurface S = build_approx_surface(cone, lam, gc, ctx.unit(side));
    S.validate();
    ev.system = std::make_shared<GluedLinearSystem>(S, gc);
    ev.picard = picard_iterate(*ev.system, ev.g_theta, cfg.solve);
    if (!ev.picard.report.converged)
        throw std::runtime_error("theta map: Picard iteration failed: " + ev.picard.report.failure);
    const AxisymField& u = ev.picard.u;
    const int N = u.rows();
    Eigen::VectorXd trace(u.cols());
    for (int k = 0; k < u.cols(); ++k) trace(k) = std::atan(u.v(N - 1, k));
    const Eigen::VectorXd c = ctx.zonal().to_modes(trace) - ev.g_theta;
    ev.c_dilation = c(0);
    ev.c_translation = c(1);
    ev.value = ctx.identify(ev.c_dilation, ev.c_translation);
    return ev;
}

namespace {

Eigen::Vector2d vec(const ThetaParams& t) { return {t.a_axis, t.lambda}; }
ThetaParams par(const Eigen::Vector2d& v) { return {v(0), v(1)}; }

}  // namespace

NearConeResult solve_near_cone(const ThetaContext& ctx, const Eigen::VectorXd& g, const ThetaParams* seed) {
    NearConeResult res;
    NearConeReport& rep = res.report;
    const ThetaConfig& cfg = ctx.config();
    ThetaEval e0 = theta_map(ctx, g, ThetaParams{});
    const double r0 = vec(e0.value).norm();
    const double tol = std::max(cfg.newton_tol * r0, 1e-13);
    Eigen::Vector2d th = seed ? vec(*seed) : Eigen::Vector2d(-vec(e0.value));
    ThetaEval ev = th.isZero(0.0) ? e0 : theta_map(ctx, g, par(th));
    Eigen::Vector2d F = vec(ev.value);
    rep.iterates.push_back(par(th));
    rep.residuals.push_back(F.norm());
    if (F.norm() > tol) {
        // central differences; steps relative to the size of the parameters
        const double size = std::max({th.lpNorm<Eigen::Infinity>(), r0, 1e-12});
        Eigen::Matrix2d J;
        for (int c = 0; c < 2; ++c) {
            const double h = 1e-3 * std::max(std::abs(th(c)), size);
            Eigen::Vector2d tp = th, tm = th;
            tp(c) += h;
            tm(c) -= h;
            J.col(c) = (vec(theta_map(ctx, g, par(tp)).value) - vec(theta_map(ctx, g, par(tm)).value)) / (2 * h);
        }
        rep.jacobian = J;
        const Eigen::PartialPivLU<Eigen::Matrix2d> lu(J);
        for (int it = 0; it < cfg.newton_max && F.norm() > tol; ++it) {
            Eigen::Vector2d dx = -lu.solve(F);
            Eigen::Vector2d trial = th + dx;
            ThetaEval et = theta_map(ctx, g, par(trial));
            if (vec(et.value).norm() >= F.norm()) {
                if (rep.trust_region_used) {
                    rep.failure = "Newton iteration diverged";
                    break;
                }
                rep.trust_region_used = true;
                bool ok = false;
                for (int k = 0; k < 8 && !ok; ++k) {
                    dx *= 0.5;
                    trial = th + dx;
                    et = theta_map(ctx, g, par(trial));
                    ok = vec(et.value).norm() < F.norm();
                }
                if (!ok) {
                    rep.failure = "Newton iteration diverged (trust-region fallback failed)";
                    break;
                }
            }
            th = trial;
            ev = std::move(et);
            F = vec(ev.value);
            rep.iterates.push_back(par(th));
            rep.residuals.push_back(F.norm());
        }
    }
    rep.converged = F.norm() <= tol;
    if (!rep.converged && rep.failure.empty()) rep.failure = "Newton iteration did not reach the tolerance";
    const AxisymField& u = ev.picard.u;
    const Eigen::VectorXd gn = ctx.zonal().to_nodes(ev.g_theta);
    for (int k = 0; k < u.cols(); ++k)
        rep.boundary_mismatch = std::max(rep.boundary_mismatch, std::abs(std::atan(u.v(u.rows() - 1, k)) - gn(k)));
    res.theta = par(th);
    res.eval = std::move(ev);
    return res;
}

ContinuityProbe continuity_probe(const ThetaContext& ctx, const Eigen::VectorXd& g, int steps) {
    ContinuityProbe pr;
    ThetaParams prev{};
    std::vector<double> inc;
    for (int i = 1; i <= steps; ++i) {
        const double t = double(i) / steps;
        NearConeResult r = solve_near_cone(ctx, Eigen::VectorXd(t * g), i > 1 ? &prev : nullptr);
        if (!r.report.converged) throw std::runtime_error("continuity probe: " + r.report.failure);
        pr.t.push_back(t);
        pr.theta.push_back(r.theta);
        inc.push_back((vec(r.theta) - vec(prev)).norm());
        prev = r.theta;
    }
    pr.max_increment = *std::max_element(inc.begin(), inc.end());
    std::vector<double> s = inc;
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    pr.median_increment = s[s.size() / 2];
    pr.pass = pr.max_increment <= 5 * pr.median_increment;
    return pr;
}

}  // namespace conefoliate
