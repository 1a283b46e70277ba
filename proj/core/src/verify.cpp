#include "conefoliate/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <stdexcept>
#include <thread>

#include "conefoliate/glued.hpp"
#include "conefoliate/nonlinear.hpp"
#include "conefoliate/profile.hpp"
#include "conefoliate/radial.hpp"
#include "conefoliate/spectrum.hpp"

namespace conefoliate {

namespace {

// Evaluates fn(0..n-1) on up to `threads` workers; results in index order.
template <class F>
auto parallel_map(int n, int threads, F&& fn) -> std::vector<decltype(fn(0))> {
    using T = decltype(fn(0));
    std::vector<std::optional<T>> out(n);
    std::vector<std::exception_ptr> err(n);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                out[i].emplace(fn(i));
            } catch (...) {
                err[i] = std::current_exception();
            }
        }
    };
    const int w = std::clamp(threads, 1, std::max(1, n));
    if (w == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < w; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::vector<T> res;
    res.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (err[i]) std::rethrow_exception(err[i]);
        res.push_back(std::move(*out[i]));
    }
    return res;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = int(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Embedding-oracle mean curvature with one Richardson step in the chart spacing.
double oracle_H(const ConeParams& cone, const BaseNode& nd, double xi0, double th,
                const std::function<double(double, double)>& u) {
    const OrbitChart ch = local_graph_chart(nd, xi0, u);
    const Eigen::Vector3d nrm(nd.n1.value() * std::cos(th), nd.n1.value() * std::sin(th), nd.n2.value());
    const double h1 = embedding_oracle(cone, ch, xi0, th, nrm, 1e-3);
    const double h2 = embedding_oracle(cone, ch, xi0, th, nrm, 5e-4);
    return (4 * h2 - h1) / 3;
}

std::shared_ptr<const ProfileCurve> default_unit(const ConeParams& cone) { return unit_leaf(cone, 1e5); }

// ---------------------------------------------------------------- checks

CheckResult check_spectrum(int, unsigned) {
    CheckResult c;
    const int pq[5][2] = {{3, 3}, {2, 4}, {4, 2}, {3, 4}, {4, 4}};
    const ModeClass cls[4] = {ModeClass::dilation, ModeClass::translation, ModeClass::rotation,
                              ModeClass::graphical};
    int bad = 0, compared = 0;
    double worst_gamma = 0;
    for (const auto& v : pq) {
        const ConeParams cone = ConeParams::make(v[0], v[1], false);
        const int n = cone.n;
        const Rational expect[4] = {Rational(-(n - 1)), Rational(0), Rational(n - 1),
                                    Rational(n - 1) * (Rational(1) + Rational(2, std::max(v[0], v[1])))};
        const auto modes = enumerate_modes(cone, 3.0 * (n - 1));
        std::vector<Rational> seen;
        int idx = 0;
        for (const Mode& m : modes) {
            const Rational mu = mu_exact(m.j, m.k, cone);
            if (!seen.empty() && seen.back() == mu) continue;
            if (!seen.empty() && mu < seen.back()) ++bad;  // not ascending
            seen.push_back(mu);
            if (idx >= 4) break;
            ++compared;
            if (!(mu == expect[idx])) ++bad;
            if (m.cls != cls[idx]) ++bad;
            if (std::abs(m.mu - mu.value()) > 1e-12 * (1 + std::abs(m.mu))) ++bad;
            const ExactGamma g = gamma_exact(m.j, m.k, cone);
            if (!(g.a == Rational(-(n - 2), 2))) ++bad;
            if (!(g.d == Rational((n - 2) * (n - 2)) + Rational(4) * mu)) ++bad;
            const double disc = (n - 2) * (n - 2) / 4.0 + mu.value();
            for (int s : {+1, -1}) {
                const double want = -(n - 2) / 2.0 + s * std::sqrt(disc);
                const double got = g.rational() ? g.root(s).value() : g.value(s);
                worst_gamma = std::max(worst_gamma, std::abs(got - want));
                if (std::abs(got - want) > 1e-12) ++bad;
                const double mode_val = s > 0 ? m.gamma_plus : m.gamma_minus;
                if (std::abs(mode_val - want) > 1e-12) ++bad;
            }
            ++idx;
        }
        if (idx < 4) ++bad;
    }
    c.pass = bad == 0 && compared == 20;
    c.metrics = {{"mismatches", double(bad)}, {"rows_compared", double(compared)},
                 {"max_gamma_error", worst_gamma}};
    c.summary = fmt("%g rows, %g mismatches, max gamma error %.2e", compared, bad, worst_gamma);
    return c;
}

CheckResult check_asymptotics(int threads, unsigned) {
    CheckResult c;
    const ConeParams cone = ConeParams::make(3, 3);
    const auto unit = default_unit(cone);
    const double win[3][2] = {{10, 100}, {100, 1000}, {1000, 10000}};
    std::vector<double> err;
    for (const auto& w : win) err.push_back(std::abs(asymptotic_fit(*unit, w[0], w[1]).gamma_hat + 2.0) / 2.0);
    const bool fit_ok = err[0] <= 0.05 && err[1] < err[0] && err[2] < err[1];

    const BaseSurface leaf = BaseSurface::make_leaf(*unit, 1.0, 100, 200);
    const auto res = parallel_map(20, threads, [&](int m) {
        const int i = 1 + (m * (leaf.size() - 3)) / 19;
        const double th = 0.15 + 0.14 * m;
        return std::abs(oracle_H(cone, leaf.nodes[i], leaf.xi(i), th, [](double, double) { return 0.0; }));
    });
    const double hmax = *std::max_element(res.begin(), res.end());
    c.pass = fit_ok && hmax <= 1e-6;
    c.metrics = {{"rel_err_10_100", err[0]}, {"rel_err_100_1000", err[1]},
                 {"rel_err_1000_10000", err[2]}, {"max_oracle_H", hmax}};
    c.summary = fmt("gamma rel. error %.2e / %.2e / %.2e over outward windows; max |H| %.2e", err[0], err[1],
                    err[2], hmax);
    return c;
}

CheckResult check_foliation(int, unsigned) {
    CheckResult c;
    const ConeParams cone = ConeParams::make(3, 3);
    const ProfileCurve curve = shoot_profile(cone, Side::E_plus, 1e4);
    const double alpha = cone_angle(cone);
    int bad = 0;
    double tmin = 1e300;
    for (int k = 0; k < 400; ++k) {
        const RayProbe rp = ray_probe(curve, alpha * (k + 0.5) / 400);
        if (rp.crossings != 1 || !(rp.min_transversality > 0)) ++bad;
        if (rp.crossings >= 1) tmin = std::min(tmin, rp.min_transversality);
    }
    c.pass = bad == 0;
    c.metrics = {{"rays", 400}, {"failures", double(bad)}, {"min_transversality", tmin}};
    c.summary = fmt("400 rays, %g failures, min transversality %.3e", bad, tmin);
    return c;
}

// a(r) = r^2.5 + 0.5 r^3.5 with L_C applied exactly.
double cone_exact(double r) { return std::pow(r, 2.5) + 0.5 * std::pow(r, 3.5); }
double cone_exact_L(const Mode& m, const ConeParams& cone, double r) {
    auto L = [&](double e) { return e * e + (cone.n - 2) * e - m.mu; };
    return L(2.5) * std::pow(r, 0.5) + 0.5 * L(3.5) * std::pow(r, 1.5);
}

double cone_manufactured_error(const ConeParams& cone, const Mode& m, int N, double delta) {
    const RadialGrid grid = RadialGrid::make(N, 1e-4, 1.0);
    const Eigen::VectorXd r = grid.rvec();
    Eigen::VectorXd f(N), ex(N);
    for (int i = 0; i < N; ++i) {
        f(i) = cone_exact_L(m, cone, r(i));
        ex(i) = cone_exact(r(i));
    }
    ModeField F{cone, grid, {{m, f}}, delta};
    const BoundaryData g = m.low() ? BoundaryData{} : BoundaryData{{m, ex(N - 1)}};
    const ModeField u = linear_dirichlet_solve(F, g, delta);
    const Eigen::VectorXd a = u.find(m.j, m.k)->a;
    return (a - ex).cwiseAbs().maxCoeff() / ex.cwiseAbs().maxCoeff();
}

// Exact solution on S_+ as a function of R^2 = X^2 + Y^2 and its derivatives.
struct SplusExact {
    bool low = false;
    double e = 0, R2tip = 0;
    void eval(double R2, double& G, double& G1, double& G2) const {
        if (low) {
            const double b = std::pow(1 + R2, e);
            G = (R2 - R2tip) * b;
            G1 = b + (R2 - R2tip) * e * b / (1 + R2);
            G2 = 2 * e * b / (1 + R2) + (R2 - R2tip) * e * (e - 1) * b / ((1 + R2) * (1 + R2));
        } else {
            G = std::pow(1 + R2, e);
            G1 = e * G / (1 + R2);
            G2 = e * (e - 1) * G / ((1 + R2) * (1 + R2));
        }
    }
};

double splus_manufactured_error(const std::shared_ptr<const ProfileCurve>& unit,
                                const std::shared_ptr<const ZonalBasis>& zonal, int j, int N) {
    const ConeParams& cone = unit->cone;
    const BaseSurface b = BaseSurface::make_leaf(*unit, 1.0, 1e3, N);
    const SplusSolver solver(unit, b.h, N, zonal);
    const Mode m = make_mode(j, 1, cone);
    SplusExact ex;
    ex.low = m.low();
    const ProfileSample tip = unit->sample_at(0.0);
    ex.R2tip = tip.x * tip.x + tip.y * tip.y;
    ex.e = ex.low ? m.gamma_minus / 2 - 1 : m.gamma_minus / 2;
    const LinearCoeffs& K = solver.op().coeffs();
    const double lam = unit_sphere_eigenvalue(j, cone.p);
    const BaseSurface& sb = *solver.grid().base;
    const int M = sb.size();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(M), a_ex(M);
    for (int i = 0; i < M; ++i) {
        const BaseNode& nd = sb.nodes[i];
        const Jet<3> R2 = nd.X * nd.X + nd.Y * nd.Y;
        double G, G1, G2;
        ex.eval(R2.value(), G, G1, G2);
        const double d1 = G1 * R2.deriv(1);
        const double d2 = G2 * R2.deriv(1) * R2.deriv(1) + G1 * R2.deriv(2);
        a_ex(i) = G;
        f(i) = K.A(i) * d2 + K.B(i) * d1 + (K.C(i) - K.D(i) * lam) * G;
    }
    const Eigen::VectorXd a = solver.solve_mode(j, f);
    return (a - a_ex).cwiseAbs().maxCoeff() / a_ex.cwiseAbs().maxCoeff();
}

CheckResult check_linear(int threads, unsigned) {
    CheckResult c;
    const ConeParams cone = ConeParams::make(3, 3);
    const double delta = 1.3;
    const int Nc[3] = {129, 257, 513};
    const int Ns[3] = {100, 200, 400};
    const auto unit = default_unit(cone);
    const auto zonal = std::make_shared<const ZonalBasis>(cone, 8);
    // cases: cone (1,1), cone (3,1), S_+ j=1, S_+ j=3
    const auto err = parallel_map(12, threads, [&](int t) {
        const int cs = t / 3, lev = t % 3;
        if (cs == 0) return cone_manufactured_error(cone, make_mode(1, 1, cone), Nc[lev], delta);
        if (cs == 1) return cone_manufactured_error(cone, make_mode(3, 1, cone), Nc[lev], delta);
        return splus_manufactured_error(unit, zonal, cs == 2 ? 1 : 3, Ns[lev]);
    });
    const char* names[4] = {"cone_mode_1_1", "cone_mode_3_1", "splus_mode_1", "splus_mode_3"};
    bool orders_ok = true;
    std::string s;
    for (int cs = 0; cs < 4; ++cs) {
        const double o1 = std::log2(err[3 * cs] / err[3 * cs + 1]);
        const double o2 = std::log2(err[3 * cs + 1] / err[3 * cs + 2]);
        orders_ok = orders_ok && std::abs(o1 - 2) <= 0.2 && std::abs(o2 - 2) <= 0.2;
        c.metrics.emplace_back(std::string(names[cs]) + "_order_1", o1);
        c.metrics.emplace_back(std::string(names[cs]) + "_order_2", o2);
        c.metrics.emplace_back(std::string(names[cs]) + "_error_finest", err[3 * cs + 2]);
        s += names[cs] + fmt(" %.2f/%.2f; ", o1, o2);
    }

    // zero data with only obstructed boundary modes
    const RadialGrid grid = RadialGrid::make(257, 1e-4, 1.0);
    ModeField F{cone, grid, {}, delta};
    const BoundaryData g0 = {{make_mode(1, 1, cone), 1.0}, {make_mode(2, 1, cone), -0.5},
                             {make_mode(2, 2, cone), 0.25}};
    const ModeField u0 = linear_dirichlet_solve(F, g0, delta);
    double zmax = 0;
    for (const auto& e : u0.entries) zmax = std::max(zmax, e.a.cwiseAbs().maxCoeff());
    GlueConfig gc;
    gc.N = 200;
    const GluedSurface S = build_approx_surface(cone, 1e-3, gc, unit);
    const GluedLinearSystem sys(S, gc);
    LinearData d = sys.zero_data();
    d.g(0) = 1.0;
    d.g(1) = -0.5;
    const AxisymField w = sys.direct_solve(d);
    const double zglued = w.v.cwiseAbs().maxCoeff();
    c.metrics.emplace_back("zero_solve_cone_sup", zmax);
    c.metrics.emplace_back("zero_solve_glued_sup", zglued);
    c.pass = orders_ok && zmax == 0.0 && zglued == 0.0;
    c.summary = "orders " + s + fmt("zero solve sup %.1e / %.1e", zmax, zglued);
    return c;
}

double cutoff_gradient(double lambda, double a_from, double a_to) {
    // sup of r |d beta / dr| over the transition, by central differences in log r
    const double l = std::log(lambda);
    const double x0 = std::min(a_from, a_to) * l, x1 = std::max(a_from, a_to) * l;
    const double lo = std::min(x0, x1), hi = std::max(x0, x1);
    const int K = 4000;
    const double dx = (hi - lo) / K;
    double best = 0;
    for (int k = 1; k < K; ++k) {
        const double t = lo + k * dx;
        const double bp = cutoff_beta(std::exp(t + 1e-3 * dx), lambda, a_from, a_to);
        const double bm = cutoff_beta(std::exp(t - 1e-3 * dx), lambda, a_from, a_to);
        best = std::max(best, std::abs(bp - bm) / (2e-3 * dx));
    }
    return best;
}

CheckResult check_defect(int threads, unsigned seed) {
    CheckResult c;
    const ConeParams cone = ConeParams::make(3, 3);
    const auto unit = default_unit(cone);
    const double lams[3] = {1e-2, 1e-3, 1e-4};
    GlueConfig gc;
    gc.delta = 1.3;
    const auto defects = parallel_map(3, threads, [&](int t) {
        const GluedSurface S = build_approx_surface(cone, lams[t], gc, unit);
        S.validate();
        const GluedLinearSystem sys(S, gc);
        return measure_defect(sys, seed).defect;
    });
    const bool at_ok = defects[1] <= 0.5;
    const bool dec = defects[1] < defects[0] && defects[2] < defects[1];

    const GluedSurface S = build_approx_surface(cone, 1e-3, gc, unit);
    std::vector<double> ll, g1, g2;
    for (double lam : {1e-2, 1e-3, 1e-4, 1e-6, 1e-8}) {
        ll.push_back(std::abs(std::log(lam)));
        g1.push_back(cutoff_gradient(lam, S.a_minus, S.a_mid()));
        g2.push_back(cutoff_gradient(lam, S.a_plus, S.a0));
    }
    const double s1 = loglog_slope(ll, g1), s2 = loglog_slope(ll, g2);
    const bool slope_ok = std::abs(s1 + 1) <= 0.1 && std::abs(s2 + 1) <= 0.1;
    c.pass = at_ok && dec && slope_ok;
    c.metrics = {{"defect_1e-2", defects[0]}, {"defect_1e-3", defects[1]}, {"defect_1e-4", defects[2]},
                 {"beta1_gradient_slope", s1}, {"beta2_gradient_slope", s2}};
    c.summary = fmt("defect %.3f / %.3f / %.3f at lambda 1e-2/1e-3/1e-4; ", defects[0], defects[1], defects[2]) +
                fmt("cutoff gradient slopes %.3f, %.3f", s1, s2);
    return c;
}

CheckResult check_picard(int, unsigned) {
    CheckResult c;
    SolveConfig cfg;
    GlueConfig gc = cfg.grid;
    gc.delta = cfg.delta;
    const GluedSurface S = build_approx_surface(cfg.cone, cfg.lambda, gc);
    S.validate();
    const GluedLinearSystem sys(S, gc);
    const int J = sys.modes();
    // the g = 0 solve, used for the increment diagnostic
    const PicardResult base = picard_iterate(sys, Eigen::VectorXd::Zero(J), cfg);
    std::vector<double> gn, dist, inc;
    bool cert = base.report.converged;
    double worst_res = 0, worst_berr = 0, worst_tail = 0;
    int worst_it = 0;
    for (double eps : {4e-3, 2e-3, 1e-3}) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(J);
        g(2) = eps;
        const PicardResult r = picard_iterate(sys, g, cfg);
        const SolveReport& R = r.report;
        cert = cert && R.converged && R.iterations <= 50 && R.max_contraction_tail <= 0.5 &&
               R.final_residual <= 1e-8 && R.boundary_error <= 1e-12;
        worst_res = std::max(worst_res, R.final_residual);
        worst_berr = std::max(worst_berr, R.boundary_error);
        worst_tail = std::max(worst_tail, R.max_contraction_tail);
        worst_it = std::max(worst_it, R.iterations);
        gn.push_back(R.g_norm);
        dist.push_back(R.seed_distance);
        AxisymField d(r.u.grid);
        d.v = r.u.v - base.u.v - (r.seed.v - base.seed.v);
        inc.push_back(weighted_norm_tilde(S, d, 2, cfg.alpha, cfg.delta).value);
    }
    const double slope = loglog_slope(gn, dist);
    const double inc_slope = loglog_slope(gn, inc);
    c.pass = cert && std::abs(slope - 2) <= 0.1;
    c.metrics = {{"max_iterations", double(worst_it)},  {"max_contraction_tail", worst_tail},
                 {"max_final_residual", worst_res},      {"max_boundary_error", worst_berr},
                 {"eg_slope", slope},                    {"eg_ratio_smallest_g", dist.back() / (gn.back() * gn.back())},
                 {"seed_distance_g0", base.report.seed_distance}, {"increment_slope", inc_slope}};
    c.summary = std::string("certificate ") + (cert ? "ok" : "failed") +
                fmt(" (<= %g iterations, tail contraction %.3g, residual %.2e, boundary %.1e); ", worst_it,
                    worst_tail, worst_res, worst_berr) +
                fmt("E_g slope %.3f; increment slope %.3f", slope, inc_slope);
    return c;
}

Eigen::Vector2d tv(const ThetaParams& t) { return {t.a_axis, t.lambda}; }

CheckResult check_theta(int threads, unsigned) {
    CheckResult c;
    const ThetaContext ctx(ThetaConfig{});
    const int J = ctx.zonal().size();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(J);

    const Eigen::Vector2d v00 = tv(theta_map(ctx, zero, {}).value);
    const double t00 = v00.lpNorm<1>();

    const double av[3] = {-2e-6, 1e-6, 3e-6};
    const auto grid = parallel_map(9, threads, [&](int t) {
        const ThetaParams th{av[t / 3], av[t % 3]};
        return (tv(theta_map(ctx, zero, th).value) - tv(th)).lpNorm<1>() / th.norm();
    });
    const double grid_worst = *std::max_element(grid.begin(), grid.end());

    // expansion: D uses theta itself, Dd uses the discrete Theta(0, theta)
    Eigen::VectorXd gh = zero;
    gh(0) = 0.7;
    gh(1) = -0.5;
    gh(2) = 1.0;
    gh(3) = 0.4;
    const double eps[3] = {4e-7, 2e-7, 1e-7};
    const ThetaParams dirs[3] = {{1, 0}, {0, 1}, {-1, 1}};
    // per eps: Theta(g,0), then Theta(g, eps d) and Theta(0, eps d) per direction
    const auto ev = parallel_map(21, threads, [&](int t) {
        const int e = t / 7, k = t % 7;
        const Eigen::VectorXd g = eps[e] * gh;
        if (k == 0) return tv(theta_map(ctx, g, {}).value);
        const ThetaParams th{eps[e] * dirs[(k - 1) / 2].a_axis, eps[e] * dirs[(k - 1) / 2].lambda};
        return tv(theta_map(ctx, (k - 1) % 2 == 0 ? g : zero, th).value);
    });
    std::vector<double> ev_eps, D, Dd;
    double Dtr[3] = {0, 0, 0}, Ddl[3] = {0, 0, 0};
    for (int e = 0; e < 3; ++e) {
        double dm = 0, ddm = 0;
        for (int d = 0; d < 3; ++d) {
            const Eigen::Vector2d th(eps[e] * dirs[d].a_axis, eps[e] * dirs[d].lambda);
            const Eigen::Vector2d r = ev[7 * e + 1 + 2 * d] - ev[7 * e] - th;
            const Eigen::Vector2d rd = ev[7 * e + 1 + 2 * d] - ev[7 * e] - ev[7 * e + 2 + 2 * d] + v00;
            dm = std::max(dm, r.lpNorm<1>());
            ddm = std::max(ddm, rd.lpNorm<1>());
            if (d == 0) Dtr[e] = r.lpNorm<1>();
            if (d == 1) Ddl[e] = r.lpNorm<1>();
        }
        ev_eps.push_back(eps[e]);
        D.push_back(dm);
        Dd.push_back(ddm);
    }
    const double slope = loglog_slope(ev_eps, D);
    const double slope_d = loglog_slope(ev_eps, Dd);
    const double slope_tr = loglog_slope(ev_eps, {Dtr[0], Dtr[1], Dtr[2]});
    const double slope_dl = loglog_slope(ev_eps, {Ddl[0], Ddl[1], Ddl[2]});

    // near-cone solves on five boundary data
    const double samples[5][4] = {{-1e-6, 0.5e-6, 1e-6, 0},
                                  {0, -0.5e-6, 1e-6, 0.3e-6},
                                  {1e-6, 0.5e-6, 1e-6, 0},
                                  {0.5e-6, 0, -0.8e-6, 0.2e-6},
                                  {0, 0.8e-6, 0.5e-6, -0.4e-6}};
    const auto solves = parallel_map(5, threads, [&](int t) {
        Eigen::VectorXd g = zero;
        for (int j = 0; j < 4; ++j) g(j) = samples[t][j];
        const NearConeResult r = solve_near_cone(ctx, g);
        return std::pair<bool, double>(r.report.converged, r.report.residuals.back());
    });
    bool all_conv = true;
    int n_conv = 0;
    double worst_theta = 0;
    for (const auto& [ok, res] : solves) {
        all_conv = all_conv && ok;
        n_conv += ok ? 1 : 0;
        worst_theta = std::max(worst_theta, res);
    }
    Eigen::VectorXd gp = zero;
    gp(0) = 1e-6;
    gp(1) = 0.5e-6;
    gp(2) = 1e-6;
    const ContinuityProbe probe = continuity_probe(ctx, gp, 10);

    const bool expansion_ok = std::abs(slope - 2) <= 0.2;
    c.pass = t00 <= 1e-8 && grid_worst <= 0.1 && expansion_ok && all_conv && worst_theta <= 1e-6 && probe.pass;
    c.metrics = {{"theta_0_0", t00},
                 {"grid_max_relative_error", grid_worst},
                 {"expansion_slope", slope},
                 {"expansion_slope_translation", slope_tr},
                 {"expansion_slope_dilation", slope_dl},
                 {"expansion_slope_discrete_reference", slope_d},
                 {"expansion_D_smallest_eps", D.back()},
                 {"near_cone_max_residual", worst_theta},
                 {"near_cone_all_converged", all_conv ? 1.0 : 0.0},
                 {"probe_max_increment", probe.max_increment},
                 {"probe_median_increment", probe.median_increment}};
    c.summary = fmt("|Theta(0,0)| %.1e; grid rel. error %.3g; expansion slope %.2f (translation %.2f, ", t00,
                    grid_worst, slope, slope_tr) +
                fmt("dilation %.2f, discrete reference %.2f); ", slope_dl, slope_d) +
                fmt("near-cone max |Theta| %.1e, %g/5 converged; probe ", worst_theta, n_conv) +
                (probe.pass ? "pass" : "fail");
    return c;
}

CheckResult check_oracles(int threads, unsigned seed) {
    CheckResult c;
    const auto fam = parallel_map(3, threads, [&](int t) {
        return oracle_mismatch(t == 0 ? "cone" : t == 1 ? "splus" : "glued", 20);
    });
    const ConeParams cone = ConeParams::make(3, 3);
    GlueConfig gc;
    const GluedSurface S = build_approx_surface(cone, 1e-3, gc);
    const GluedLinearSystem sys(S, gc);
    double worst = 0;
    for (unsigned s = 0; s < 4; ++s) {
        LinearData d = random_linear_data(sys, seed + 101 * s, s % 2 == 0);
        d.f.v.row(d.f.rows() - 1).setZero();
        for (int j = 1; j <= sys.modes(); ++j)
            if (sys.low(j)) d.g(j - 1) = 0;
        const AxisymField a = sys.direct_solve(d);
        const AxisymField b = right_inverse_R(sys, d);
        worst = std::max(worst, (a.v - b.v).cwiseAbs().maxCoeff() / a.v.cwiseAbs().maxCoeff());
    }
    const double fw = std::max({fam[0], fam[1], fam[2]});
    c.pass = fw <= 1e-6 && worst <= 1e-6;
    c.metrics = {{"oracle_cone", fam[0]}, {"oracle_splus", fam[1]}, {"oracle_glued", fam[2]},
                 {"direct_vs_R", worst}};
    c.summary = fmt("oracle r|dH| %.1e / %.1e / %.1e (cone, S+, glued); direct vs R %.1e", fam[0], fam[1], fam[2],
                    worst);
    return c;
}

struct Entry {
    const char* name;
    CheckResult (*fn)(int, unsigned);
};
const Entry kChecks[] = {
    {"spectrum-golden-table", check_spectrum}, {"hs-asymptotics", check_asymptotics},
    {"foliation-certificate", check_foliation}, {"linear-convergence", check_linear},
    {"gluing-defect", check_defect},           {"nonlinear-certificate", check_picard},
    {"theta-consistency", check_theta},        {"oracle-cross-checks", check_oracles},
};

}  // namespace

double oracle_mismatch(const std::string& family, int points) {
    const ConeParams cone = ConeParams::make(3, 3);
    BasePtr b;
    if (family == "cone") {
        b = std::make_shared<const BaseSurface>(BaseSurface::make_cone(cone, 1e-2, 1, 60));
    } else if (family == "splus") {
        b = std::make_shared<const BaseSurface>(BaseSurface::make_leaf(*default_unit(cone), 1.0, 50, 60));
    } else if (family == "glued") {
        b = build_approx_surface(cone, 1e-3, GlueConfig{}).base;
    } else {
        throw std::invalid_argument("oracle_mismatch: unknown family " + family);
    }
    const double amp = 0.05;
    double worst = 0;
    for (int m = 0; m < points; ++m) {
        const int i = 2 + (m * (b->size() - 5)) / std::max(1, points - 1);
        const double th = 0.2 + m * (2.6 / std::max(1, points - 1));
        const BaseNode& nd = b->nodes[i];
        const double xi0 = b->xi(i), r = nd.r;
        // u = amp r w(theta) (1 + 0.3 d + 0.2 d^2), d = xi - xi0
        const double w = 0.3 + 0.2 * std::cos(th) + 0.1 * std::cos(2 * th);
        const double wt = -0.2 * std::sin(th) - 0.2 * std::sin(2 * th);
        const double wtt = -0.2 * std::cos(th) - 0.4 * std::cos(2 * th);
        HeightJet J;
        J.u = amp * r * w;
        J.us = 0.3 * J.u;
        J.uss = 0.4 * J.u;
        J.ut = amp * r * wt;
        J.ust = 0.3 * J.ut;
        J.utt = amp * r * wtt;
        const double Mo = mean_curvature_point(cone, nd, th, J);
        const double Ho = oracle_H(cone, nd, xi0, th, [&](double xi, double t) {
            const double d = xi - xi0;
            return amp * r * (0.3 + 0.2 * std::cos(t) + 0.1 * std::cos(2 * t)) * (1 + 0.3 * d + 0.2 * d * d);
        });
        worst = std::max(worst, r * std::abs(Mo - Ho));
    }
    return worst;
}

std::vector<std::string> acceptance_suite_names() {
    std::vector<std::string> v;
    for (const auto& e : kChecks) v.push_back(e.name);
    return v;
}

std::vector<CheckResult> run_acceptance(const std::vector<std::string>& names, int threads, unsigned seed,
                                        std::ostream* log) {
    for (const auto& n : names) {
        bool known = false;
        for (const auto& e : kChecks) known = known || n == e.name;
        if (!known) throw std::invalid_argument("unknown acceptance check: " + n);
    }
    std::vector<CheckResult> out;
    int id = 0;
    for (const auto& e : kChecks) {
        ++id;
        if (!names.empty() && std::find(names.begin(), names.end(), e.name) == names.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult r;
        try {
            r = e.fn(threads, seed);
        } catch (const std::exception& ex) {
            r.pass = false;
            r.summary = std::string("error: ") + ex.what();
        }
        r.id = id;
        r.name = e.name;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (log) *log << (r.pass ? "[PASS] " : "[FAIL] ") << id << ' ' << r.name << ": " << r.summary << '\n' << std::flush;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace conefoliate
