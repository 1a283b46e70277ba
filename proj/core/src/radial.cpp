#include "conefoliate/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conefoliate {

RadialGrid RadialGrid::make(int N, double r_min, double r_max) {
    if (N < 3) throw std::invalid_argument("radial grid needs at least 3 points");
    if (!(r_min > 0 && r_min < r_max)) throw std::invalid_argument("radial grid: need 0 < r_min < r_max");
    return {std::log(r_min), std::log(r_max), N};
}

Eigen::VectorXd RadialGrid::rvec() const {
    Eigen::VectorXd r(N);
    for (int i = 0; i < N; ++i) r(i) = this->r(i);
    r(N - 1) = std::exp(t_max);
    return r;
}

const ModeEntry* ModeField::find(int j, int k) const {
    for (const auto& e : entries)
        if (e.mode.j == j && e.mode.k == k) return &e;
    return nullptr;
}

namespace {

// First and second t-derivatives on a uniform grid, second order everywhere.
void derivs(const Eigen::VectorXd& u, double h, Eigen::VectorXd& d1, Eigen::VectorXd& d2) {
    const int n = int(u.size());
    d1.resize(n);
    d2.resize(n);
    for (int i = 1; i + 1 < n; ++i) {
        d1(i) = (u(i + 1) - u(i - 1)) / (2 * h);
        d2(i) = (u(i + 1) - 2 * u(i) + u(i - 1)) / (h * h);
    }
    d1(0) = (-3 * u(0) + 4 * u(1) - u(2)) / (2 * h);
    d1(n - 1) = (3 * u(n - 1) - 4 * u(n - 2) + u(n - 3)) / (2 * h);
    if (n >= 4) {
        d2(0) = (2 * u(0) - 5 * u(1) + 4 * u(2) - u(3)) / (h * h);
        d2(n - 1) = (2 * u(n - 1) - 5 * u(n - 2) + 4 * u(n - 3) - u(n - 4)) / (h * h);
    } else {
        d2(0) = d2(n - 1) = d2(1);
    }
}

}  // namespace

ModeField apply_L_cone(const ModeField& u) {
    if (u.grid.N < 3) throw std::invalid_argument("apply_L_cone: need at least 3 grid points");
    ModeField out = u;
    const double h = u.grid.h();
    const int n = u.cone.n;
    for (auto& e : out.entries) {
        Eigen::VectorXd d1, d2;
        derivs(e.a, h, d1, d2);
        for (int i = 0; i < u.grid.N; ++i) {
            const double r = u.grid.r(i);
            e.a(i) = (d2(i) + (n - 2) * d1(i) - e.mode.mu * e.a(i)) / (r * r);
        }
    }
    return out;
}

double gamma4_plus(const ConeParams& cone) {
    for (const auto& m : enumerate_modes(cone, 3.0 * (cone.n - 1)))
        if (!m.low()) return m.gamma_plus;
    throw std::logic_error("no graphical mode found");
}

void check_delta(const ConeParams& cone, double delta) {
    const double g4 = gamma4_plus(cone);
    if (!(delta > 1.0 && delta < g4))
        throw std::invalid_argument("delta must lie in (1, " + std::to_string(g4) + "), got " +
                                    std::to_string(delta));
}

Eigen::VectorXd solve_mode_ode(const Mode& mode, const ConeParams& cone, const Eigen::VectorXd& r,
                               const Eigen::VectorXd& f, double g, double delta,
                               ModeSolveInfo* info) {
    (void)cone;
    const int M = int(r.size());
    if (M < 2 || f.size() != M) throw std::invalid_argument("solve_mode_ode: size mismatch");
    if (std::abs(r(M - 1) - 1.0) > 1e-9) throw std::invalid_argument("solve_mode_ode: grid must end at r = 1");
    if (!(delta > 1.0)) throw std::invalid_argument("solve_mode_ode: delta must exceed 1");
    const double gp = mode.gamma_plus, gm = mode.gamma_minus;
    const double dg = gp - gm;
    if (std::abs(dg) < 1e-12) throw std::domain_error("solve_mode_ode: double indicial root");

    Eigen::VectorXd t = r.array().log();

    // cumulative integral of s^{1-gamma} f ds = int r^{2-gamma} f dt from 0
    auto cumulative = [&](double gamma, bool tail) {
        Eigen::VectorXd F(M), C(M);
        for (int i = 0; i < M; ++i) F(i) = std::pow(r(i), 2.0 - gamma) * f(i);
        double c0 = 0.0;
        if (tail && f(0) != 0.0) {
            double sigma = delta - 2.0;
            if (f(1) != 0.0 && f(0) * f(1) > 0.0) sigma = std::log(f(1) / f(0)) / (t(1) - t(0));
            const double e = 2.0 - gamma + sigma;
            if (!(e > 0.0))
                throw std::domain_error("solve_mode_ode: source does not decay fast enough at r -> 0");
            c0 = F(0) / e;
        }
        C(0) = c0;
        for (int i = 1; i < M; ++i) C(i) = C(i - 1) + 0.5 * (F(i) + F(i - 1)) * (t(i) - t(i - 1));
        return C;
    };

    const Eigen::VectorXd Im = cumulative(gm, true);
    Eigen::VectorXd Ip;
    if (gp < delta) {
        Ip = cumulative(gp, true);
    } else {
        // integrate downward from r = 1 to avoid cancelling against the large r -> 0 part
        Ip.resize(M);
        Ip(M - 1) = 0.0;
        double prev = std::pow(r(M - 1), 2.0 - gp) * f(M - 1);
        for (int i = M - 2; i >= 0; --i) {
            const double cur = std::pow(r(i), 2.0 - gp) * f(i);
            Ip(i) = Ip(i + 1) - 0.5 * (cur + prev) * (t(i + 1) - t(i));
            prev = cur;
        }
    }
    Eigen::VectorXd a(M);
    for (int i = 0; i < M; ++i)
        a(i) = (std::pow(r(i), gp) * Ip(i) - std::pow(r(i), gm) * Im(i)) / dg;

    ModeSolveInfo local;
    if (!mode.low()) {
        const double c = g - a(M - 1);
        for (int i = 0; i < M; ++i) a(i) += c * std::pow(r(i), gp);
        local.boundary_used = true;
        local.homogeneous_added = c;
    } else {
        local.discarded_boundary = g;
    }
    if (info) *info = local;
    return a;
}

ModeField H_operator(const BoundaryData& g, const ConeParams& cone, const RadialGrid& grid,
                     double delta) {
    ModeField u{cone, grid, {}, delta};
    const Eigen::VectorXd r = grid.rvec();
    for (const auto& [m, c] : g) {
        if (m.low()) continue;
        Eigen::VectorXd a(grid.N);
        for (int i = 0; i < grid.N; ++i) a(i) = c * std::pow(r(i), m.gamma_plus);
        u.entries.push_back({m, a});
    }
    return u;
}

WeightedNormReport weighted_norm_radial(const RadialGrid& grid, const Eigen::VectorXd& a, int k,
                                        double alpha, double delta, double angular) {
    if (k < 0 || k > 2) throw std::invalid_argument("weighted norm: k must be 0, 1 or 2");
    if (a.size() != grid.N) throw std::invalid_argument("weighted norm: size mismatch");
    WeightedNormReport rep;
    rep.k = k;
    rep.alpha = alpha;
    rep.delta = delta;
    Eigen::VectorXd D[3];
    D[0] = a;
    derivs(a, grid.h(), D[1], D[2]);
    const double rmin = grid.r(0) * (1 - 1e-12);
    for (int m = 0;; ++m) {
        const double R = std::ldexp(1.0, -m - 1);
        if (R < rmin) break;
        std::vector<int> idx;
        for (int i = 0; i < grid.N; ++i) {
            const double r = grid.r(i);
            if (r >= R * (1 - 1e-12) && r <= 2 * R * (1 + 1e-12)) idx.push_back(i);
        }
        if (idx.size() < 2 || (k == 2 && idx.size() < 5))
            throw std::invalid_argument("weighted norm: grid too coarse for the dyadic annulus at r=" +
                                        std::to_string(R));
        double mx[3] = {0, 0, 0};
        for (int i : idx)
            for (int l = 0; l <= k; ++l) mx[l] = std::max(mx[l], std::abs(D[l](i)));
        double local = 0;
        for (int l = 0; l <= k; ++l)
            for (int i = 0; i <= l; ++i) local += mx[i] * std::pow(angular, l - i);
        double hk = 0, h0 = 0;
        for (std::size_t q = 0; q + 1 < idx.size(); ++q) {
            const int i0 = idx[q], i1 = idx[q + 1];
            const double dx = std::pow((grid.r(i1) - grid.r(i0)) / R, alpha);
            hk = std::max(hk, std::abs(D[k](i1) - D[k](i0)) / dx);
            h0 = std::max(h0, std::abs(D[0](i1) - D[0](i0)) / dx);
        }
        local += hk + (k > 0 ? std::pow(angular, k) * h0 : 0.0);
        const double v = std::pow(R, -delta) * local;
        rep.annulus_r.push_back(R);
        rep.annulus_value.push_back(v);
        rep.value = std::max(rep.value, v);
    }
    return rep;
}

WeightedNormReport weighted_norm_cone(const ModeField& u, int k, double alpha, double delta) {
    WeightedNormReport total;
    total.k = k;
    total.alpha = alpha;
    total.delta = delta;
    const double area = link_area(u.cone);
    for (const auto& e : u.entries) {
        const double mult = double(harmonic_dimension(e.mode.j - 1, u.cone.p)) *
                            double(harmonic_dimension(e.mode.k - 1, u.cone.q));
        const double sup = std::sqrt(mult / area);
        const double ang = std::sqrt(std::max(0.0, e.mode.nu_p + e.mode.nu_q));
        WeightedNormReport r = weighted_norm_radial(u.grid, e.a, k, alpha, delta, ang);
        if (total.annulus_r.empty()) {
            total.annulus_r = r.annulus_r;
            total.annulus_value.assign(r.annulus_value.size(), 0.0);
        }
        for (std::size_t m = 0; m < r.annulus_value.size(); ++m)
            total.annulus_value[m] += sup * r.annulus_value[m];
    }
    for (double v : total.annulus_value) total.value = std::max(total.value, v);
    return total;
}

ModeField linear_dirichlet_solve(const ModeField& f, const BoundaryData& g, double delta,
                                 LinearSolveReport* report) {
    check_delta(f.cone, delta);
    if (std::abs(f.grid.t_max) > 1e-12) throw std::invalid_argument("linear_dirichlet_solve: grid must end at r = 1");
    std::vector<Mode> modes;
    auto add = [&](const Mode& m) {
        for (const auto& x : modes)
            if (x.j == m.j && x.k == m.k) return;
        modes.push_back(m);
    };
    for (const auto& e : f.entries) add(e.mode);
    for (const auto& [m, c] : g) add(m);

    const Eigen::VectorXd r = f.grid.rvec();
    ModeField u{f.cone, f.grid, {}, delta};
    LinearSolveReport rep;
    for (const auto& m : modes) {
        Eigen::VectorXd fv = Eigen::VectorXd::Zero(f.grid.N);
        if (const ModeEntry* e = f.find(m.j, m.k)) fv = e->a;
        double gv = 0;
        for (const auto& [gm, c] : g)
            if (gm.j == m.j && gm.k == m.k) gv += c;
        ModeSolveInfo info;
        Eigen::VectorXd a = solve_mode_ode(m, f.cone, r, fv, gv, delta, &info);
        if (m.low() && gv != 0.0) rep.discarded.emplace_back(m, gv);
        if (!m.low()) rep.boundary_error = std::max(rep.boundary_error, std::abs(a(f.grid.N - 1) - gv));
        u.entries.push_back({m, a});
    }
    if (report) {
        const ModeField Lu = apply_L_cone(u);
        for (const auto& e : Lu.entries) {
            Eigen::VectorXd fv = Eigen::VectorXd::Zero(f.grid.N);
            if (const ModeEntry* fe = f.find(e.mode.j, e.mode.k)) fv = fe->a;
            for (int i = 1; i + 1 < f.grid.N; ++i)
                rep.residual_max = std::max(rep.residual_max,
                                            std::pow(r(i), 2.0 - delta) * std::abs(e.a(i) - fv(i)));
        }
        rep.norm_u = weighted_norm_cone(u, 2, 0.5, delta).value;
        rep.norm_f = f.entries.empty() ? 0.0 : weighted_norm_cone(f, 0, 0.5, delta - 2).value;
        for (const auto& [m, c] : project_Pi(g)) rep.norm_g += std::abs(c);
        const double den = rep.norm_f + rep.norm_g;
        rep.schauder_constant = den > 0 ? rep.norm_u / den : 0.0;
        *report = rep;
    }
    return u;
}

}  // namespace conefoliate
