#include "conefoliate/glued.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "conefoliate/cutoff.hpp"
#include "conefoliate/spectrum.hpp"

namespace conefoliate {

double cutoff_beta(double r, double lambda, double a_from, double a_to) {
    if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("cutoff_beta: need 0 < lambda < 1");
    if (!(r > 0)) throw std::invalid_argument("cutoff_beta: need r > 0");
    const double x = std::log(r) / std::log(lambda);
    return smoothstep((x - a_from) / (a_to - a_from));
}

double GluedSurface::gamma1(double r) const { return cutoff_gamma1(r, r_lambda); }
double GluedSurface::beta1(double r) const { return cutoff_beta(r, lambda, a_minus, a_mid()); }
double GluedSurface::beta2(double r) const { return cutoff_beta(r, lambda, a_plus, a0); }

double GluedSurface::blend_height(double r) const {
    const double g = gamma1(r);
    if (g == 0.0) return 0.0;
    const ProfileState st = unit->state_at(unit->s_at_rho(r / lambda));
    return g * lambda * st(1);
}

void GluedSurface::validate() const {
    if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("glued surface: need 0 < lambda < 1");
    if (!(0 < a_minus && a_minus < a0 && a0 < a_plus && a_plus < 1))
        throw std::invalid_argument("glued surface: need 0 < a_minus < a0 < a_plus < 1");
    const double lp = std::pow(lambda, a_plus), lm = std::pow(lambda, a_minus);
    if (!(lp < r_lambda && 2 * r_lambda < lm && lm < 1))
        throw std::invalid_argument("glued surface: need lambda^a+ < r_lambda < 2 r_lambda < lambda^a- < 1");
    if (!(std::pow(lambda, a_mid()) >= 2 * r_lambda))
        throw std::invalid_argument("glued surface: lambda too large for the inner cutoff plateau");
}

std::shared_ptr<const ProfileCurve> unit_leaf(const ConeParams& cone, double R_needed, Side side) {
    const double R = std::max(1e5, 1.05 * R_needed);
    return std::make_shared<const ProfileCurve>(shoot_profile(cone, side, R));
}

namespace {
double splus_radius(double lambda, const GlueConfig& cfg) {
    return std::max(cfg.R_out, 10.0 * std::pow(lambda, cfg.a_minus - 1.0));
}
}  // namespace

GluedSurface build_approx_surface(const ConeParams& cone, double lambda, const GlueConfig& cfg,
                                  std::shared_ptr<const ProfileCurve> unit) {
    GluedSurface S;
    S.cone = cone;
    S.lambda = lambda;
    S.a0 = double(cone.n - 1) / cone.n;
    S.r_lambda = std::pow(lambda, S.a0);
    S.a_minus = cfg.a_minus;
    S.a_plus = cfg.a_plus;
    S.validate();
    const double need = std::max(1.0 / lambda, splus_radius(lambda, cfg));
    const Side side = unit ? unit->side : Side::E_plus;
    if (!unit || unit->r_max() < need) unit = unit_leaf(cone, need, side);
    S.unit = unit;
    S.side = side;
    const double sgn = side == Side::E_plus ? 1.0 : -1.0;
    auto base = std::make_shared<const BaseSurface>(
        BaseSurface::make_glued(*unit, sgn * lambda, S.r_lambda, cfg.N, cfg.map_a));
    S.base = base;
    S.grid = AxisymGrid(base, cfg.n_theta);
    return S;
}

// ---------------------------------------------------------------- norms

namespace {

struct NodeDerivs {
    Eigen::MatrixXd D[3];
};

NodeDerivs node_derivs(const AxisymField& u) {
    const BaseSurface& b = *u.grid.base;
    const int N = u.rows(), K = u.cols();
    const double h = b.h;
    const Eigen::MatrixXd Ut = u.v * u.grid.zonal->d1().transpose();
    const Eigen::MatrixXd Utt = u.v * u.grid.zonal->d2().transpose();
    auto dxi = [&](const Eigen::MatrixXd& m, int i, int k) {
        if (i == 0) return (-3 * m(0, k) + 4 * m(1, k) - m(2, k)) / (2 * h);
        if (i == N - 1) return (3 * m(i, k) - 4 * m(i - 1, k) + m(i - 2, k)) / (2 * h);
        return (m(i + 1, k) - m(i - 1, k)) / (2 * h);
    };
    auto dxixi = [&](int i, int k) {
        const int c = std::clamp(i, 1, N - 2);
        return (u.v(c + 1, k) - 2 * u.v(c, k) + u.v(c - 1, k)) / (h * h);
    };
    NodeDerivs d;
    for (auto& m : d.D) m.resize(N, K);
    for (int i = 0; i < N; ++i) {
        const BaseNode& nd = b.nodes[i];
        const double ls = std::hypot(nd.X.deriv(1), nd.Y.deriv(1));
        const double X = nd.X.value();
        for (int k = 0; k < K; ++k) {
            const double us = dxi(u.v, i, k) / ls, ut = Ut(i, k) / X;
            const double uss = dxixi(i, k) / (ls * ls), utt = Utt(i, k) / (X * X);
            const double ust = dxi(Ut, i, k) / (ls * X);
            d.D[0](i, k) = u.v(i, k);
            d.D[1](i, k) = std::hypot(us, ut);
            d.D[2](i, k) = std::sqrt(uss * uss + 2 * ust * ust + utt * utt);
        }
    }
    return d;
}

}  // namespace

WeightedNormReport weighted_norm_field(const AxisymField& u, int k, double alpha, double delta,
                                       int first_row, int last_row) {
    if (k < 0 || k > 2) throw std::invalid_argument("weighted norm: k must be 0, 1 or 2");
    const BaseSurface& b = *u.grid.base;
    const int N = u.rows(), K = u.cols();
    if (first_row < 0) first_row = 0;
    if (last_row < 0) last_row = N - 1;
    WeightedNormReport rep;
    rep.k = k;
    rep.alpha = alpha;
    rep.delta = delta;
    const NodeDerivs d = node_derivs(u);
    double rmin = 1e300, rmax = 0;
    for (int i = first_row; i <= last_row; ++i) {
        rmin = std::min(rmin, b.r(i));
        rmax = std::max(rmax, b.r(i));
    }
    std::vector<std::vector<Eigen::Vector3d>> pos(N, std::vector<Eigen::Vector3d>(K));
    for (int i = first_row; i <= last_row; ++i)
        for (int c = 0; c < K; ++c) pos[i][c] = orbit_point(b.nodes[i], u.grid.theta(c), 0.0);
    for (int m = 0;; ++m) {
        const double R = rmax * std::ldexp(1.0, -m - 1);
        if (2 * R < rmin) break;
        int lo = -1, hi = -1;
        for (int i = first_row; i <= last_row; ++i) {
            const double r = b.r(i);
            if (r >= R * (1 - 1e-12) && r <= 2 * R * (1 + 1e-12)) {
                if (lo < 0) lo = i;
                hi = i;
            }
        }
        if (lo < 0) continue;
        double local = 0;
        for (int l = 0; l <= k; ++l) {
            double mx = 0;
            for (int i = lo; i <= hi; ++i) mx = std::max(mx, d.D[l].row(i).cwiseAbs().maxCoeff());
            local += std::pow(R, l) * mx;
        }
        double hol = 0;
        const Eigen::MatrixXd& top = d.D[k];
        for (int i = lo; i <= hi; ++i)
            for (int c = 0; c < K; ++c) {
                if (i < hi) {
                    const double dist = (pos[i + 1][c] - pos[i][c]).norm();
                    hol = std::max(hol, std::abs(top(i + 1, c) - top(i, c)) / std::pow(dist, alpha));
                }
                if (c + 1 < K) {
                    const double dist = (pos[i][c + 1] - pos[i][c]).norm();
                    hol = std::max(hol, std::abs(top(i, c + 1) - top(i, c)) / std::pow(dist, alpha));
                }
            }
        local += std::pow(R, k + alpha) * hol;
        const double v = std::pow(R, -delta) * local;
        rep.annulus_r.push_back(R);
        rep.annulus_value.push_back(v);
        rep.value = std::max(rep.value, v);
    }
    return rep;
}

WeightedNormReport weighted_norm_S_lambda(const AxisymField& u, int k, double alpha, double delta) {
    return weighted_norm_field(u, k, alpha, delta);
}

WeightedNormReport weighted_norm_tilde(const GluedSurface& S, const AxisymField& u, int k,
                                       double alpha, double delta) {
    AxisymField a = u, c = u;
    for (int i = 0; i < u.rows(); ++i) {
        const double g1 = S.gamma1(S.base->r(i));
        a.v.row(i) *= g1;
        c.v.row(i) *= 1.0 - g1;
    }
    const WeightedNormReport r1 = weighted_norm_field(a, k, alpha, delta);
    WeightedNormReport r2 = weighted_norm_field(c, k, alpha, delta);
    r2.value += r1.value;
    return r2;
}

// ---------------------------------------------------------------- S_+ solve

namespace {

Eigen::VectorXd thomas(Eigen::VectorXd lo, Eigen::VectorXd mid, Eigen::VectorXd hi, Eigen::VectorXd d) {
    const int n = int(d.size());
    for (int i = 1; i < n; ++i) {
        const double w = lo(i) / mid(i - 1);
        mid(i) -= w * hi(i - 1);
        d(i) -= w * d(i - 1);
    }
    Eigen::VectorXd x(n);
    x(n - 1) = d(n - 1) / mid(n - 1);
    for (int i = n - 2; i >= 0; --i) x(i) = (d(i) - hi(i) * x(i + 1)) / mid(i);
    return x;
}

}  // namespace

SplusSolver::SplusSolver(std::shared_ptr<const ProfileCurve> unit, double h, int rows,
                         std::shared_ptr<const ZonalBasis> zonal, double map_a) {
    auto base = std::make_shared<const BaseSurface>(
        BaseSurface::make_leaf_spacing(*unit, unit->side == Side::E_plus ? 1.0 : -1.0, h, rows, map_a));
    grid_ = AxisymGrid(base, std::move(zonal));
    op_ = std::make_shared<CurvatureOperator>(grid_);
    const int M = rows;
    for (int j = 1; j <= grid_.cols(); ++j) {
        const Mode m = make_mode(j, 1, base->cone);
        robin_.push_back(std::pow(base->r(M - 1) / base->r(M - 2), m.gamma_minus));
        low_.push_back(m.low());
    }
}

Eigen::VectorXd SplusSolver::solve_mode(int j, const Eigen::VectorXd& f) const {
    const int M = grid_.rows();
    Eigen::VectorXd lo(M), mid(M), hi(M), rhs(M);
    for (int i = 0; i < M - 1; ++i) {
        op_->stencil(j, i, lo(i), mid(i), hi(i));
        rhs(i) = i < f.size() ? f(i) : 0.0;
    }
    if (low_[j - 1]) {
        // both radial solutions decay; take the regular one vanishing at the tip
        Eigen::VectorXd a = Eigen::VectorXd::Zero(M);
        a(1) = rhs(0) / hi(0);
        for (int i = 1; i < M - 1; ++i) a(i + 1) = (rhs(i) - lo(i) * a(i - 1) - mid(i) * a(i)) / hi(i);
        return a;
    }
    lo(M - 1) = -robin_[j - 1];
    mid(M - 1) = 1.0;
    hi(M - 1) = 0.0;
    rhs(M - 1) = 0.0;
    return thomas(lo, mid, hi, rhs);
}

AxisymField SplusSolver::solve(const AxisymField& f1) const {
    if (f1.rows() != grid_.rows() || f1.cols() != grid_.cols())
        throw std::invalid_argument("solve_on_Splus: field does not live on the S_+ grid");
    const Eigen::MatrixXd F = f1.modes();
    Eigen::MatrixXd out(F.rows(), F.cols());
    for (int j = 1; j <= F.cols(); ++j) out.col(j - 1) = solve_mode(j, F.col(j - 1));
    return AxisymField::from_modes(grid_, out);
}

AxisymField solve_on_Splus(const SplusSolver& solver, const AxisymField& f1, double delta) {
    check_delta(solver.grid().base->cone, delta);
    return solver.solve(f1);
}

// ---------------------------------------------------------------- glued system

GluedLinearSystem::GluedLinearSystem(const GluedSurface& S, const GlueConfig& cfg)
    : S_(S), delta_(cfg.delta) {
    check_delta(S.cone, delta_);
    op_ = std::make_shared<CurvatureOperator>(S_.grid);
    const double h = S_.base->h;
    const double R_out = std::min(splus_radius(S_.lambda, cfg), S_.unit->r_max() * 0.999);
    const double s_out = S_.unit->s_at_rho(R_out);
    const int M = std::max(8, int(std::ceil(std::asinh(s_out / S_.base->map_a) / h + 0.5)));
    splus_ = std::make_shared<SplusSolver>(S_.unit, h, M, S_.grid.zonal, S_.base->map_a);
    for (int j = 1; j <= modes(); ++j) {
        mode_.push_back(make_mode(j, 1, S_.cone));
        low_.push_back(mode_.back().low());
    }
    ell_.resize(modes());
    lu_.resize(modes());
}

Eigen::VectorXd GluedLinearSystem::P_mode(int j, const Eigen::VectorXd& f, double g) const {
    const int N = grid().rows(), M = splus_->grid().rows();
    const BaseSurface& b = *S_.base;
    Eigen::VectorXd f1 = Eigen::VectorXd::Zero(M);
    for (int i = 0; i < std::min(N - 1, M); ++i) f1(i) = S_.gamma1(b.r(i)) * f(i);
    const Eigen::VectorXd u1 = splus_->solve_mode(j, f1);
    Eigen::VectorXd f2(N);
    for (int i = 0; i < N - 1; ++i) f2(i) = S_.gamma2(b.r(i)) * f(i);
    f2(N - 1) = 2 * f2(N - 2) - f2(N - 3);
    const Eigen::VectorXd u2 = solve_mode_ode(mode_[j - 1], S_.cone, b.rvec(), f2, g, delta_);
    const double l2 = S_.lambda * S_.lambda;
    Eigen::VectorXd a(N);
    for (int i = 0; i < N; ++i) {
        const double r = b.r(i);
        const double w = i < M ? l2 * u1(i) : 0.0;
        a(i) = S_.beta1(r) * w + S_.beta2(r) * u2(i);
    }
    return a;
}

void GluedLinearSystem::LL_mode(int j, const Eigen::VectorXd& a, Eigen::VectorXd& f, double& g) const {
    f = op_->apply_mode(j, a);
    f(f.size() - 1) = 0.0;
    g = low(j) ? 0.0 : a(a.size() - 1);
}

LinearData GluedLinearSystem::zero_data() const {
    return {AxisymField(grid()), Eigen::VectorXd::Zero(modes())};
}

AxisymField GluedLinearSystem::P(const LinearData& d) const {
    const Eigen::MatrixXd F = d.f.modes();
    Eigen::MatrixXd out(F.rows(), F.cols());
    for (int j = 1; j <= modes(); ++j) out.col(j - 1) = P_mode(j, F.col(j - 1), low(j) ? 0.0 : d.g(j - 1));
    return AxisymField::from_modes(grid(), out);
}

LinearData GluedLinearSystem::LL(const AxisymField& u) const {
    const Eigen::MatrixXd A = u.modes();
    Eigen::MatrixXd F(A.rows(), A.cols());
    LinearData d = zero_data();
    for (int j = 1; j <= modes(); ++j) {
        Eigen::VectorXd f;
        double g;
        LL_mode(j, A.col(j - 1), f, g);
        F.col(j - 1) = f;
        d.g(j - 1) = g;
    }
    d.f = AxisymField::from_modes(grid(), F);
    return d;
}

void GluedLinearSystem::factor(int j) const {
    if (lu_[j - 1]) return;
    const int N = grid().rows();
    if (low(j)) {
        Eigen::MatrixXd Pj(N, N - 1);
        for (int c = 0; c < N - 1; ++c) Pj.col(c) = P_mode(j, Eigen::VectorXd::Unit(N, c), 0.0);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(Pj);
        const Eigen::MatrixXd Q = qr.householderQ();
        ell_[j - 1] = Q.col(N - 1);
    }
    std::vector<Eigen::Triplet<double>> tr;
    for (int i = 0; i < N - 1; ++i) {
        double lo, mid, hi;
        op_->stencil(j, i, lo, mid, hi);
        if (i > 0) tr.emplace_back(i, i - 1, lo);
        tr.emplace_back(i, i, mid);
        tr.emplace_back(i, i + 1, hi);
    }
    if (low(j)) {
        for (int c = 0; c < N; ++c) tr.emplace_back(N - 1, c, ell_[j - 1](c));
    } else {
        tr.emplace_back(N - 1, N - 1, 1.0);
    }
    Eigen::SparseMatrix<double> A(N, N);
    A.setFromTriplets(tr.begin(), tr.end());
    A.makeCompressed();
    auto lu = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu->compute(A);
    if (lu->info() != Eigen::Success) throw std::runtime_error("direct solve: factorization failed");
    lu_[j - 1] = lu;
}

AxisymField GluedLinearSystem::direct_solve(const LinearData& d) const {
    const int N = grid().rows();
    const Eigen::MatrixXd F = d.f.modes();
    Eigen::MatrixXd out(N, modes());
    for (int j = 1; j <= modes(); ++j) {
        factor(j);
        Eigen::VectorXd rhs = F.col(j - 1);
        rhs(N - 1) = low(j) ? 0.0 : d.g(j - 1);
        out.col(j - 1) = lu_[j - 1]->solve(rhs);
    }
    return AxisymField::from_modes(grid(), out);
}

double GluedLinearSystem::data_norm(const LinearData& d) const {
    AxisymField f = d.f;
    f.v.row(f.rows() - 1).setZero();
    double v = weighted_norm_tilde(S_, f, 0, 0.5, delta_ - 2.0).value;
    const Eigen::MatrixXd& phi = grid().zonal->phi();
    for (int j = 1; j <= modes(); ++j) {
        if (low(j)) continue;
        const double nu = mode_[j - 1].nu_p + mode_[j - 1].nu_q;
        v += std::abs(d.g(j - 1)) * phi.col(j - 1).cwiseAbs().maxCoeff() * (1 + std::sqrt(nu) + nu);
    }
    return v;
}

LinearData random_linear_data(const GluedLinearSystem& sys, unsigned seed, bool with_boundary) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int N = sys.grid().rows(), J = sys.modes();
    const BaseSurface& b = *sys.grid().base;
    const double lmin = std::log(b.r(0));
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(N, J);
    for (int j = 1; j <= J; ++j) {
        double c[4];
        for (double& x : c) x = nd(rng) * std::ldexp(1.0, 1 - j);
        for (int i = 0; i < N - 1; ++i) {
            const double r = b.r(i), t = std::log(r) / lmin;
            double s = 0;
            for (int m = 0; m < 4; ++m) s += c[m] * std::cos(m * M_PI * t);
            F(i, j - 1) = std::pow(r, sys.delta() - 2.0) * s;
        }
    }
    LinearData d = sys.zero_data();
    d.f = AxisymField::from_modes(sys.grid(), F);
    if (with_boundary)
        for (int j = 1; j <= J; ++j)
            if (!sys.low(j)) d.g(j - 1) = nd(rng) * std::ldexp(1.0, 1 - j);
    return d;
}

DefectReport measure_defect(const GluedLinearSystem& sys, unsigned seed, int starts, int iterations) {
    DefectReport rep;
    rep.lambda = sys.surface().lambda;
    for (int s = 0; s < starts; ++s) {
        LinearData x = random_linear_data(sys, seed + 7919u * s, s % 2 == 0);
        for (int it = 0; it < iterations; ++it) {
            const double nx = sys.data_norm(x);
            LinearData y = sys.LL(sys.P(x));
            y.f.v -= x.f.v;
            y.f.v.row(y.f.rows() - 1).setZero();
            y.g -= x.g;
            for (int j = 1; j <= sys.modes(); ++j)
                if (sys.low(j)) y.g(j - 1) = 0.0;
            const double ny = sys.data_norm(y);
            rep.samples.push_back(ny / nx);
            if (ny == 0.0) break;
            y.f.v /= ny;
            y.g /= ny;
            x = y;
        }
    }
    for (double v : rep.samples) rep.defect = std::max(rep.defect, v);
    return rep;
}

}  // namespace conefoliate
