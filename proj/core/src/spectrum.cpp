#include "conefoliate/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace conefoliate {

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

static bool isqrt64(std::int64_t v, std::int64_t& r) {
    if (v < 0) return false;
    auto s = static_cast<std::int64_t>(std::llround(std::sqrt(double(v))));
    for (std::int64_t c = std::max<std::int64_t>(0, s - 2); c <= s + 2; ++c)
        if (c * c == v) { r = c; return true; }
    return false;
}

bool rational_sqrt(Rational r, Rational& out) {
    std::int64_t a, b;
    if (!isqrt64(r.num, a) || !isqrt64(r.den, b)) return false;
    out = Rational(a, b);
    return true;
}

bool ExactGamma::rational() const {
    Rational s;
    return rational_sqrt(d, s);
}

Rational ExactGamma::root(int sign) const {
    Rational s;
    if (!rational_sqrt(d, s)) throw std::domain_error("irrational growth exponent");
    return a + Rational(sign) * s / Rational(2);
}

double ExactGamma::value(int sign) const { return a.value() + sign * 0.5 * std::sqrt(d.value()); }

const char* mode_class_name(ModeClass c) {
    switch (c) {
        case ModeClass::dilation: return "dilation";
        case ModeClass::translation: return "translation";
        case ModeClass::rotation: return "rotation";
        default: return "graphical";
    }
}

Rational nu_exact(int j, int p, int n) {
    if (j < 1) throw std::invalid_argument("nu: j must be >= 1");
    return Rational(std::int64_t(j - 1) * (n - 1) * (j + p - 2), p);
}

double nu(int j, int p, int n) { return nu_exact(j, p, n).value(); }

Rational mu_exact(int j, int k, const ConeParams& c) {
    return nu_exact(j, c.p, c.n) + nu_exact(k, c.q, c.n) - Rational(c.n - 1);
}

ExactGamma gamma_exact(int j, int k, const ConeParams& c) {
    const Rational mu = mu_exact(j, k, c);
    ExactGamma g;
    g.a = Rational(-(c.n - 2), 2);
    g.d = Rational(std::int64_t(c.n - 2) * (c.n - 2)) + Rational(4) * mu;
    return g;
}

static ModeClass classify(int j, int k) {
    if (j == 1 && k == 1) return ModeClass::dilation;
    if ((j == 1 && k == 2) || (j == 2 && k == 1)) return ModeClass::translation;
    if (j == 2 && k == 2) return ModeClass::rotation;
    return ModeClass::graphical;
}

Mode make_mode(int j, int k, const ConeParams& c) {
    if (j < 1 || k < 1) throw std::invalid_argument("make_mode: j, k must be >= 1");
    const ExactGamma g = gamma_exact(j, k, c);
    if (g.d < Rational(0))
        throw std::domain_error("make_mode: negative discriminant for (" + std::to_string(j) +
                                "," + std::to_string(k) + ")");
    Mode m;
    m.j = j;
    m.k = k;
    m.nu_p = nu(j, c.p, c.n);
    m.nu_q = nu(k, c.q, c.n);
    m.mu = mu_exact(j, k, c).value();
    m.gamma_plus = g.value(+1);
    m.gamma_minus = g.value(-1);
    m.cls = classify(j, k);
    return m;
}

std::vector<Mode> enumerate_modes(const ConeParams& c, double mu_max) {
    if (!std::isfinite(mu_max)) throw std::invalid_argument("enumerate_modes: mu_max must be finite");
    std::vector<std::pair<Rational, Mode>> out;
    const Rational shift(c.n - 1);
    for (int j = 1; nu_exact(j, c.p, c.n).value() - (c.n - 1) <= mu_max; ++j) {
        for (int k = 1;; ++k) {
            const Rational mu = mu_exact(j, k, c);
            if (mu.value() > mu_max) break;
            out.emplace_back(mu, make_mode(j, k, c));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (!(a.first == b.first)) return a.first < b.first;
        if (a.second.j != b.second.j) return a.second.j < b.second.j;
        return a.second.k < b.second.k;
    });
    std::vector<Mode> modes;
    modes.reserve(out.size());
    for (auto& [mu, m] : out) {
        m.index = int(modes.size()) + 1;
        modes.push_back(m);
    }
    return modes;
}

long harmonic_dimension(int m, int p) {
    if (m < 0) return 0;
    auto binom = [](long a, long b) -> long {
        if (b < 0 || a < b) return 0;
        long r = 1;
        for (long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
        return r;
    };
    return binom(m + p, p) - binom(m + p - 2, p);
}

BoundaryData project_Pi(const BoundaryData& g) {
    BoundaryData out;
    for (const auto& e : g)
        if (!e.first.low()) out.push_back(e);
    return out;
}

double sphere_area(int k) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

double link_area(const ConeParams& c) {
    return sphere_area(c.p) * std::pow(c.cp(), c.p) * sphere_area(c.q) * std::pow(c.cq(), c.q);
}

double unit_sphere_eigenvalue(int j, int p) { return double(j - 1) * (j + p - 2); }

namespace {

// Gegenbauer C_m^alpha and its first derivative at x.
void gegenbauer(int m, double alpha, double x, double& c, double& dc) {
    double c0 = 1.0, c1 = 2.0 * alpha * x;
    // derivative uses C_{m-1}^{alpha+1}
    double d0 = 1.0, d1 = 2.0 * (alpha + 1.0) * x;
    if (m == 0) { c = 1.0; dc = 0.0; return; }
    for (int k = 2; k <= m; ++k) {
        const double c2 = (2.0 * x * (k + alpha - 1.0) * c1 - (k + 2.0 * alpha - 2.0) * c0) / k;
        c0 = c1;
        c1 = c2;
    }
    if (m == 1) {
        dc = 2.0 * alpha;
    } else {
        const double a1 = alpha + 1.0;
        for (int k = 2; k <= m - 1; ++k) {
            const double d2 = (2.0 * x * (k + a1 - 1.0) * d1 - (k + 2.0 * a1 - 2.0) * d0) / k;
            d0 = d1;
            d1 = d2;
        }
        dc = 2.0 * alpha * (m - 1 == 0 ? 1.0 : d1);
    }
    c = c1;
}

double zonal_norm_factor(int j, const ConeParams& cone) {
    const int m = j - 1;
    const double alpha = 0.5 * (cone.p - 1);
    // int_0^pi C_m(cos t)^2 sin^{p-1} t dt
    const double lh = std::log(std::numbers::pi) + (1.0 - 2.0 * alpha) * std::log(2.0) +
                      std::lgamma(m + 2.0 * alpha) - std::lgamma(m + 1.0) - std::log(m + alpha) -
                      2.0 * std::lgamma(alpha);
    const double other = sphere_area(cone.p - 1) * std::pow(cone.cp(), cone.p) *
                         sphere_area(cone.q) * std::pow(cone.cq(), cone.q);
    return 1.0 / std::sqrt(std::exp(lh) * other);
}

}  // namespace

void axisym_eigenfunction_d(int j, double theta, const ConeParams& cone, double& f, double& df,
                            double& d2f) {
    if (j < 1) throw std::invalid_argument("axisym_eigenfunction: j must be >= 1");
    const double alpha = 0.5 * (cone.p - 1);
    const double x = std::cos(theta), s = std::sin(theta);
    double c, dc;
    gegenbauer(j - 1, alpha, x, c, dc);
    const double nf = zonal_norm_factor(j, cone);
    f = nf * c;
    df = -nf * s * dc;
    // zonal eigen-equation on the unit sphere: f'' + (p-1) cot f' = -lambda f
    const double lam = unit_sphere_eigenvalue(j, cone.p);
    if (std::abs(s) > 1e-300)
        d2f = -lam * f - (cone.p - 1) * (x / s) * df;
    else
        d2f = -lam * f / cone.p;
}

double axisym_eigenfunction(int j, double theta, const ConeParams& cone) {
    double f, df, d2f;
    axisym_eigenfunction_d(j, theta, cone, f, df, d2f);
    return f;
}

}  // namespace conefoliate
