#pragma once

// Truncated Taylor series in one variable, used to carry exact derivatives
// of the base profiles through the geometry.

#include <array>
#include <cmath>

namespace conefoliate {

template <int N>
struct Jet {
    std::array<double, N + 1> c{};

    Jet() = default;
    Jet(double v) { c[0] = v; }  // NOLINT: implicit constant

    static Jet variable(double v) {
        Jet j(v);
        if constexpr (N >= 1) j.c[1] = 1.0;
        return j;
    }

    double operator[](int k) const { return c[k]; }
    double& operator[](int k) { return c[k]; }
    double value() const { return c[0]; }
    /// k-th derivative at the expansion point
    double deriv(int k) const {
        double f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        return c[k] * f;
    }

    Jet& operator+=(const Jet& o) { for (int k = 0; k <= N; ++k) c[k] += o.c[k]; return *this; }
    Jet& operator-=(const Jet& o) { for (int k = 0; k <= N; ++k) c[k] -= o.c[k]; return *this; }
    Jet operator-() const { Jet r; for (int k = 0; k <= N; ++k) r.c[k] = -c[k]; return r; }
};

template <int N> Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N> Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N> Jet<N> operator+(Jet<N> a, double b) { a.c[0] += b; return a; }
template <int N> Jet<N> operator+(double b, Jet<N> a) { a.c[0] += b; return a; }
template <int N> Jet<N> operator-(Jet<N> a, double b) { a.c[0] -= b; return a; }
template <int N> Jet<N> operator-(double b, const Jet<N>& a) { Jet<N> r = -a; r.c[0] += b; return r; }

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r;
    for (int k = 0; k <= N; ++k)
        for (int i = 0; i <= k; ++i) r.c[k] += a.c[i] * b.c[k - i];
    return r;
}
template <int N> Jet<N> operator*(Jet<N> a, double s) { for (auto& v : a.c) v *= s; return a; }
template <int N> Jet<N> operator*(double s, Jet<N> a) { for (auto& v : a.c) v *= s; return a; }
template <int N> Jet<N> operator/(Jet<N> a, double s) { for (auto& v : a.c) v /= s; return a; }

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> q;
    for (int k = 0; k <= N; ++k) {
        double s = a.c[k];
        for (int j = 1; j <= k; ++j) s -= b.c[j] * q.c[k - j];
        q.c[k] = s / b.c[0];
    }
    return q;
}
template <int N> Jet<N> operator/(double a, const Jet<N>& b) { return Jet<N>(a) / b; }

template <int N>
void sincos(const Jet<N>& u, Jet<N>& s, Jet<N>& co) {
    s = Jet<N>();
    co = Jet<N>();
    s.c[0] = std::sin(u.c[0]);
    co.c[0] = std::cos(u.c[0]);
    for (int k = 1; k <= N; ++k) {
        double a = 0, b = 0;
        for (int j = 1; j <= k; ++j) {
            a += j * u.c[j] * co.c[k - j];
            b -= j * u.c[j] * s.c[k - j];
        }
        s.c[k] = a / k;
        co.c[k] = b / k;
    }
}
template <int N> Jet<N> sin(const Jet<N>& u) { Jet<N> s, c; sincos(u, s, c); return s; }
template <int N> Jet<N> cos(const Jet<N>& u) { Jet<N> s, c; sincos(u, s, c); return c; }

template <int N>
Jet<N> exp(const Jet<N>& u) {
    Jet<N> e;
    e.c[0] = std::exp(u.c[0]);
    for (int k = 1; k <= N; ++k) {
        double a = 0;
        for (int j = 1; j <= k; ++j) a += j * u.c[j] * e.c[k - j];
        e.c[k] = a / k;
    }
    return e;
}

template <int N>
Jet<N> log(const Jet<N>& u) {
    Jet<N> l;
    l.c[0] = std::log(u.c[0]);
    for (int k = 1; k <= N; ++k) {
        double a = k * u.c[k];
        for (int j = 1; j < k; ++j) a -= j * l.c[j] * u.c[k - j];
        l.c[k] = a / (k * u.c[0]);
    }
    return l;
}

template <int N>
Jet<N> sqrt(const Jet<N>& u) {
    Jet<N> s;
    s.c[0] = std::sqrt(u.c[0]);
    for (int k = 1; k <= N; ++k) {
        double a = u.c[k];
        for (int j = 1; j < k; ++j) a -= s.c[j] * s.c[k - j];
        s.c[k] = a / (2 * s.c[0]);
    }
    return s;
}

/// Derivative jet; the top coefficient is lost and set to zero.
template <int N>
Jet<N> derivative(const Jet<N>& u) {
    Jet<N> d;
    for (int k = 0; k < N; ++k) d.c[k] = (k + 1) * u.c[k + 1];
    return d;
}

/// Antiderivative vanishing at the expansion point (truncated).
template <int N>
Jet<N> integral(const Jet<N>& u) {
    Jet<N> r;
    for (int k = 1; k <= N; ++k) r.c[k] = u.c[k - 1] / k;
    return r;
}

/// f(g) where f is given as a jet around g(0) and g is any jet.
template <int N>
Jet<N> compose(const Jet<N>& f, const Jet<N>& g) {
    Jet<N> d = g;
    d.c[0] = 0.0;
    Jet<N> r(f.c[N]);
    for (int k = N - 1; k >= 0; --k) r = r * d + f.c[k];
    return r;
}

inline double value_of(double v) { return v; }
template <int N>
double value_of(const Jet<N>& j) { return j.value(); }

}  // namespace conefoliate
