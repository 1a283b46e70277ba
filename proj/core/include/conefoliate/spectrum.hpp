#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "conefoliate/cone.hpp"

namespace conefoliate {

/// Small exact rational, enough for eigenvalue bookkeeping.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);
    double value() const { return double(num) / double(den); }
    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(Rational a, Rational b);
    std::string str() const;
};

/// Exact square root of a rational if it is a perfect square.
bool rational_sqrt(Rational r, Rational& out);

/// Growth exponents a +- sqrt(d)/2 held exactly; rational when d is a square.
struct ExactGamma {
    Rational a;  ///< -(n-2)/2
    Rational d;  ///< discriminant (n-2)^2 + 4 mu
    bool rational() const;
    /// Requires rational(). sign = +1 or -1.
    Rational root(int sign) const;
    double value(int sign) const;
};

enum class ModeClass { dilation, translation, rotation, graphical };
const char* mode_class_name(ModeClass c);

struct Mode {
    int j = 1;
    int k = 1;
    double nu_p = 0;
    double nu_q = 0;
    double mu = 0;
    double gamma_plus = 0;
    double gamma_minus = 0;
    int index = 0;
    ModeClass cls = ModeClass::graphical;

    bool low() const { return cls != ModeClass::graphical; }
};

Rational nu_exact(int j, int p, int n);
double nu(int j, int p, int n);
Rational mu_exact(int j, int k, const ConeParams& cone);
ExactGamma gamma_exact(int j, int k, const ConeParams& cone);

/// Throws std::domain_error on a negative discriminant.
Mode make_mode(int j, int k, const ConeParams& cone);

/// All modes with mu <= mu_max, ascending mu, ties by (j,k).
std::vector<Mode> enumerate_modes(const ConeParams& cone, double mu_max);

/// Dimension of degree-m spherical harmonics on S^p.
long harmonic_dimension(int m, int p);

using BoundaryData = std::vector<std::pair<Mode, double>>;

BoundaryData project_Pi(const BoundaryData& g);

/// Area of the unit sphere S^k.
double sphere_area(int k);
/// Area of the link.
double link_area(const ConeParams& cone);

/// L^2(link)-normalized zonal eigenfunction of degree j-1 on the scaled S^p
/// factor at polar angle theta, constant along S^q, positive at theta = 0.
double axisym_eigenfunction(int j, double theta, const ConeParams& cone);

/// Value and first two theta-derivatives of the same function.
void axisym_eigenfunction_d(int j, double theta, const ConeParams& cone, double& f,
                            double& df, double& d2f);

/// Eigenvalue of the unit-sphere Laplacian on degree j-1 harmonics: (j-1)(j+p-2).
double unit_sphere_eigenvalue(int j, int p);

}  // namespace conefoliate
