#pragma once

#include <vector>

#include <Eigen/Dense>

#include "conefoliate/cone.hpp"
#include "conefoliate/jet.hpp"

namespace conefoliate {

/// One arclength sample of an equivariant generating curve in the
/// (|x|, |y|) quadrant. rho and U are the coordinates along and normal to
/// the cone line; psi is the tangent angle measured from the cone line.
struct ProfileSample {
    double s = 0, x = 0, y = 0, xdot = 0, ydot = 0;
    double rho = 0, U = 0, psi = 0;
};

/// Raw integration state (rho, U, psi).
using ProfileState = Eigen::Vector3d;

class ProfileCurve {
public:
    ConeParams cone;
    Side side = Side::E_plus;
    double lambda = 1.0;      ///< leaf parameter (1 for the normalized S_+/S_-)
    double norm_coeff = 1.0;  ///< fitted r^{gamma_1^+} coefficient after normalization
    double scale = 1.0;       ///< multiplier from raw shooting units
    double tol = 1e-10;

    /// Raw samples from the integrator (unscaled).
    std::vector<ProfileSample> raw;

    /// Scaled sample at raw index i.
    ProfileSample sample(std::size_t i) const;
    std::size_t size() const { return raw.size(); }
    double s_max() const { return raw.back().s * scale; }
    double r_max() const;

    /// Dense state (rho, U, psi) at scaled arclength s, 0 <= s <= s_max.
    ProfileState state_at(double s) const;
    ProfileSample sample_at(double s) const;

    /// Taylor jets of rho, U, psi in the scaled arclength around s.
    void jets_at(double s, Jet<3>& rho, Jet<3>& U, Jet<3>& psi) const;

    /// Arclength where rho reaches the given (scaled) value.
    double s_at_rho(double rho) const;
};

/// Curvature q xdot / y - p ydot / x of a minimal generating curve.
double profile_curvature(const ConeParams& cone, double x, double y, double xdot, double ydot);

/// kappa^2 + p (ydot/x)^2 + q (xdot/y)^2.
double profile_A2(const ConeParams& cone, double x, double y, double xdot, double ydot, double kappa);

/// d/ds of (rho, U, psi) in raw units.
ProfileState profile_rhs(const ConeParams& cone, const ProfileState& st);

/// Shoots from (1,0) (E_plus) or (0,1) (E_minus) out to radius R_max and
/// normalizes so that the fitted r^{gamma_1^+} coefficient is +-1.
ProfileCurve shoot_profile(const ConeParams& cone, Side side, double R_max = 100.0,
                           double tol = 1e-10, bool normalize = true);

struct AsymptoticFit {
    double gamma_hat = 0;
    double coeff = 0;
    double r_lo = 0, r_hi = 0;
    double next_exponent = 0;  ///< slope of the residual after removing the leading term
};

/// Log-log least squares of the normal height over the cone on [r_lo, r_hi];
/// r_hi <= 0 selects [R_max/10, R_max].
AsymptoticFit asymptotic_fit(const ProfileCurve& curve, double r_lo = 0, double r_hi = 0);

/// Rescales the curve so the fitted coefficient on the default window becomes +-1.
void normalize_profile(ProfileCurve& curve, double r_lo = 0, double r_hi = 0);

/// lambda S_+ for lambda > 0, |lambda| S_- for lambda < 0.
ProfileCurve scale_leaf(const ProfileCurve& curve, double lambda);

/// Normal height over the cone at cone radii r (must be inside the curve's range).
Eigen::VectorXd graph_over_cone(const ProfileCurve& curve, const Eigen::VectorXd& r);

/// Number of crossings of the ray at angle beta (from the x axis in the
/// quadrant) and the minimum of position . normal at those crossings.
struct RayProbe {
    int crossings = 0;
    double min_transversality = 0;
};
RayProbe ray_probe(const ProfileCurve& curve, double beta);

/// Cone line angle atan(sqrt(q/p)).
double cone_angle(const ConeParams& cone);

}  // namespace conefoliate
