#pragma once

#include <string>

#include <Eigen/Dense>

namespace conefoliate {

/// The quadratic cone {q|x|^2 = p|y|^2} in R^{p+1} x R^{q+1}.
struct ConeParams {
    int p = 3;
    int q = 3;
    int n = 7;  ///< hypersurface dimension, p + q + 1
    bool minimizing = true;

    /// Throws std::invalid_argument for p, q < 1, and for p, q < 2 when
    /// require_minimizing is set.
    static ConeParams make(int p, int q, bool require_minimizing = true);

    /// Radii of the two sphere factors of the link.
    double cp() const;
    double cq() const;
};

bool is_minimizing(int p, int q);

struct AmbientPoint {
    Eigen::VectorXd x;
    Eigen::VectorXd y;

    double norm() const;
};

enum class Side { E_plus, E_minus, on_cone };

const char* side_name(Side s);
Side side_from_name(const std::string& s);

/// Relative tolerance: the threshold is tol * |pt|^2.
Side side_classify(const AmbientPoint& pt, const ConeParams& cone, double tol = 1e-12);

/// Axisymmetric link point at polar angle theta against e1 of R^{p+1};
/// the y factor points along its own e1.
AmbientPoint link_point(const ConeParams& cone, double theta);

bool on_link(const AmbientPoint& w, const ConeParams& cone, double tol = 1e-10);

/// Unit normal of the cone at a link point, pointing into E_plus.
AmbientPoint link_normal(const AmbientPoint& w, const ConeParams& cone, double tol = 1e-10);

/// cos(t) w + sin(t) nu(w). Requires |t| < pi/2.
AmbientPoint spherical_exp(const AmbientPoint& w, double t, const ConeParams& cone);

/// (w1, w2) -> (-w2, w1). Needs both factors of equal length.
AmbientPoint T_map(const AmbientPoint& w);

}  // namespace conefoliate
