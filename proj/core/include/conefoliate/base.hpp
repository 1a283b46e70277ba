#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conefoliate/cone.hpp"
#include "conefoliate/jet.hpp"
#include "conefoliate/profile.hpp"

namespace conefoliate {

enum class BaseKind { cone, leaf, glued };

std::string base_kind_name(BaseKind k);

/// Generating curve of the base in the (|x|, |y|) quadrant at one grid node,
/// as Taylor jets in the computational coordinate xi.
struct BaseNode {
    Jet<3> X, Y;    ///< position
    Jet<3> n1, n2;  ///< unit normal (exact through second order)
    double r = 0;   ///< radius of the nearest cone point (cone coordinate rho)
    double s = 0;   ///< arclength from the tip (leaf and glued bases)
};

/// Rotationally symmetric base hypersurface sampled on a uniform xi grid.
///
/// Cone: xi = log r, nodes xi_min .. xi_max (both ends are boundary rows).
/// Leaf and glued: s = |lambda| a sinh(xi) with cell-centred nodes
/// xi_i = (i + 1/2) h; the tip closes the grid by reflection and the last
/// node is the outer boundary.
class BaseSurface {
public:
    ConeParams cone;
    BaseKind kind = BaseKind::cone;
    double lambda = 0.0;    ///< signed leaf scale (0 for the cone)
    double r_lambda = 0.0;  ///< gluing radius (glued only)
    double map_a = 0.25;    ///< sinh map constant in unit-leaf arclength
    double h = 0.0;
    double xi0 = 0.0;
    /// 0: no tip; +1: tip on {y = 0} (u even in xi); -1: tip on {x = 0}
    /// (u(-xi, theta) = u(xi, pi - theta)).
    int tip_parity = 0;
    std::vector<BaseNode> nodes;

    int size() const { return int(nodes.size()); }
    double xi(int i) const { return xi0 + i * h; }
    double r(int i) const { return nodes[i].r; }
    Eigen::VectorXd rvec() const;
    /// First row carrying an interior equation; row size()-1 is the boundary.
    int first_row() const { return tip_parity != 0 ? 0 : 1; }

    static BaseSurface make_cone(const ConeParams& cone, double r_min, double r_max, int N);
    /// |lambda| * unit, cut at cone radius r_out; unit must be the normalized
    /// S_+ (lambda > 0) or S_- (lambda < 0).
    static BaseSurface make_leaf(const ProfileCurve& unit, double lambda, double r_out, int N,
                                 double a = 0.25);
    /// Same sinh grid with a prescribed spacing and node count.
    static BaseSurface make_leaf_spacing(const ProfileCurve& unit, double lambda, double h, int N,
                                         double a = 0.25);
    /// The leaf inside r_lambda, the cone beyond 2 r_lambda, and the leaf's
    /// normal height over the cone times gamma_1 in between; cut at r = 1.
    static BaseSurface make_glued(const ProfileCurve& unit, double lambda, double r_lambda, int N,
                                  double a = 0.25);
};

using BasePtr = std::shared_ptr<const BaseSurface>;

/// Orbit-space point (x1, |x_perp|, |y|) of graph(u) at (node, theta).
Eigen::Vector3d orbit_point(const BaseNode& node, double theta, double u);

}  // namespace conefoliate
