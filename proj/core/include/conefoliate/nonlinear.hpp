#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "conefoliate/glued.hpp"
#include "conefoliate/spectrum.hpp"

namespace conefoliate {

struct NeumannInfo {
    int iterations = 0;
    double relative_residual = 0;  ///< ||LL R d - d|| / ||d|| in the data norm
};

/// R = P (LL P)^{-1}, with (LL P)^{-1} summed as a Neumann series.
/// Throws std::runtime_error when the series does not reach max_tol.
AxisymField right_inverse_R(const GluedLinearSystem& sys, const LinearData& d,
                            NeumannInfo* info = nullptr, double tol = 1e-12, int max_iter = 80,
                            double max_tol = 1e-8);

struct SolveConfig {
    ConeParams cone = ConeParams::make(3, 3);
    double delta = 1.3;
    double lambda = 1e-3;
    GlueConfig grid;
    double tol_residual = 1e-8;  ///< step-norm and final residual tolerance
    int max_iter = 50;
    double ball_c = 1e4;  ///< E_g radius constant
    BoundaryData g;       ///< zonal (j, 1) modes only
    double alpha = 0.5;
};

struct SolveReport {
    std::vector<double> iterate_norms;  ///< ||u_k||_{2,delta}
    std::vector<double> step_norms;     ///< ||u_{k+1} - u_k||_{2,delta}
    std::vector<double> contraction;    ///< step_k / step_{k-1}
    std::vector<int> neumann_iterations;
    int iterations = 0;
    bool converged = false;
    double final_residual = 0;      ///< weighted ||M(u)||_{delta-2} on interior rows
    double final_residual_sup = 0;  ///< unweighted sup of M(u) on interior rows
    double boundary_error = 0;      ///< max over steps of |Pi(u|Sigma) - Pi g|
    double g_norm = 0;              ///< ||Pi g|| (sum of |coefficients| times mode sup bounds)
    double seed_distance = 0;       ///< ||u - H g||_{2,delta}
    double eg_ratio = 0;            ///< seed_distance / g_norm^2
    bool in_ball = false;           ///< seed_distance <= c ||g||^2
    double max_contraction_tail = 0;  ///< max contraction over the last five steps
    std::string failure;
};

/// Zonal coefficient vector (one entry per Gauss mode) of boundary data;
/// throws for non-zonal entries or modes beyond the basis.
Eigen::VectorXd zonal_coefficients(const BoundaryData& g, int modes);

/// Picard iteration u <- R(-Qt(u), Pi g) from the seed H g = R(0, Pi g)
/// on a prepared glued system. g holds one coefficient per zonal mode.
struct PicardResult {
    AxisymField u;
    AxisymField seed;
    SolveReport report;
};
PicardResult picard_iterate(const GluedLinearSystem& sys, const Eigen::VectorXd& g,
                            const SolveConfig& cfg);

/// Builds the glued surface for cfg.lambda and runs picard_iterate.
PicardResult picard_solve(const SolveConfig& cfg);

/// graph_{S~}(u) as a normal graph over the leaf S_lambda on the matching
/// sinh grid, by nearest-point projection along each theta column.
struct LeafTransfer {
    AxisymField height;             ///< on the leaf grid
    double boundary_constant = 0;   ///< mean of (leaf trace - glued trace)
    double boundary_spread = 0;     ///< max deviation of that difference from its mean
    double inner_identity_error = 0;  ///< max |height - u| for r <= r_lambda
    double max_shift = 0;           ///< max arclength shift of the projection
};
LeafTransfer transfer_to_leaf(const GluedSurface& S, const AxisymField& u);

/// Reduced group parameters: translation along the symmetry axis and the
/// signed leaf coefficient (lambda^{1 - gamma_1^+} with the sign of the side).
struct ThetaParams {
    double a_axis = 0;
    double lambda = 0;
    double norm() const { return std::abs(a_axis) + std::abs(lambda); }
};

/// Spherical height over the link of the boundary of the cone translated by
/// a along the axis, at the Gauss nodes.
Eigen::VectorXd translated_link_height(const ConeParams& cone, const ZonalBasis& zonal, double a);

/// Spherical height over the link of the leaf with signed coefficient ell.
double leaf_boundary_height(const ConeParams& cone, double ell,
                            const std::shared_ptr<const ProfileCurve>& unit);

/// sp.graph_Sigma(g) re-expressed as a spherical graph over the boundary
/// link of theta(C), as zonal coefficients (theta.lambda leaves the link fixed).
Eigen::VectorXd g_transfer(const ConeParams& cone, const ZonalBasis& zonal, const Eigen::VectorXd& g,
                           const ThetaParams& theta);

struct ThetaConfig {
    SolveConfig solve;
    double ell_floor = 1e-14;  ///< |ell| below this uses the + side at the floor
    double newton_tol = 1e-6;
    int newton_max = 20;
};

/// Cached unit leaves and the calibrated identification h.
class ThetaContext {
public:
    explicit ThetaContext(const ThetaConfig& cfg);

    const ThetaConfig& config() const { return cfg_; }
    const ZonalBasis& zonal() const { return *zonal_; }
    std::shared_ptr<const ZonalBasis> zonal_ptr() const { return zonal_; }
    std::shared_ptr<const ProfileCurve> unit(Side s) const {
        return s == Side::E_plus ? plus_ : minus_;
    }
    /// Leaf scale and side for a signed coefficient.
    void leaf_of(double ell, double& lambda, Side& side) const;
    /// Dilation and translation boundary coefficients of the calibration families.
    double dilation_coefficient(double ell) const;
    double translation_coefficient(double a) const;
    /// Inverse of the two calibrations by 1-D root finds.
    ThetaParams identify(double c_dilation, double c_translation) const;

private:
    ThetaConfig cfg_;
    std::shared_ptr<const ZonalBasis> zonal_;
    std::shared_ptr<const ProfileCurve> plus_, minus_;
};

struct ThetaEval {
    ThetaParams value;
    double c_dilation = 0, c_translation = 0;  ///< low-mode mismatch coefficients
    PicardResult picard;
    std::shared_ptr<GluedLinearSystem> system;
    Eigen::VectorXd g_theta;
};

ThetaEval theta_map(const ThetaContext& ctx, const Eigen::VectorXd& g, const ThetaParams& theta);

struct NearConeReport {
    std::vector<ThetaParams> iterates;
    std::vector<double> residuals;  ///< |Theta(g, theta_k)|
    Eigen::Matrix2d jacobian = Eigen::Matrix2d::Identity();
    bool converged = false;
    bool trust_region_used = false;
    double boundary_mismatch = 0;  ///< sup over nodes of the full trace mismatch
    std::string failure;
};

struct NearConeResult {
    ThetaParams theta;
    ThetaEval eval;
    NearConeReport report;
};

NearConeResult solve_near_cone(const ThetaContext& ctx, const Eigen::VectorXd& g,
                               const ThetaParams* seed = nullptr);

struct ContinuityProbe {
    std::vector<double> t;
    std::vector<ThetaParams> theta;
    double max_increment = 0, median_increment = 0;
    bool pass = false;
};
ContinuityProbe continuity_probe(const ThetaContext& ctx, const Eigen::VectorXd& g, int steps = 10);

}  // namespace conefoliate
