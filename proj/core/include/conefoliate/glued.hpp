#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "conefoliate/axisym.hpp"
#include "conefoliate/curvature.hpp"
#include "conefoliate/profile.hpp"
#include "conefoliate/radial.hpp"

namespace conefoliate {

struct GlueConfig {
    int N = 400;          ///< xi nodes on the glued surface
    int n_theta = 8;      ///< Gauss nodes in theta
    double a_minus = 0.5;
    double a_plus = 0.99;
    double map_a = 0.25;  ///< sinh map constant
    double R_out = 1e4;   ///< truncation radius of the S_+ solve (S_+ units)
    double delta = 1.3;
};

/// beta(psi(log r / log lambda)) with psi(x) = (x - a_from) / (a_to - a_from).
double cutoff_beta(double r, double lambda, double a_from, double a_to);

struct GluedSurface {
    ConeParams cone;
    double lambda = 0;
    double r_lambda = 0;
    double a_minus = 0.5, a0 = 0, a_plus = 0.99;
    Side side = Side::E_plus;                  ///< side of the inner leaf
    std::shared_ptr<const ProfileCurve> unit;  ///< normalized S_+ or S_-
    BasePtr base;
    AxisymGrid grid;

    double gamma1(double r) const;
    double gamma2(double r) const { return 1.0 - gamma1(r); }
    /// 1 for r < lambda^{a_mid}, 0 for r > lambda^{a_minus}; a_mid = (a_minus + a0)/2.
    double beta1(double r) const;
    /// 0 for r < lambda^{a_plus}, 1 for r > r_lambda.
    double beta2(double r) const;
    double a_mid() const { return 0.5 * (a_minus + a0); }
    /// gamma_1(r) times the leaf's normal height over the cone.
    double blend_height(double r) const;
    /// Throws unless the cutoff ordering holds.
    void validate() const;
};

/// Normalized S_+ (or S_-) shot far enough for the given radius.
std::shared_ptr<const ProfileCurve> unit_leaf(const ConeParams& cone, double R_needed,
                                              Side side = Side::E_plus);

/// lambda > 0 is the scale; the side follows the unit leaf (S_+ by default).
GluedSurface build_approx_surface(const ConeParams& cone, double lambda, const GlueConfig& cfg = {},
                                  std::shared_ptr<const ProfileCurve> unit = nullptr);

/// Dyadic-annulus weighted Holder estimator on an axisymmetric field
/// (annuli by cone radius, derivatives in the R^{-2}-rescaled metric).
WeightedNormReport weighted_norm_field(const AxisymField& u, int k, double alpha, double delta,
                                       int first_row = -1, int last_row = -1);
WeightedNormReport weighted_norm_S_lambda(const AxisymField& u, int k, double alpha, double delta);
/// ||gamma_1 u||_{S_lambda} + ||gamma_2 u||_{cone} on the glued surface.
WeightedNormReport weighted_norm_tilde(const GluedSurface& S, const AxisymField& u, int k,
                                       double alpha, double delta);

/// Data (f, Pi g) of the boundary problem; g holds one coefficient per
/// zonal mode (low-mode entries are ignored).
struct LinearData {
    AxisymField f;
    Eigen::VectorXd g;
};

/// L_1 on the truncated S_+ per zonal mode: axis closure with the
/// decaying-mode outer condition for graphical modes, and the regular
/// solution vanishing at the tip for low modes.
class SplusSolver {
public:
    SplusSolver(std::shared_ptr<const ProfileCurve> unit, double h, int rows,
                std::shared_ptr<const ZonalBasis> zonal, double map_a = 0.25);

    const AxisymGrid& grid() const { return grid_; }
    const CurvatureOperator& op() const { return *op_; }
    Eigen::VectorXd solve_mode(int j, const Eigen::VectorXd& f) const;
    AxisymField solve(const AxisymField& f1) const;

private:
    AxisymGrid grid_;
    std::shared_ptr<CurvatureOperator> op_;
    std::vector<double> robin_;  ///< a_{M-1} = robin_j a_{M-2}
    std::vector<bool> low_;
};

/// solve_on_Splus on the default grid matching a glued surface (or a
/// standalone S_+ grid).
AxisymField solve_on_Splus(const SplusSolver& solver, const AxisymField& f1, double delta);

/// The operator (L_tilde u, Pi u|boundary) on the glued surface, the
/// approximate inverse P and the direct bordered solve.
class GluedLinearSystem {
public:
    GluedLinearSystem(const GluedSurface& S, const GlueConfig& cfg);

    const GluedSurface& surface() const { return S_; }
    const AxisymGrid& grid() const { return S_.grid; }
    const CurvatureOperator& op() const { return *op_; }
    const SplusSolver& splus() const { return *splus_; }
    double delta() const { return delta_; }
    int modes() const { return grid().cols(); }
    bool low(int j) const { return low_[j - 1]; }

    /// Per-mode pieces: data vector is rows [0, N-1) of f_j plus g_j (unused
    /// for low modes).
    Eigen::VectorXd P_mode(int j, const Eigen::VectorXd& f, double g) const;
    void LL_mode(int j, const Eigen::VectorXd& a, Eigen::VectorXd& f, double& g) const;

    AxisymField P(const LinearData& d) const;
    LinearData LL(const AxisymField& u) const;
    LinearData zero_data() const;

    /// Direct solve of LL u = d with u in the range of P for low modes.
    AxisymField direct_solve(const LinearData& d) const;

    /// Residual norm of data in the weighted norms used for the defect.
    double data_norm(const LinearData& d) const;

private:
    GluedSurface S_;
    double delta_;
    std::shared_ptr<CurvatureOperator> op_;
    std::shared_ptr<SplusSolver> splus_;
    std::vector<bool> low_;
    std::vector<Mode> mode_;
    mutable std::vector<Eigen::VectorXd> ell_;  ///< left null vectors of P_j (low modes)
    mutable std::vector<std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>>> lu_;
    void factor(int j) const;
};

struct DefectReport {
    double lambda = 0;
    double defect = 0;  ///< estimated ||LL P - Id||
    std::vector<double> samples;
};

/// Power-iteration estimate of ||LL P - Id|| on random smooth data.
DefectReport measure_defect(const GluedLinearSystem& sys, unsigned seed = 1, int starts = 4,
                            int iterations = 6);

/// Sample of random smooth data with modes up to jmax.
LinearData random_linear_data(const GluedLinearSystem& sys, unsigned seed, bool with_boundary = true);

}  // namespace conefoliate
