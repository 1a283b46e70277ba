#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "conefoliate/spectrum.hpp"

namespace conefoliate {

/// Uniform grid in t = log r.
struct RadialGrid {
    double t_min = std::log(1e-4);
    double t_max = 0.0;
    int N = 513;

    static RadialGrid make(int N = 513, double r_min = 1e-4, double r_max = 1.0);
    double h() const { return (t_max - t_min) / (N - 1); }
    double t(int i) const { return t_min + i * h(); }
    double r(int i) const { return std::exp(t(i)); }
    Eigen::VectorXd rvec() const;
};

struct ModeEntry {
    Mode mode;
    Eigen::VectorXd a;  ///< radial coefficient samples
};

/// u(r w) = sum_i a_i(r) phi_i(w) on a radial grid.
struct ModeField {
    ConeParams cone;
    RadialGrid grid;
    std::vector<ModeEntry> entries;
    double delta = 1.3;

    const ModeEntry* find(int j, int k) const;
};

/// r^{-2}(u_tt + (n-2) u_t - mu u), central differences inside, one-sided
/// second-order stencils at the two ends.
ModeField apply_L_cone(const ModeField& u);

/// Per-mode variation-of-parameters solve on arbitrary increasing radii
/// ending at r = 1.
struct ModeSolveInfo {
    bool boundary_used = false;
    double discarded_boundary = 0.0;  ///< boundary coefficient dropped for low modes
    double homogeneous_added = 0.0;   ///< coefficient of r^{gamma+} added for graphical modes
};

Eigen::VectorXd solve_mode_ode(const Mode& mode, const ConeParams& cone, const Eigen::VectorXd& r,
                               const Eigen::VectorXd& f, double g, double delta,
                               ModeSolveInfo* info = nullptr);

/// Throws unless 1 < delta < gamma_4^+.
void check_delta(const ConeParams& cone, double delta);
/// Growth exponent of the first graphical mode.
double gamma4_plus(const ConeParams& cone);

ModeField H_operator(const BoundaryData& g, const ConeParams& cone, const RadialGrid& grid,
                     double delta);

struct WeightedNormReport {
    int k = 0;
    double alpha = 0.5;
    double delta = 0.0;
    double value = 0.0;
    std::vector<double> annulus_r;      ///< inner radius of each dyadic annulus
    std::vector<double> annulus_value;  ///< scaled local norm
};

/// Weighted norm estimator for one radial profile a(t) on a uniform t-grid
/// (dyadic annuli [2^{-m-1}, 2^{-m}]; a lower-bound estimator).
WeightedNormReport weighted_norm_radial(const RadialGrid& grid, const Eigen::VectorXd& a, int k,
                                        double alpha, double delta, double angular = 0.0);

/// Sums per-mode radial norms weighted by a sup bound of each eigenfunction.
WeightedNormReport weighted_norm_cone(const ModeField& u, int k, double alpha, double delta);

struct LinearSolveReport {
    double residual_max = 0.0;       ///< max |L u - f| over interior nodes, r-weighted
    double boundary_error = 0.0;     ///< max |Pi(u|Sigma) - Pi g|
    double norm_u = 0.0;             ///< C^{2,alpha}_delta
    double norm_f = 0.0;             ///< C^{0,alpha}_{delta-2}
    double norm_g = 0.0;             ///< sum of |Pi g| coefficients
    double schauder_constant = 0.0;  ///< norm_u / (norm_f + norm_g)
    std::vector<std::pair<Mode, double>> discarded;
};

/// Solves L_C u = f with Pi(u|Sigma) = Pi g, per mode.
ModeField linear_dirichlet_solve(const ModeField& f, const BoundaryData& g, double delta,
                                 LinearSolveReport* report = nullptr);

}  // namespace conefoliate
