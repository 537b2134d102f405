#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "penrose/graph.hpp"

namespace penrose {

/// Normalization for the mass integrals: c_n = 1/(2(n-1) omega_{n-1}).
/// (The displayed constant without the 1/2 makes the Schwarzschild flux limit
/// 2m instead of m; see README "Conventions".)
struct MassConstants {
    int n = 3;
    double omega = 0.0;  // omega_{n-1}, area of the unit (n-1)-sphere
    double c_n = 0.0;
};

MassConstants mass_constants(int n);

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coordinate-sphere ADM flux c_n * integral_{S_r} sum_ij (g_ij,j - g_jj,i) nu_i dS
/// with g_ij = delta_ij + f_i f_j, Euclidean normal and area element.
/// quad_order 0 selects a dimension-aware default (>= 4 otherwise).
double adm_flux_at_radius(const GraphSurface& graph, double r, int quad_order = 0);

struct AdmResult {
    double mass = 0.0;
    double fit_residual = 0.0;  // sup |fit - flux| over the schedule
    bool converged = true;
    std::vector<std::pair<double, double>> flux_by_radius;
};

/// Least-squares fit flux(r) = m + sum_{k=1}^{fit_terms-1} c_k r^{-k(n-2)}.
AdmResult adm_mass(const GraphSurface& graph, const std::vector<double>& radii,
                   int quad_order = 0, int fit_terms = 2);

/// The inner boundary Gamma inside the hyperplane P: a round (n-1)-sphere, a
/// convex surface of revolution, or empty. Curvatures are taken with respect
/// to the inward unit normal, so S_1 > 0 for convex Gamma.
class HorizonShape {
public:
    struct RevolutionProfile {
        // psi in [0, pi]; rho >= 0 with rho(0) = rho(pi) = 0.
        std::function<double(double)> rho, z, drho, dz, ddrho, ddz;
    };

    static HorizonShape none(int n);
    static HorizonShape round_sphere(int n, double radius);
    static HorizonShape surface_of_revolution(int n, RevolutionProfile profile);
    /// Semi-axes (a, ..., a, c): rho = a sin(psi), z = c cos(psi).
    static HorizonShape spheroid(int n, double a, double c);

    int n() const { return n_; }
    bool empty() const { return kind_ == Kind::none; }
    bool round() const { return kind_ == Kind::round; }
    double radius() const;

    double area(int quad_order = 64) const;
    double mean_curvature_integral(int quad_order = 64) const;  // integral of S_1(Gamma)
    bool convex(int samples = 256) const;

private:
    enum class Kind { none, round, revolution };
    Kind kind_ = Kind::none;
    int n_ = 3;
    double radius_ = 0.0;
    RevolutionProfile profile_;
};

struct MassReport {
    int n = 3;
    double adm = 0.0;
    double bulk = 0.0;      // c_n integral Theta R_g dM (truncated)
    double horizon = 0.0;   // c_n integral S_1(Gamma) dGamma
    double penrose_rhs = 0.0;
    double slack = 0.0;              // adm - penrose_rhs
    double residual_massform = 0.0;  // adm - (bulk + horizon)
    double tail_bound = 0.0;         // heuristic bound on the dropped bulk tail
    double adm_fit_residual = 0.0;
    bool adm_converged = true;
    std::vector<std::pair<double, double>> flux_by_radius;
};

struct MassFormulaOptions {
    int quad_order = 0;     // 0 = dimension-aware default
    int radial_panels = 0;  // 0 = dimension-aware default
    std::vector<double> adm_radii;  // absolute; default {10,20,40,80} * max(r_m,1)
    int adm_fit_terms = 2;
};

/// Bulk + horizon mass formula, with the ADM flux mass for cross-validation.
MassReport mass_formula_terms(const GraphSurface& graph, const HorizonShape& horizon,
                              double truncation_radius, const MassFormulaOptions& opts = {});

struct PenroseCheckResult {
    double adm = 0.0;
    double penrose_rhs = 0.0;
    double slack = 0.0;
    double af_lhs = 0.0;   // c_n integral S_1(Gamma)
    double af_rhs = 0.0;   // equals penrose_rhs
    bool af_valid = false; // false when the horizon is not convex
};

struct PenroseOptions {
    int quad_order = 0;
    int fit_terms = 3;
    std::vector<double> adm_radii;  // absolute; default {100,200,400,800} * r_inner
};

PenroseCheckResult penrose_check(const GraphSurface& graph, const HorizonShape& horizon,
                                 const PenroseOptions& opts = {});

/// c_n * integral over {r1 < |x| < r2} of Theta R_g dM (= c_n int 2 S_2 dx).
double scalar_curvature_annulus_integral(const GraphSurface& graph, double r1, double r2,
                                         int quad_order = 0, int radial_panels = 0);

std::string to_json(const MassReport& report);
void write_flux_csv(const std::vector<std::pair<double, double>>& flux_by_radius, int quad_order,
                    std::ostream& os);

}  // namespace penrose
