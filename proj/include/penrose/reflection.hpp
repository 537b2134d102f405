#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "penrose/jet.hpp"
#include "penrose/schwarzschild.hpp"

namespace penrose {

struct ChartError : std::runtime_error {
    std::vector<int> grid_index;
    ChartError(const std::string& what, std::vector<int> index)
        : std::runtime_error(what), grid_index(std::move(index)) {}
};

/// Local chart of the doubled hypersurface M' at a horizon point p: the height
/// u over T_p M' in the radial direction of the hyperplane P. Coordinates
/// (y_1..y_{n-1}) run along Gamma-tangent directions (index alpha), y_n along
/// the vertical; u(y) = sqrt(rho(y_n)^2 - |y_alpha|^2) - r_m with rho the even
/// extension of the inverse profile, each grid value fixed by a 1-D root find.
class HorizonChart {
public:
    HorizonChart(const SchwarzschildProfile& profile, Eigen::VectorXd base_point,
                 double half_width, double h);

    int n() const { return profile_.n; }
    const SchwarzschildProfile& profile() const { return profile_; }
    const Eigen::VectorXd& base_point() const { return base_point_; }
    double half_width() const { return half_width_; }
    double step() const { return h_; }
    int points_per_axis() const { return extent_; }

    /// Grid value by per-axis index in [-(k), k] where extent = 2k+1.
    double value(const std::vector<int>& index) const;
    /// Chart height at an arbitrary chart point (root-find + closed form).
    double value_at(const Eigen::VectorXd& y) const;

    /// rho(t) = u_m^{-1}(|t|) and derivatives; rho''(0) = (n-2) r_m^{n-3}/(4m).
    double rho(double t) const;
    double rho_prime(double t) const;
    double rho_double_prime(double t) const;

    /// Closed-form chart jets (value/grad/hess) at y.
    Jet closed_form_jet(const Eigen::VectorXd& y) const;
    /// Exact u_nn at a Gamma_0 point (y_n = 0) with tangential offset |y_alpha|.
    double exact_u_nn_on_gamma0(double y_alpha_norm) const;

    /// Finite-difference jets at a grid point; one-sided in y_n on Gamma_0.
    Jet fd_jet(const std::vector<int>& index) const;

    void write_csv(std::ostream& os) const;

private:
    SchwarzschildProfile profile_;
    Eigen::VectorXd base_point_;
    double half_width_, h_;
    int extent_, k_;
    std::vector<double> values_;
    std::size_t flat_index(const std::vector<int>& index) const;
};

HorizonChart build_doubled_chart(const SchwarzschildProfile& profile,
                                 const Eigen::VectorXd& base_point, double half_width, double h);

struct MatchingReport {
    double u_nn_plus = 0.0;       // one-sided estimate at the base point, from y_n > 0
    double u_nn_minus = 0.0;      // from y_n < 0
    double jump_base = 0.0;       // |plus - minus| at the base point
    double max_jump_gamma0 = 0.0; // max over the Gamma_0 grid
    double max_mixed_jump = 0.0;  // max |u_{alpha n}^+ - u_{alpha n}^-| over Gamma_0
    double max_first_derivative_jump = 0.0;  // max |u_n^+ - u_n^-| over Gamma_0
};

/// One-sided 3-point second differences from each side of Gamma_0.
MatchingReport second_derivative_matching(const HorizonChart& chart);

struct MatchingStudy {
    std::vector<double> h_values;
    std::vector<double> estimate_errors;  // sup over Gamma_0 of |estimate - closed form|
    std::vector<double> jumps;            // max_jump_gamma0 per level
    std::vector<double> observed_orders;  // log2(err_i / err_{i+1})
};

/// Convergence of the one-sided u_nn estimates under h-halving. The chart is
/// even in y_n, so the +/- jump itself sits at roundoff; the measurable order
/// lives in the estimate error against the closed form.
MatchingStudy second_derivative_matching_study(const SchwarzschildProfile& profile, double h0,
                                               int levels, int half_width_steps = 4);

struct DecompositionTerms {
    double d = 0.0;               // W^{-2} sum_alpha u_alpha_alpha
    double e = 0.0;
    double f = 0.0;               // S_2(B,C) + S_2(C), exact bilinear invariants
    double u_nn = 0.0;
    double residual = 0.0;        // d * u_nn + e + f
    double sum_u_alpha_alpha = 0.0;
    bool division_hazard = false; // |d| below threshold
};

/// Terms of the scalar-flatness decomposition D u_nn + E + F = 0 at a chart
/// point, from closed-form jets (use_closed_form) or grid differences.
DecompositionTerms decomposition_terms(const HorizonChart& chart, const Eigen::VectorXd& y,
                                       bool use_closed_form = true);
DecompositionTerms decomposition_terms_at_grid(const HorizonChart& chart,
                                               const std::vector<int>& index);

/// Same decomposition evaluated directly on a supplied jet.
DecompositionTerms decomposition_from_jet(const Jet& jet);

std::string to_json(const DecompositionTerms& terms);

}  // namespace penrose
