#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "penrose/jet.hpp"

namespace penrose {

/// Radial Schwarzschild graph profile: u'(r)^2 = 2m / (r^{n-2} - 2m), u(r_m) = 0.
struct SchwarzschildProfile {
    int n = 3;
    double m = 0.5;
    double r_m = 1.0;  // horizon radius (2m)^{1/(n-2)}

    SchwarzschildProfile(int n_, double m_);
};

/// Jets are refused within (r_m, r_m*(1+kNearHorizonGap)) to avoid catastrophic
/// cancellation; horizon quantities are obtained as limits elsewhere.
inline constexpr double kNearHorizonGap = 1e-8;

double horizon_radius(int n, double m);

struct ProfileJet {
    double u = 0.0;
    double u_prime = 0.0;
    double u_double_prime = 0.0;
    bool singular = false;  // set only at r == r_m, where u' is infinite
};

/// u by closed form (n=3,4) or singularity-removing quadrature (n >= 5,
/// substitution r = r_m + s^2); u', u'' closed form for all n.
ProfileJet profile_jet(const SchwarzschildProfile& p, double r);

/// u''' (closed form), for third-order graph jets.
double profile_third_derivative(const SchwarzschildProfile& p, double r);

/// Jets of f(x) = u(|x|) to third order by the chain rule.
Jet graph_jet(const SchwarzschildProfile& p, const Eigen::VectorXd& x);

struct RadialProfileTable {
    enum class Provenance { closed_form, quadrature, ode };
    std::vector<double> r, u, u_prime, u_double_prime;
    Provenance provenance = Provenance::closed_form;
};

/// Samples the profile at given radii.
RadialProfileTable sample_profile(const SchwarzschildProfile& p, const std::vector<double>& radii);

/// Thrown when the radial ODE integration fails; carries the last good state.
struct IntegrationError : std::runtime_error {
    double last_r, last_u, last_u_prime;
    IntegrationError(const std::string& what, double r, double u, double up)
        : std::runtime_error(what), last_r(r), last_u(u), last_u_prime(up) {}
};

/// Integrates the rotational reduction of S_2 = 0,
///   u'' = -((n-2)/2) u' (1 + u'^2) / r,
/// from (r0, u0, u0') and tabulates at `samples` points across [r0, r_end].
RadialProfileTable solve_radial_scalar_flat(int n, double r0, double u0, double up0, double r_end,
                                            int samples = 200, double abs_tol = 1e-12,
                                            double rel_tol = 1e-12);

struct RadialClassification {
    bool flat = false;
    double mass = 0.0;  // Schwarzschild family member matching the initial data
};

/// m = u'^2 r^{n-2} / (2 (1 + u'^2)), inverting the profile relation
/// u'^2 = 2m/(r^{n-2} - 2m); flat if u' = 0.
RadialClassification classify_radial_solution(int n, double r0, double up0);

/// CSV with header r,u,u_prime,u_double_prime.
void write_csv(const RadialProfileTable& table, std::ostream& os);

}  // namespace penrose
