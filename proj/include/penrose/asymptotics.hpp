#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "penrose/graph.hpp"

namespace penrose {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExpansionBasis { sqrt_basis, log_basis, power_basis };  // n=3 / n=4 / n>=5

const char* to_string(ExpansionBasis basis);

/// Fit of the end expansion of a radial profile:
///   n = 3 : v = a r^{1/2} + a1 + a2 r^{-1/2}
///   n = 4 : v = a log r + a1
///   n >= 5: v = a r^{-n/2+2} + a1
/// The vector term of the general expansions is constrained to 0 (radial data).
struct ExpansionFit {
    int n = 3;
    double a = 0.0;
    double a1 = 0.0;
    double a2_or_c = 0.0;  // a2 for n=3, unused otherwise
    double residual = 0.0; // sup-norm of the fit error over the sample window
    ExpansionBasis basis = ExpansionBasis::sqrt_basis;
};

/// Least squares over >= 8 radii inside the asymptotic window.
ExpansionFit fit_expansion(const std::vector<std::pair<double, double>>& samples, int n);

/// Mass from the leading coefficient: a^2/8 (n=3), a^2/2 (n=4),
/// a^2 (n-4)^2 / 8 (n >= 5); constants derived from the profile tails
/// u' = sqrt(2m) r^{1-n/2} (1 + O(r^{2-n})) and validated against quadrature.
double mass_from_tail(const ExpansionFit& fit);

/// Log-spaced radii in [lo, hi] * r_m (the fitting window).
std::vector<double> expansion_window(double r_m, double lo = 20.0, double hi = 200.0,
                                     int count = 12);

struct DecayRow {
    double r = 0.0;
    double grad_quantity = 0.0;   // r^{n/2-1} |grad f|          (sup over samples)
    double hess_quantity = 0.0;   // r^{n/2}   max_ij |f_ij|
    double third_quantity = 0.0;  // r^{n/2+1} max_ijk |f_ijk|
};

/// Sup-normalized asymptotic-flatness decay quantities over sphere samples
/// at each radius; growing values flag a decay violation.
std::vector<DecayRow> decay_check(const GraphSurface& graph, const std::vector<double>& radii,
                                  int samples_per_sphere = 32);

/// True when no column grows by more than `growth_tol` between consecutive radii.
bool decay_bounded(const std::vector<DecayRow>& rows, double growth_tol = 1.1);

std::string to_json(const ExpansionFit& fit);
void write_decay_csv(const std::vector<DecayRow>& rows, std::ostream& os);

}  // namespace penrose
