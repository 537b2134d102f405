#pragma once

#include <functional>
#include <string>
#include <vector>

namespace penrose::checks {

struct Check {
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

/// |actual - expected| <= tolerance.
Check absolute(std::string name, double expected, double actual, double tolerance);
/// |actual - expected| / |expected| <= tolerance.
Check relative(std::string name, double expected, double actual, double tolerance);
/// actual >= bound (one-sided, e.g. convergence orders).
Check at_least(std::string name, double bound, double actual);

bool all_pass(const std::vector<Check>& checks);

// One builder per acceptance criterion; parameters mirror the stated matrices.
std::vector<Check> scalar_flatness(int n, double m, int points = 1000);
std::vector<Check> adm_mass_family(int n, double m);
std::vector<Check> adm_flux_law_n3();
std::vector<Check> mass_formula_schwarzschild(int n, double m);
std::vector<Check> mass_formula_bump();
std::vector<Check> reilly_flux_constancy(int n, double m);
std::vector<Check> reilly_horizon_closed_form(int n, double m);
std::vector<Check> reilly_divergence_orders();
std::vector<Check> hemisphere_apex();
std::vector<Check> reflection_regularity(int n, double m);
std::vector<Check> ellipticity_suite(int n, int samples = 10000);
std::vector<Check> asymptotics_fit(int n, double m);
std::vector<Check> asymptotics_proportionality(int n);
std::vector<Check> penrose_af(int n, double m);
std::vector<Check> penrose_af_ellipsoid();
std::vector<Check> radial_ode_uniqueness(int n, double m);
std::vector<Check> decay_limits(int n, double m);

struct Criterion {
    int number;
    std::string title;
    std::function<std::vector<Check>()> build;  // deferred so callers can time it
};

/// The full acceptance matrix (criteria 1-11 with the stated parameters).
std::vector<Criterion> acceptance_criteria();

/// A per-(n, m) verification battery for the CLI suite command.
std::vector<Check> suite_for(int n, double m);

}  // namespace penrose::checks
