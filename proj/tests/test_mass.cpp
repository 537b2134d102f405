#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "penrose/mass.hpp"
#include "penrose/perturbation.hpp"
#include "penrose/quadrature.hpp"
#include "penrose/util.hpp"

using namespace penrose;

namespace {

// Independent oracle: exact reduction of the ADM flux for radial profiles,
// flux(r) = m / (1 - 2m r^{2-n}).
double radial_flux_law(int n, double m, double r) {
    return m / (1.0 - 2.0 * m * std::pow(r, 2.0 - n));
}

std::shared_ptr<GraphSurface> bump_graph(double amplitude) {
    auto base = std::make_shared<SchwarzschildGraph>(SchwarzschildProfile(3, 0.5));
    BumpSpec spec;
    spec.center = Eigen::Vector3d(3.0, 0.0, 0.0);
    spec.radius = 1.0;
    spec.amplitude = amplitude;
    return bump_perturb(base, spec);
}

}  // namespace

TEST_CASE("mass constants: sphere areas and normalization") {
    CHECK(sphere_area(1) == doctest::Approx(2 * M_PI).epsilon(1e-14));
    CHECK(sphere_area(2) == doctest::Approx(4 * M_PI).epsilon(1e-14));
    CHECK(sphere_area(3) == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-14));
    CHECK(sphere_area(4) == doctest::Approx(8 * M_PI * M_PI / 3).epsilon(1e-14));
    const MassConstants mc = mass_constants(3);
    CHECK(mc.omega == doctest::Approx(4 * M_PI).epsilon(1e-14));
    CHECK(mc.c_n == doctest::Approx(1.0 / (16 * M_PI)).epsilon(1e-14));
    CHECK_THROWS_AS(mass_constants(2), std::domain_error);
}

TEST_CASE("sphere quadrature integrates the area exactly") {
    for (int n = 3; n <= 5; ++n) {
        const SphereRule rule = SphereRule::build(n, 12);
        double total = 0.0;
        for (double w : rule.weights) total += w;
        CHECK(total == doctest::Approx(sphere_area(n - 1)).epsilon(1e-12));
    }
}

TEST_CASE("ADM flux matches the derived radial law") {
    SchwarzschildGraph g(SchwarzschildProfile(3, 0.5));
    CHECK(adm_flux_at_radius(g, 10.0) == doctest::Approx(0.55555555555555558).epsilon(1e-10));
    CHECK(adm_flux_at_radius(g, 100.0) == doctest::Approx(0.50505050505050508).epsilon(1e-10));
    for (int n : {3, 4, 5}) {
        SchwarzschildGraph gn(SchwarzschildProfile(n, 0.5));
        for (double r : {2.0, 5.0, 20.0}) {
            CHECK(adm_flux_at_radius(gn, r) ==
                  doctest::Approx(radial_flux_law(n, 0.5, r)).epsilon(1e-9));
        }
    }
    FlatGraph flat(3);
    CHECK(std::abs(adm_flux_at_radius(flat, 7.0)) < 1e-14);
    CHECK_THROWS_AS(adm_flux_at_radius(g, 0.5), std::domain_error);
}

TEST_CASE("flux decreases monotonically to m along the radius schedule") {
    for (int n : {3, 4, 5}) {
        SchwarzschildGraph g(SchwarzschildProfile(n, 0.5));
        double prev = std::numeric_limits<double>::infinity();
        for (double r : {5.0, 10.0, 20.0, 40.0}) {
            const double f = adm_flux_at_radius(g, r);
            CHECK(f < prev);
            CHECK(f > 0.5);
            prev = f;
        }
    }
}

TEST_CASE("extrapolated ADM mass within 0.5% for the family") {
    for (int n : {3, 4, 5}) {
        for (double m : {0.5, 1.0}) {
            SchwarzschildProfile p(n, m);
            SchwarzschildGraph g(p);
            std::vector<double> radii;
            for (double k : {10.0, 20.0, 40.0, 80.0}) radii.push_back(k * p.r_m);
            const AdmResult res = adm_mass(g, radii);
            CHECK(std::abs(res.mass - m) / m < 5e-3);
            CHECK(res.converged);
            CHECK(res.flux_by_radius.size() == 4);
        }
    }
    FlatGraph flat(3);
    const AdmResult res = adm_mass(flat, {10.0, 20.0, 40.0});
    CHECK(std::abs(res.mass) < 1e-13);
    CHECK_THROWS_AS(adm_mass(flat, {10.0, 20.0}), std::invalid_argument);
    CHECK_THROWS_AS(adm_mass(flat, {20.0, 10.0, 40.0}), std::invalid_argument);
}

TEST_CASE("scaling covariance: adm scales like lambda^{n-2}") {
    auto base = std::make_shared<SchwarzschildGraph>(SchwarzschildProfile(3, 0.5));
    const std::vector<double> radii{10.0, 20.0, 40.0, 80.0};
    const double m0 = adm_mass(*base, radii).mass;
    for (double lambda : {2.0, 0.5}) {
        ScaledGraph scaled(base, lambda);
        std::vector<double> scaled_radii;
        for (double r : radii) scaled_radii.push_back(lambda * r);
        const double m1 = adm_mass(scaled, scaled_radii).mass;
        CHECK(m1 == doctest::Approx(lambda * m0).epsilon(1e-9));
    }
}

TEST_CASE("horizon shapes: round sphere closed forms and revolution quadrature") {
    const HorizonShape round = HorizonShape::round_sphere(3, 1.0);
    CHECK(round.area() == doctest::Approx(4 * M_PI).epsilon(1e-14));
    // S_1 = (n-1)/R with inward normal: integral = (n-1) omega R^{n-2}
    CHECK(round.mean_curvature_integral() == doctest::Approx(8 * M_PI).epsilon(1e-14));
    CHECK(round.convex());

    // a sphere realized as a surface of revolution must agree
    const HorizonShape rev = HorizonShape::spheroid(3, 1.0, 1.0);
    CHECK(rev.area() == doctest::Approx(round.area()).epsilon(1e-12));
    CHECK(rev.mean_curvature_integral() ==
          doctest::Approx(round.mean_curvature_integral()).epsilon(1e-12));
    CHECK(rev.convex());

    // higher-dimensional round sphere
    const HorizonShape round5 = HorizonShape::round_sphere(5, 1.0);
    const HorizonShape rev5 = HorizonShape::spheroid(5, 1.0, 1.0);
    CHECK(rev5.area() == doctest::Approx(round5.area()).epsilon(1e-12));
    CHECK(rev5.mean_curvature_integral() ==
          doctest::Approx(round5.mean_curvature_integral()).epsilon(1e-12));
}

TEST_CASE("prolate spheroid: quadrature against closed-form mean width and area") {
    // Oracle: for semi-axes (a, a, c), c > a, with k = sqrt(c^2 - a^2):
    //   integral S_1 dGamma = 4 pi (c + (a^2/k) log((k+c)/a))   [2 pi * mean width * 2]
    //   area = 2 pi a^2 (1 + (c/(a e)) asin(e)), e = k/c.
    const double a = 1.0, c = 1.5;
    const double k = std::sqrt(c * c - a * a);
    const double s1_closed = 4 * M_PI * (c + (a * a / k) * std::log((k + c) / a));
    const double e = k / c;
    const double area_closed = 2 * M_PI * a * a * (1.0 + (c / (a * e)) * std::asin(e));

    const HorizonShape ell = HorizonShape::spheroid(3, a, c);
    CHECK(ell.area() == doctest::Approx(area_closed).epsilon(1e-10));
    CHECK(ell.mean_curvature_integral() == doctest::Approx(s1_closed).epsilon(1e-10));
    CHECK(ell.convex());
}

TEST_CASE("mass formula: Schwarzschild bulk vanishes, horizon carries the mass") {
    SchwarzschildProfile p(3, 0.5);
    SchwarzschildGraph g(p);
    const HorizonShape horizon = HorizonShape::round_sphere(3, p.r_m);
    const MassReport report = mass_formula_terms(g, horizon, 20.0);
    CHECK(std::abs(report.bulk) < 1e-8);
    CHECK(report.horizon == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(report.residual_massform) / report.adm < 5e-3);
    CHECK(report.penrose_rhs == doctest::Approx(0.5).epsilon(1e-12));

    // flat graph, empty horizon: all terms 0
    FlatGraph flat(3);
    const MassReport flat_report = mass_formula_terms(flat, HorizonShape::none(3), 10.0);
    CHECK(std::abs(flat_report.adm) < 1e-12);
    CHECK(std::abs(flat_report.bulk) < 1e-14);
    CHECK(flat_report.horizon == 0.0);
    CHECK(flat_report.penrose_rhs == 0.0);

    // inconsistent horizon/graph boundary
    CHECK_THROWS_AS(mass_formula_terms(g, HorizonShape::round_sphere(3, 2.0), 20.0),
                    GeometryError);
}

TEST_CASE("mass formula cross-validates on a bump-perturbed graph") {
    const auto graph = bump_graph(0.05);
    const HorizonShape horizon = HorizonShape::round_sphere(3, 1.0);
    const MassReport report = mass_formula_terms(*graph, horizon, 10.0);
    // compact support: adm stays m exactly; bulk integrates to ~0 by the
    // divergence identity; residual within 1%
    CHECK(std::abs(report.residual_massform) / report.adm < 1e-2);
    // extrapolated mass carries only the 2-term fit bias; flux itself is m exactly
    CHECK(std::abs(report.adm - 0.5) < 2.5e-3);
    CHECK(std::abs(report.bulk) < 1e-4);
}

TEST_CASE("penrose check: Schwarzschild saturates, ellipsoid is strict") {
    SchwarzschildProfile p(3, 0.5);
    SchwarzschildGraph g(p);
    const PenroseCheckResult res = penrose_check(g, HorizonShape::round_sphere(3, p.r_m));
    CHECK(std::abs(res.slack) < 1e-6);
    CHECK(res.af_valid);
    CHECK(res.af_lhs == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(res.af_rhs == doctest::Approx(0.5).epsilon(1e-12));

    // round sphere of radius 1 gives penrose_rhs = 1/2 by arithmetic
    CHECK(res.penrose_rhs == doctest::Approx(0.5).epsilon(1e-12));

    // AF equality chain for round spheres of other radii
    for (double radius : {0.5, 2.0, 3.7}) {
        const HorizonShape round = HorizonShape::round_sphere(3, radius);
        const MassConstants mc = mass_constants(3);
        const double lhs = mc.c_n * round.mean_curvature_integral();
        const double rhs = 0.5 * std::pow(round.area() / mc.omega, 0.5);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }

    // prolate 1:1:1.5 horizon: af_lhs strictly above af_rhs
    const PenroseCheckResult ell = penrose_check(g, HorizonShape::spheroid(3, 1.0, 1.5));
    CHECK(ell.af_valid);
    CHECK(ell.af_lhs > ell.af_rhs);
    CHECK(ell.af_lhs == doctest::Approx(0.59020447048237714).epsilon(1e-8));
    CHECK(ell.af_rhs == doctest::Approx(0.58015278688309152).epsilon(1e-8));
}

TEST_CASE("report serialization: JSON keys and CSV header") {
    SchwarzschildProfile p(3, 0.5);
    SchwarzschildGraph g(p);
    const MassReport report = mass_formula_terms(g, HorizonShape::round_sphere(3, p.r_m), 10.0);
    const std::string json = to_json(report);
    for (const char* key :
         {"\"adm\"", "\"bulk\"", "\"horizon\"", "\"penrose_rhs\"", "\"slack\"", "\"residual\"",
          "\"flux_by_radius\""})
        CHECK(json.find(key) != std::string::npos);

    std::ostringstream os;
    write_flux_csv(report.flux_by_radius, 16, os);
    CHECK(os.str().rfind("r,flux,quad_order\n", 0) == 0);

    // determinism: identical serialization on repeat
    std::ostringstream os2;
    write_flux_csv(report.flux_by_radius, 16, os2);
    CHECK(os.str() == os2.str());
    CHECK(json == to_json(report));
}
