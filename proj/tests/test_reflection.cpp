#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "penrose/geometry.hpp"
#include "penrose/reflection.hpp"

using namespace penrose;

namespace {

HorizonChart make_chart(int n, double m, double half_width, double h) {
    SchwarzschildProfile p(n, m);
    Eigen::VectorXd base = Eigen::VectorXd::Zero(n);
    base(0) = p.r_m;
    return build_doubled_chart(p, base, half_width, h);
}

}  // namespace

TEST_CASE("chart values: tangency and closed-form sections (n=3, m=0.5)") {
    const HorizonChart chart = make_chart(3, 0.5, 0.21, 0.05);

    // u(0) = 0, tangency at the base point
    CHECK(std::abs(chart.value({0, 0, 0})) < 1e-12);

    // vertical section is the parabola rho(t) = 1 + t^2/4: u(0,0,t=0.2) = 0.01
    Eigen::Vector3d y(0.0, 0.0, 0.2);
    CHECK(chart.value_at(y) == doctest::Approx(0.01).epsilon(1e-10));

    // horizon sphere section: u(y_alpha = 0.1, y_n = 0) = sqrt(1-0.01) - 1
    Eigen::Vector3d ys(0.1, 0.0, 0.0);
    CHECK(chart.value_at(ys) == doctest::Approx(std::sqrt(0.99) - 1.0).epsilon(1e-10));
    CHECK(chart.value_at(ys) == doctest::Approx(-0.0050125628890114658).epsilon(1e-8));

    // gradient vanishes at the base point (from the closed-form jet)
    const Jet jet0 = chart.closed_form_jet(Eigen::Vector3d::Zero());
    CHECK(jet0.grad.norm() < 1e-12);

    // u even in y_n
    CHECK(chart.value({1, -2, 3}) == doctest::Approx(chart.value({1, -2, -3})).epsilon(1e-12));

    // rho derivatives: rho''(0) = 1/(4m) = 0.5
    CHECK(chart.rho_double_prime(0.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(chart.rho(0.2) == doctest::Approx(1.01).epsilon(1e-12));
}

TEST_CASE("chart construction for general n uses the root-finding inverse") {
    const HorizonChart chart = make_chart(5, 0.5, 0.12, 0.03);
    // rho(t) inverse check: u_m(rho(t)) = |t|
    SchwarzschildProfile p(5, 0.5);
    for (double t : {0.03, 0.09, 0.12}) {
        const double rho = chart.rho(t);
        CHECK(profile_jet(p, rho).u == doctest::Approx(t).epsilon(1e-11));
    }
    // ODE identity rho'' = (n-2) rho^{n-3} / (4m)
    CHECK(chart.rho_double_prime(0.06) ==
          doctest::Approx(3.0 * std::pow(chart.rho(0.06), 2) / 2.0).epsilon(1e-10));
}

TEST_CASE("chart validation errors") {
    SchwarzschildProfile p(3, 0.5);
    Eigen::VectorXd base = Eigen::VectorXd::Zero(3);
    base(0) = p.r_m;
    CHECK_THROWS_AS(build_doubled_chart(p, base, 0.6, 0.05), std::invalid_argument);  // >= r_m/2
    Eigen::VectorXd off = base;
    off(0) = 1.5;
    CHECK_THROWS_AS(build_doubled_chart(p, off, 0.2, 0.05), std::invalid_argument);
}

TEST_CASE("second derivative matching at the base point (n=3, m=0.5)") {
    const HorizonChart chart = make_chart(3, 0.5, 8e-3, 1e-3);
    const MatchingReport rep = second_derivative_matching(chart);
    // u_nn(0) = rho''(0) = 0.5, one-sided stencils are exact on the parabola
    CHECK(rep.u_nn_plus == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.u_nn_minus == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.jump_base < 1e-6);
    CHECK(rep.max_jump_gamma0 < 1e-6);
    // mixed derivatives match across Gamma_0 (rotational symmetry)
    CHECK(rep.max_mixed_jump < 1e-6);
    // first derivatives match at order h^2 or better
    CHECK(rep.max_first_derivative_jump < 1e-6);
}

TEST_CASE("matching study: one-sided estimates converge at order >= 1.9") {
    SchwarzschildProfile p3(3, 0.5);
    const MatchingStudy study3 = second_derivative_matching_study(p3, 1e-1, 4);
    REQUIRE(study3.observed_orders.size() == 3);
    for (double order : study3.observed_orders) CHECK(order > 1.9);
    for (double jump : study3.jumps) CHECK(jump < 1e-6);

    // n=4: the vertical section is cosh-like, so the truncation term is
    // nonzero already at the base point
    SchwarzschildProfile p4(4, 0.5);
    const MatchingStudy study4 = second_derivative_matching_study(p4, 1e-1, 4);
    for (double order : study4.observed_orders) CHECK(order > 1.9);
}

TEST_CASE("decomposition terms at the origin (n=3, m=0.5): D=-2, E=1, F=0") {
    const HorizonChart chart = make_chart(3, 0.5, 0.2, 0.05);
    const DecompositionTerms t =
        decomposition_terms(chart, Eigen::Vector3d::Zero(), /*use_closed_form=*/true);
    CHECK(t.d == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(t.e == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(t.f) < 1e-12);
    CHECK(t.u_nn == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(t.residual) < 1e-10);
    CHECK(t.sum_u_alpha_alpha == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(!t.division_hazard);
}

TEST_CASE("decomposition identity holds with closed-form jets away from the origin") {
    const HorizonChart chart = make_chart(3, 0.5, 0.2, 0.05);
    for (const Eigen::Vector3d& y :
         {Eigen::Vector3d(0.05, -0.03, 0.08), Eigen::Vector3d(0.12, 0.0, -0.1),
          Eigen::Vector3d(0.0, 0.0, 0.15), Eigen::Vector3d(-0.1, 0.1, 0.05)}) {
        const DecompositionTerms t = decomposition_terms(chart, y, true);
        CHECK(std::abs(t.residual) < 1e-8);
        // F depends at least quadratically on first derivatives
        const Jet jet = chart.closed_form_jet(y);
        CHECK(std::abs(t.f) < 2.0 * jet.grad.squaredNorm());
    }
    // S_2 of the chart shape operator vanishes (the doubled surface is scalar-flat)
    for (const Eigen::Vector3d& y :
         {Eigen::Vector3d(0.05, -0.03, 0.08), Eigen::Vector3d(0.1, 0.02, -0.12)}) {
        const ShapeCore core = shape_core(chart.closed_form_jet(y));
        CHECK(std::abs(elementary_symmetric(core.shape, 2)) < 1e-12);
    }
}

TEST_CASE("decomposition residual from grid jets is O(h^2)") {
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double h = 0.04 / (1 << level);
        const HorizonChart chart = make_chart(3, 0.5, 8 * h, h);
        const DecompositionTerms t = decomposition_terms_at_grid(chart, {2, 1, 3});
        if (level > 0) CHECK(std::log2(prev / std::abs(t.residual)) > 1.5);
        prev = std::abs(t.residual);
    }
}

TEST_CASE("S_2 from grid-difference jets is O(h^2) at interior points") {
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double h = 0.04 / (1 << level);
        const HorizonChart chart = make_chart(3, 0.5, 8 * h, h);
        const ShapeCore core = shape_core(chart.fd_jet({1, -2, 2}));
        const double s2 = std::abs(elementary_symmetric(core.shape, 2));
        if (level > 0) CHECK(std::log2(prev / s2) > 1.5);
        prev = s2;
    }
}

TEST_CASE("flat chart input: decomposition degenerates with the hazard flag") {
    const DecompositionTerms t = decomposition_from_jet(Jet::zero(3));
    CHECK(t.d == 0.0);
    CHECK(t.e == 0.0);
    CHECK(t.f == 0.0);
    CHECK(t.residual == 0.0);
    CHECK(t.division_hazard);
}

TEST_CASE("horizon curvature consistency at the base point") {
    for (int n : {3, 4, 5}) {
        const double m = 0.5;
        const HorizonChart chart = make_chart(n, m, 0.1, 0.025);
        const Jet jet0 = chart.closed_form_jet(Eigen::VectorXd::Zero(n));
        const ShapeData sd = shape_data(jet0);
        const double r_m = chart.profile().r_m;
        // sphere directions -1/r_m (n-1 of them), vertical (n-2)/(2 r_m), e_2 = 0
        CHECK(sd.eigenvalues(0) == doctest::Approx(-1.0 / r_m).epsilon(1e-9));
        CHECK(sd.eigenvalues(n - 1) ==
              doctest::Approx((n - 2) / (2.0 * r_m)).epsilon(1e-9));
        CHECK(std::abs(sd.s(2)) < 1e-8);
    }
}

TEST_CASE("chart CSV dump and JSON terms") {
    const HorizonChart chart = make_chart(3, 0.5, 0.1, 0.05);
    std::ostringstream os;
    chart.write_csv(os);
    CHECK(os.str().rfind("y1,y2,y3,u\n", 0) == 0);

    const DecompositionTerms t = decomposition_terms(chart, Eigen::Vector3d::Zero(), true);
    const std::string json = to_json(t);
    for (const char* key : {"\"D\"", "\"E\"", "\"F\"", "\"u_nn\"", "\"residual\""})
        CHECK(json.find(key) != std::string::npos);
}
