#include "penrose/mass.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "penrose/geometry.hpp"
#include "penrose/quadrature.hpp"
#include "penrose/util.hpp"

namespace penrose {

MassConstants mass_constants(int n) {
    if (n < 3) throw std::domain_error("mass_constants: n must be >= 3");
    MassConstants mc;
    mc.n = n;
    mc.omega = sphere_area(n - 1);
    mc.c_n = 1.0 / (2.0 * (n - 1) * mc.omega);
    return mc;
}

namespace {

SphereRule rule_for(const GraphSurface& graph, double r, int order) {
    return SphereRule::build(graph.dim(), order, graph.feature_axis(), graph.polar_splits(r));
}

void require_admissible_radius(const GraphSurface& graph, double r) {
    if (!(r > graph.inner_radius()) || !(r < graph.outer_radius()))
        throw std::domain_error("radius outside the graph's admissible region");
}

// Radial breakpoints for annulus integrals: graph-provided structure changes
// plus geometric subdivision for resolution.
std::vector<double> radial_breaks(const GraphSurface& graph, double r1, double r2, int panels) {
    std::vector<double> breaks{r1, r2};
    for (double s : graph.radial_splits(r1, r2))
        if (s > r1 && s < r2) breaks.push_back(s);
    const double ratio = r2 / r1;
    for (int i = 1; i < panels; ++i) breaks.push_back(r1 * std::pow(ratio, double(i) / panels));
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return breaks;
}

}  // namespace

double adm_flux_at_radius(const GraphSurface& graph, double r, int quad_order) {
    if (quad_order == 0) quad_order = default_sphere_order(graph.dim());
    if (quad_order < 4) throw std::invalid_argument("adm_flux_at_radius: quad_order must be >= 4");
    require_admissible_radius(graph, r);
    const int n = graph.dim();
    const MassConstants mc = mass_constants(n);
    const SphereRule rule = rule_for(graph, r, quad_order);
    const double power = std::pow(r, n - 1);
    auto integrand = [&](const Vector& omega) {
        const Jet jet = graph.jet(r * omega);
        // sum_j (g_ij,j - g_jj,i) = f_i laplacian(f) - (Hess f grad f)_i
        const Vector hg = jet.hess * jet.grad;
        const double lap = jet.hess.trace();
        return (lap * jet.grad.dot(omega) - hg.dot(omega)) * power;
    };
    return mc.c_n * integrate_sphere(rule, integrand);
}

AdmResult adm_mass(const GraphSurface& graph, const std::vector<double>& radii, int quad_order,
                   int fit_terms) {
    if (radii.size() < 3) throw std::invalid_argument("adm_mass: need >= 3 radii");
    if (!std::is_sorted(radii.begin(), radii.end()))
        throw std::invalid_argument("adm_mass: radii must be increasing");
    if (fit_terms < 2 || fit_terms > static_cast<int>(radii.size()))
        throw std::invalid_argument("adm_mass: fit_terms out of range");

    AdmResult result;
    const int n = graph.dim();
    Eigen::VectorXd flux(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        flux(i) = adm_flux_at_radius(graph, radii[i], quad_order);
        result.flux_by_radius.emplace_back(radii[i], flux(i));
    }
    Eigen::MatrixXd design(radii.size(), fit_terms);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        design(i, 0) = 1.0;
        for (int k = 1; k < fit_terms; ++k) design(i, k) = std::pow(radii[i], -double(k * (n - 2)));
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(flux);
    result.mass = coef(0);
    result.fit_residual = (design * coef - flux).cwiseAbs().maxCoeff();
    result.converged = result.fit_residual <= 5e-2 * std::abs(result.mass) + 1e-12;
    return result;
}

HorizonShape HorizonShape::none(int n) {
    HorizonShape h;
    h.kind_ = Kind::none;
    h.n_ = n;
    return h;
}

HorizonShape HorizonShape::round_sphere(int n, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("round_sphere: radius must be > 0");
    HorizonShape h;
    h.kind_ = Kind::round;
    h.n_ = n;
    h.radius_ = radius;
    return h;
}

HorizonShape HorizonShape::surface_of_revolution(int n, RevolutionProfile profile) {
    HorizonShape h;
    h.kind_ = Kind::revolution;
    h.n_ = n;
    h.profile_ = std::move(profile);
    return h;
}

HorizonShape HorizonShape::spheroid(int n, double a, double c) {
    RevolutionProfile p;
    p.rho = [a](double s) { return a * std::sin(s); };
    p.z = [c](double s) { return c * std::cos(s); };
    p.drho = [a](double s) { return a * std::cos(s); };
    p.dz = [c](double s) { return -c * std::sin(s); };
    p.ddrho = [a](double s) { return -a * std::sin(s); };
    p.ddz = [c](double s) { return -c * std::cos(s); };
    return surface_of_revolution(n, std::move(p));
}

double HorizonShape::radius() const {
    if (kind_ != Kind::round) throw std::logic_error("HorizonShape::radius: not a round sphere");
    return radius_;
}

namespace {

struct RevolutionPoint {
    double area_density;  // rho^{n-2} * speed (omega_{n-2} factor applied outside)
    double s1;            // kappa_prof + (n-2) kappa_par, inward normal
};

RevolutionPoint revolution_point(const HorizonShape::RevolutionProfile& p, int n, double psi) {
    const double rho = p.rho(psi), dr = p.drho(psi), dz = p.dz(psi);
    const double ddr = p.ddrho(psi), ddz = p.ddz(psi);
    const double speed = std::hypot(dr, dz);
    const double kappa_prof = (dz * ddr - dr * ddz) / (speed * speed * speed);
    const double kappa_par = -dz / (rho * speed);
    RevolutionPoint rp;
    rp.area_density = std::pow(rho, n - 2) * speed;
    rp.s1 = kappa_prof + (n - 2) * kappa_par;
    return rp;
}

}  // namespace

double HorizonShape::area(int quad_order) const {
    switch (kind_) {
        case Kind::none: return 0.0;
        case Kind::round: return sphere_area(n_ - 1) * std::pow(radius_, n_ - 1);
        case Kind::revolution: {
            auto f = [&](double psi) { return revolution_point(profile_, n_, psi).area_density; };
            return sphere_area(n_ - 2) * integrate_panel(f, 0.0, M_PI, quad_order);
        }
    }
    return 0.0;
}

double HorizonShape::mean_curvature_integral(int quad_order) const {
    switch (kind_) {
        case Kind::none: return 0.0;
        case Kind::round:
            // S_1 = (n-1)/R with the inward normal; integral = (n-1) omega_{n-1} R^{n-2}.
            return (n_ - 1) * sphere_area(n_ - 1) * std::pow(radius_, n_ - 2);
        case Kind::revolution: {
            auto f = [&](double psi) {
                const RevolutionPoint rp = revolution_point(profile_, n_, psi);
                return rp.s1 * rp.area_density;
            };
            return sphere_area(n_ - 2) * integrate_panel(f, 0.0, M_PI, quad_order);
        }
    }
    return 0.0;
}

bool HorizonShape::convex(int samples) const {
    switch (kind_) {
        case Kind::none: return false;
        case Kind::round: return true;
        case Kind::revolution: {
            for (int i = 1; i < samples; ++i) {
                const double psi = M_PI * i / samples;
                const double rho = profile_.rho(psi), dr = profile_.drho(psi), dz = profile_.dz(psi);
                const double speed = std::hypot(dr, dz);
                const double kp = (dz * profile_.ddrho(psi) - dr * profile_.ddz(psi)) /
                                  (speed * speed * speed);
                const double kpar = -dz / (rho * speed);
                if (kp < -1e-12 || kpar < -1e-12) return false;
            }
            return true;
        }
    }
    return false;
}

double scalar_curvature_annulus_integral(const GraphSurface& graph, double r1, double r2,
                                         int quad_order, int radial_panels) {
    if (quad_order == 0) quad_order = default_sphere_order(graph.dim());
    if (radial_panels == 0) radial_panels = graph.dim() <= 4 ? 12 : 8;
    require_admissible_radius(graph, r1);
    require_admissible_radius(graph, r2);
    if (!(r1 < r2)) throw std::invalid_argument("annulus integral: need r1 < r2");
    const int n = graph.dim();
    const MassConstants mc = mass_constants(n);
    // Theta R_g dM = 2 S_2 W Theta dx = 2 S_2 dx.
    auto shell = [&](double r) {
        const SphereRule rule = rule_for(graph, r, quad_order);
        const double power = std::pow(r, n - 1);
        auto integrand = [&](const Vector& omega) {
            const ShapeCore core = shape_core(graph.jet(r * omega));
            return 2.0 * elementary_symmetric(core.shape, 2) * power;
        };
        return integrate_sphere(rule, integrand);
    };
    const std::vector<double> breaks = radial_breaks(graph, r1, r2, radial_panels);
    return mc.c_n * integrate_panels(shell, breaks, n <= 4 ? 16 : 12);
}

MassReport mass_formula_terms(const GraphSurface& graph, const HorizonShape& horizon,
                              double truncation_radius, const MassFormulaOptions& opts) {
    const int n = graph.dim();
    if (horizon.n() != n) throw GeometryError("mass_formula_terms: horizon dimension mismatch");
    const double r_inner = graph.inner_radius();
    if (horizon.round() && std::abs(horizon.radius() - r_inner) > 1e-9 * std::max(1.0, r_inner))
        throw GeometryError("mass_formula_terms: horizon radius does not match the graph boundary");
    if (horizon.empty() && r_inner > 0.0)
        throw GeometryError("mass_formula_terms: graph has an inner boundary but no horizon given");

    const MassConstants mc = mass_constants(n);
    MassReport report;
    report.n = n;

    if (r_inner > 0.0) {
        const double start = r_inner * (1.0 + 10.0 * kNearHorizonGap);
        report.bulk = scalar_curvature_annulus_integral(graph, start, truncation_radius,
                                                        opts.quad_order, opts.radial_panels);
    } else if (truncation_radius > 0.0) {
        report.bulk = scalar_curvature_annulus_integral(graph, 1e-6 * truncation_radius,
                                                        truncation_radius, opts.quad_order,
                                                        opts.radial_panels);
    }

    // Heuristic tail bound: model |R_g| ~ |R_g(R)| (r/R)^{-(n+1)} beyond the
    // truncation radius (one order inside the asymptotic-flatness decay rate)
    // and integrate c_n * omega * |R_g| r^{n-1} dr.
    {
        const SphereRule rule = rule_for(graph, truncation_radius, 8);
        double max_rg = 0.0;
        for (const auto& p : rule.points) {
            const ShapeCore core = shape_core(graph.jet(truncation_radius * p));
            max_rg = std::max(max_rg, std::abs(2.0 * elementary_symmetric(core.shape, 2)));
        }
        report.tail_bound = mc.c_n * mc.omega * max_rg * std::pow(truncation_radius, n);
    }

    report.horizon = mc.c_n * horizon.mean_curvature_integral();

    std::vector<double> radii = opts.adm_radii;
    if (radii.empty()) {
        const double base = std::max(r_inner, 1.0);
        radii = {10 * base, 20 * base, 40 * base, 80 * base};
    }
    const AdmResult adm = adm_mass(graph, radii, opts.quad_order, opts.adm_fit_terms);
    report.adm = adm.mass;
    report.adm_fit_residual = adm.fit_residual;
    report.adm_converged = adm.converged;
    report.flux_by_radius = adm.flux_by_radius;

    report.penrose_rhs =
        horizon.empty()
            ? 0.0
            : 0.5 * std::pow(horizon.area() / mc.omega, double(n - 2) / double(n - 1));
    report.slack = report.adm - report.penrose_rhs;
    report.residual_massform = report.adm - (report.bulk + report.horizon);
    return report;
}

PenroseCheckResult penrose_check(const GraphSurface& graph, const HorizonShape& horizon,
                                 const PenroseOptions& opts) {
    const int n = graph.dim();
    const MassConstants mc = mass_constants(n);
    PenroseCheckResult result;

    std::vector<double> radii = opts.adm_radii;
    if (radii.empty()) {
        const double base = std::max(graph.inner_radius(), 1.0);
        radii = {100 * base, 200 * base, 400 * base, 800 * base};
    }
    result.adm = adm_mass(graph, radii, opts.quad_order, opts.fit_terms).mass;
    result.penrose_rhs =
        horizon.empty()
            ? 0.0
            : 0.5 * std::pow(horizon.area() / mc.omega, double(n - 2) / double(n - 1));
    result.slack = result.adm - result.penrose_rhs;
    if (!horizon.empty() && horizon.convex()) {
        result.af_valid = true;
        result.af_lhs = mc.c_n * horizon.mean_curvature_integral();
        result.af_rhs = result.penrose_rhs;
    }
    return result;
}

std::string to_json(const MassReport& report) {
    nlohmann::ordered_json j;
    j["adm"] = report.adm;
    j["bulk"] = report.bulk;
    j["horizon"] = report.horizon;
    j["penrose_rhs"] = report.penrose_rhs;
    j["slack"] = report.slack;
    j["residual"] = report.residual_massform;
    j["tail_bound"] = report.tail_bound;
    j["adm_fit_residual"] = report.adm_fit_residual;
    j["adm_converged"] = report.adm_converged;
    nlohmann::ordered_json flux = nlohmann::ordered_json::array();
    for (const auto& [r, v] : report.flux_by_radius) flux.push_back({{"r", r}, {"flux", v}});
    j["flux_by_radius"] = std::move(flux);
    return j.dump(2);
}

void write_flux_csv(const std::vector<std::pair<double, double>>& flux_by_radius, int quad_order,
                    std::ostream& os) {
    os << "r,flux,quad_order\n";
    for (const auto& [r, v] : flux_by_radius)
        os << format_double(r) << ',' << format_double(v) << ',' << quad_order << '\n';
}

}  // namespace penrose
