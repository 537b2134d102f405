#include "penrose/reilly.hpp"

#include <cmath>
#include <ostream>

#include "penrose/geometry.hpp"
#include "penrose/mass.hpp"
#include "penrose/quadrature.hpp"
#include "penrose/util.hpp"

namespace penrose {

namespace {

// W * Y^i at x, with Y = G(A)X expressed in coordinate components.
Eigen::VectorXd scaled_field(const GraphSurface& graph, const Eigen::VectorXd& x) {
    const Jet jet = graph.jet(x);
    const ShapeCore core = shape_core(jet);
    const auto sk = elementary_symmetric_all(core.shape);
    const Eigen::VectorXd X = jet.grad / (core.w * core.w);
    const Eigen::VectorXd Y = sk[0] * X - core.shape * X;
    return core.w * Y;
}

void check_stencil(const GraphSurface& graph, const Eigen::VectorXd& point, double h) {
    const double r = point.norm();
    const double lo = graph.inner_radius();
    const double hi = graph.outer_radius();
    if (lo > 0.0 && !(r - h > lo * (1.0 + 2.0 * kNearHorizonGap)))
        throw StencilError("divergence stencil leaves the graph domain");
    if (!(r + h < hi)) throw StencilError("divergence stencil leaves the graph domain");
}

double divergence_fd_plain(const GraphSurface& graph, const Eigen::VectorXd& point, double h) {
    check_stencil(graph, point, h);
    const int n = graph.dim();
    double div = 0.0;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd xp = point, xm = point;
        xp(i) += h;
        xm(i) -= h;
        div += (scaled_field(graph, xp)(i) - scaled_field(graph, xm)(i)) / (2.0 * h);
    }
    const ShapeCore core = shape_core(graph.jet(point));
    return div / core.w;
}

}  // namespace

double divergence_fd(const GraphSurface& graph, const Eigen::VectorXd& point, double h,
                     int richardson) {
    if (!(h > 0.0)) throw std::invalid_argument("divergence_fd: h must be > 0");
    if (richardson <= 0) return divergence_fd_plain(graph, point, h);
    // One level: (4 D(h/2) - D(h)) / 3, recursively.
    const double coarse = divergence_fd(graph, point, h, richardson - 1);
    const double fine = divergence_fd(graph, point, h / 2.0, richardson - 1);
    return (4.0 * fine - coarse) / 3.0;
}

double divergence_residual(const GraphSurface& graph, const Eigen::VectorXd& point, double h) {
    const double div = divergence_fd(graph, point, h);
    const Jet jet = graph.jet(point);
    const ShapeCore core = shape_core(jet);
    const double s2 = elementary_symmetric(core.shape, 2);
    return std::abs(div - 2.0 * s2 / core.w);
}

FluxRecord normalized_boundary_flux(const GraphSurface& graph, double r, int quad_order) {
    const int n = graph.dim();
    if (quad_order == 0) quad_order = default_sphere_order(n);
    if (!(r > graph.inner_radius()) || !(r < graph.outer_radius()))
        throw std::domain_error("normalized_boundary_flux: radius outside the graph domain");
    const MassConstants mc = mass_constants(n);
    const SphereRule rule =
        SphereRule::build(n, quad_order, graph.feature_axis(), graph.polar_splits(r));
    const double power = std::pow(r, n - 1);
    auto integrand = [&](const Vector& omega) {
        return scaled_field(graph, r * omega).dot(omega) * power;
    };
    FluxRecord rec;
    rec.r = r;
    rec.quad_order = quad_order;
    rec.normalized_flux = mc.c_n * integrate_sphere(rule, integrand);
    return rec;
}

double horizon_flux(double r_m, int n) {
    if (n < 3) throw std::domain_error("horizon_flux: n must be >= 3");
    if (!(r_m >= 0.0)) throw std::domain_error("horizon_flux: r_m must be >= 0");
    return 0.5 * std::pow(r_m, n - 2);
}

double flux_balance(const GraphSurface& graph, double r1, double r2, int quad_order) {
    if (!(r1 < r2)) throw std::invalid_argument("flux_balance: need r1 < r2");
    const double f1 = normalized_boundary_flux(graph, r1, quad_order).normalized_flux;
    const double f2 = normalized_boundary_flux(graph, r2, quad_order).normalized_flux;
    return f2 - f1;
}

void write_flux_records_csv(const std::vector<FluxRecord>& records, std::ostream& os) {
    os << "r,flux,quad_order\n";
    for (const auto& rec : records)
        os << format_double(rec.r) << ',' << format_double(rec.normalized_flux) << ','
           << rec.quad_order << '\n';
}

}  // namespace penrose
