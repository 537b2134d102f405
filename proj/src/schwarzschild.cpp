#include "penrose/schwarzschild.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <ostream>

#include "penrose/quadrature.hpp"
#include "penrose/util.hpp"

namespace penrose {

namespace {

// r^{n-2} - 2m, computed as r_m^{n-2} * expm1((n-2) log(r/r_m)) for accuracy
// near the horizon.
double radial_gap(int n, double m, double r_m, double r) {
    (void)m;
    return std::pow(r_m, n - 2) * std::expm1((n - 2) * std::log(r / r_m));
}

double u_prime_closed(int n, double m, double r_m, double r) {
    return std::sqrt(2.0 * m / radial_gap(n, m, r_m, r));
}

double u_double_prime_closed(int n, double m, double r_m, double r) {
    const double gap = radial_gap(n, m, r_m, r);
    return -(n - 2) * std::pow(r, n - 3) * std::sqrt(2.0 * m) / (2.0 * std::pow(gap, 1.5));
}

// u(r) for n >= 5 by Gauss-Legendre on the substituted integrand
//   u(r) = int_0^{sqrt(r-r_m)} 2 sqrt(2m) / sqrt(phi(s^2)) ds,
//   phi(q) = ((r_m+q)^{n-2} - r_m^{n-2}) / q  (smooth, positive),
// which removes the (r-r_m)^{-1/2} endpoint singularity.
double u_quadrature(int n, double m, double r_m, double r) {
    const double s_max = std::sqrt(r - r_m);
    auto integrand = [&](double s) {
        const double q = s * s;
        double phi;
        if (q < 1e-300) {
            phi = (n - 2) * std::pow(r_m, n - 3);
        } else {
            phi = std::pow(r_m, n - 2) * std::expm1((n - 2) * std::log1p(q / r_m)) / q;
        }
        return 2.0 * std::sqrt(2.0 * m) / std::sqrt(phi);
    };
    // Dyadic panels resolve the decaying tail without losing the near-horizon end.
    std::vector<double> breaks{0.0};
    double edge = std::sqrt(r_m);
    while (edge < s_max) {
        breaks.push_back(edge);
        edge *= 2.0;
    }
    breaks.push_back(s_max);
    return integrate_panels(integrand, breaks, 32);
}

}  // namespace

double horizon_radius(int n, double m) {
    if (n < 3) throw std::domain_error("horizon_radius: n must be >= 3");
    if (!(m > 0.0)) throw std::domain_error("horizon_radius: m must be > 0");
    return std::pow(2.0 * m, 1.0 / (n - 2));
}

SchwarzschildProfile::SchwarzschildProfile(int n_, double m_)
    : n(n_), m(m_), r_m(horizon_radius(n_, m_)) {}

ProfileJet profile_jet(const SchwarzschildProfile& p, double r) {
    if (!(r >= p.r_m)) throw std::domain_error("profile_jet: r below horizon radius");
    if (r == p.r_m) {
        ProfileJet pj;
        pj.u = 0.0;
        pj.u_prime = std::numeric_limits<double>::infinity();
        pj.u_double_prime = -std::numeric_limits<double>::infinity();
        pj.singular = true;
        return pj;
    }
    if (r < p.r_m * (1.0 + kNearHorizonGap))
        throw std::domain_error("profile_jet: r inside the near-horizon exclusion band");
    ProfileJet pj;
    pj.u_prime = u_prime_closed(p.n, p.m, p.r_m, r);
    pj.u_double_prime = u_double_prime_closed(p.n, p.m, p.r_m, r);
    if (p.n == 3) {
        pj.u = 2.0 * std::sqrt(2.0 * p.m) * std::sqrt(r - 2.0 * p.m);
    } else if (p.n == 4) {
        pj.u = std::sqrt(2.0 * p.m) * std::acosh(r / std::sqrt(2.0 * p.m));
    } else {
        pj.u = u_quadrature(p.n, p.m, p.r_m, r);
    }
    return pj;
}

double profile_third_derivative(const SchwarzschildProfile& p, double r) {
    if (!(r > p.r_m * (1.0 + kNearHorizonGap)))
        throw std::domain_error("profile_third_derivative: r too close to the horizon");
    const int n = p.n;
    const double gap = radial_gap(n, p.m, p.r_m, r);
    const double c = -(n - 2) * std::sqrt(2.0 * p.m) / 2.0;
    return c * ((n - 3) * std::pow(r, n - 4) / std::pow(gap, 1.5) -
                1.5 * (n - 2) * std::pow(r, 2 * (n - 3)) / std::pow(gap, 2.5));
}

Jet graph_jet(const SchwarzschildProfile& p, const Eigen::VectorXd& x) {
    const int n = p.n;
    if (x.size() != n) throw std::invalid_argument("graph_jet: point dimension mismatch");
    const double r = x.norm();
    if (!(r > p.r_m * (1.0 + kNearHorizonGap)))
        throw std::domain_error("graph_jet: |x| inside horizon/exclusion region");

    const ProfileJet pj = profile_jet(p, r);
    const double up = pj.u_prime, upp = pj.u_double_prime;
    const double uppp = profile_third_derivative(p, r);

    Jet jet;
    jet.dim = n;
    jet.grad = (up / r) * x;
    const Eigen::MatrixXd xxt = x * x.transpose();
    const double phi = (upp - up / r) / (r * r);
    jet.hess = phi * xxt + (up / r) * Eigen::MatrixXd::Identity(n, n);

    // f_ijk = phi'(r) x_i x_j x_k / r + phi (delta_ik x_j + delta_jk x_i + delta_ij x_k)
    //         + d/dr(u'/r) * (x_k/r) delta_ij - the delta_ij x_k piece folds into phi terms:
    // with f_ij = phi x_i x_j + (u'/r) delta_ij,
    //   f_ijk = phi' (x_k/r) x_i x_j + phi (delta_ik x_j + delta_jk x_i)
    //           + (u'' r - u')/r^2 * (x_k/r) delta_ij.
    const double phi_prime =
        (uppp - upp / r + up / (r * r)) / (r * r) - 2.0 * (upp - up / r) / (r * r * r);
    const double psi = (upp * r - up) / (r * r);
    std::vector<Eigen::MatrixXd> third(n);
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd tk = (phi_prime * x(k) / r) * xxt;
        tk += phi * (Eigen::VectorXd::Unit(n, k) * x.transpose() +
                     x * Eigen::VectorXd::Unit(n, k).transpose());
        tk += (psi * x(k) / r) * Eigen::MatrixXd::Identity(n, n);
        third[k] = tk;
    }
    jet.third = std::move(third);
    return jet;
}

RadialProfileTable sample_profile(const SchwarzschildProfile& p, const std::vector<double>& radii) {
    RadialProfileTable table;
    table.provenance = p.n <= 4 ? RadialProfileTable::Provenance::closed_form
                                : RadialProfileTable::Provenance::quadrature;
    for (double r : radii) {
        const ProfileJet pj = profile_jet(p, r);
        table.r.push_back(r);
        table.u.push_back(pj.u);
        table.u_prime.push_back(pj.u_prime);
        table.u_double_prime.push_back(pj.u_double_prime);
    }
    return table;
}

RadialProfileTable solve_radial_scalar_flat(int n, double r0, double u0, double up0, double r_end,
                                            int samples, double abs_tol, double rel_tol) {
    if (n < 3) throw std::domain_error("solve_radial_scalar_flat: n must be >= 3");
    if (!(r0 > 0.0) || !std::isfinite(up0))
        throw std::domain_error("solve_radial_scalar_flat: invalid initial data");
    if (samples < 2) throw std::invalid_argument("solve_radial_scalar_flat: samples must be >= 2");

    using State = std::array<double, 2>;  // (u, u')
    auto rhs = [n](const State& y, State& dydr, double r) {
        dydr[0] = y[1];
        dydr[1] = -0.5 * (n - 2) * y[1] * (1.0 + y[1] * y[1]) / r;
    };

    RadialProfileTable table;
    table.provenance = RadialProfileTable::Provenance::ode;
    const double span = r_end - r0;
    std::vector<double> grid(samples);
    for (int i = 0; i < samples; ++i) grid[i] = r0 + span * i / (samples - 1);

    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_dense_output(abs_tol, rel_tol, ode::runge_kutta_dopri5<State>());
    State y{u0, up0};
    stepper.initialize(y, r0, span / 1024.0);

    std::size_t next = 0;
    auto emit_up_to = [&](double r_reached) {
        while (next < grid.size() && (span > 0 ? grid[next] <= r_reached : grid[next] >= r_reached)) {
            State yi;
            stepper.calc_state(grid[next], yi);
            State dy;
            rhs(yi, dy, grid[next]);
            table.r.push_back(grid[next]);
            table.u.push_back(yi[0]);
            table.u_prime.push_back(yi[1]);
            table.u_double_prime.push_back(dy[1]);
            ++next;
        }
    };

    const double up_limit = 1e8;
    while (next < grid.size()) {
        try {
            stepper.do_step(rhs);
        } catch (const std::exception& ex) {
            const auto& yc = stepper.current_state();
            throw IntegrationError(std::string("radial ODE step failure: ") + ex.what(),
                                   stepper.current_time(), yc[0], yc[1]);
        }
        const auto& yc = stepper.current_state();
        if (!std::isfinite(yc[0]) || !std::isfinite(yc[1]) || std::abs(yc[1]) > up_limit) {
            emit_up_to(stepper.previous_time());
            throw IntegrationError("radial ODE blow-up inside span", stepper.previous_time(),
                                   stepper.previous_state()[0], stepper.previous_state()[1]);
        }
        emit_up_to(stepper.current_time());
        if ((span > 0 && stepper.current_time() >= r_end) ||
            (span < 0 && stepper.current_time() <= r_end))
            emit_up_to(r_end);
    }
    return table;
}

RadialClassification classify_radial_solution(int n, double r0, double up0) {
    RadialClassification c;
    if (std::abs(up0) < 1e-14) {
        c.flat = true;
        return c;
    }
    const double up2 = up0 * up0;
    c.mass = up2 * std::pow(r0, n - 2) / (2.0 * (1.0 + up2));
    return c;
}

void write_csv(const RadialProfileTable& table, std::ostream& os) {
    os << "r,u,u_prime,u_double_prime\n";
    for (std::size_t i = 0; i < table.r.size(); ++i) {
        os << format_double(table.r[i]) << ',' << format_double(table.u[i]) << ','
           << format_double(table.u_prime[i]) << ',' << format_double(table.u_double_prime[i])
           << '\n';
    }
}

}  // namespace penrose
