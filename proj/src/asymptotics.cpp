#include "penrose/asymptotics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>

#include "penrose/util.hpp"

namespace penrose {

const char* to_string(ExpansionBasis basis) {
    switch (basis) {
        case ExpansionBasis::sqrt_basis: return "sqrt";
        case ExpansionBasis::log_basis: return "log";
        default: return "power";
    }
}

ExpansionFit fit_expansion(const std::vector<std::pair<double, double>>& samples, int n) {
    if (n < 3) throw std::domain_error("fit_expansion: n must be >= 3");
    if (samples.size() < 8) throw std::invalid_argument("fit_expansion: need >= 8 radii");

    ExpansionFit fit;
    fit.n = n;
    const int terms = n == 3 ? 3 : 2;
    fit.basis = n == 3 ? ExpansionBasis::sqrt_basis
                       : (n == 4 ? ExpansionBasis::log_basis : ExpansionBasis::power_basis);

    Eigen::MatrixXd design(samples.size(), terms);
    Eigen::VectorXd rhs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r = samples[i].first;
        if (!(r > 0.0)) throw std::invalid_argument("fit_expansion: radii must be positive");
        rhs(i) = samples[i].second;
        if (n == 3) {
            design(i, 0) = std::sqrt(r);
            design(i, 1) = 1.0;
            design(i, 2) = 1.0 / std::sqrt(r);
        } else if (n == 4) {
            design(i, 0) = std::log(r);
            design(i, 1) = 1.0;
        } else {
            design(i, 0) = std::pow(r, -0.5 * n + 2.0);
            design(i, 1) = 1.0;
        }
    }
    // Column scaling keeps the normal system well conditioned on wide windows.
    Eigen::VectorXd scale(terms);
    for (int k = 0; k < terms; ++k) scale(k) = design.col(k).norm();
    if (scale.minCoeff() <= 0.0) throw FitError("fit_expansion: degenerate basis on the window");
    for (int k = 0; k < terms; ++k) design.col(k) /= scale(k);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < terms) throw FitError("fit_expansion: ill-conditioned basis on the window");
    Eigen::VectorXd coef = qr.solve(rhs);
    fit.residual = (design * coef - rhs).cwiseAbs().maxCoeff();
    for (int k = 0; k < terms; ++k) coef(k) /= scale(k);

    fit.a = coef(0);
    fit.a1 = coef(1);
    fit.a2_or_c = terms > 2 ? coef(2) : 0.0;
    return fit;
}

double mass_from_tail(const ExpansionFit& fit) {
    if (fit.n < 3) throw std::domain_error("mass_from_tail: n must be >= 3");
    const double a2 = fit.a * fit.a;
    if (fit.n == 3) return a2 / 8.0;
    if (fit.n == 4) return a2 / 2.0;
    return a2 * (fit.n - 4) * (fit.n - 4) / 8.0;
}

std::vector<double> expansion_window(double r_m, double lo, double hi, int count) {
    std::vector<double> radii(count);
    for (int i = 0; i < count; ++i)
        radii[i] = r_m * lo * std::pow(hi / lo, double(i) / (count - 1));
    return radii;
}

std::vector<DecayRow> decay_check(const GraphSurface& graph, const std::vector<double>& radii,
                                  int samples_per_sphere) {
    const int n = graph.dim();
    std::mt19937_64 rng(20240913);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> dirs;
    for (int i = 0; i < samples_per_sphere; ++i) {
        Eigen::VectorXd v(n);
        for (int d = 0; d < n; ++d) v(d) = gauss(rng);
        dirs.push_back(v.normalized());
    }
    dirs.push_back(Eigen::VectorXd::Unit(n, 0));

    std::vector<DecayRow> rows;
    for (double r : radii) {
        DecayRow row;
        row.r = r;
        for (const auto& dir : dirs) {
            const Jet jet = graph.jet(r * dir);
            row.grad_quantity =
                std::max(row.grad_quantity, std::pow(r, 0.5 * n - 1.0) * jet.grad.norm());
            row.hess_quantity = std::max(
                row.hess_quantity, std::pow(r, 0.5 * n) * jet.hess.cwiseAbs().maxCoeff());
            if (jet.third) {
                double max3 = 0.0;
                for (const auto& t : *jet.third) max3 = std::max(max3, t.cwiseAbs().maxCoeff());
                row.third_quantity = std::max(row.third_quantity, std::pow(r, 0.5 * n + 1.0) * max3);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

bool decay_bounded(const std::vector<DecayRow>& rows, double growth_tol) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto& a = rows[i];
        const auto& b = rows[i + 1];
        if (b.grad_quantity > growth_tol * a.grad_quantity + 1e-12) return false;
        if (b.hess_quantity > growth_tol * a.hess_quantity + 1e-12) return false;
        if (b.third_quantity > growth_tol * a.third_quantity + 1e-12) return false;
    }
    return true;
}

std::string to_json(const ExpansionFit& fit) {
    nlohmann::ordered_json j;
    j["n"] = fit.n;
    j["basis"] = to_string(fit.basis);
    j["a"] = fit.a;
    j["a1"] = fit.a1;
    if (fit.n == 3) j["a2"] = fit.a2_or_c;
    j["residual"] = fit.residual;
    j["mass_from_tail"] = mass_from_tail(fit);
    return j.dump(2);
}

void write_decay_csv(const std::vector<DecayRow>& rows, std::ostream& os) {
    os << "r,grad_quantity,hess_quantity,third_quantity\n";
    for (const auto& row : rows)
        os << format_double(row.r) << ',' << format_double(row.grad_quantity) << ','
           << format_double(row.hess_quantity) << ',' << format_double(row.third_quantity) << '\n';
}

}  // namespace penrose
