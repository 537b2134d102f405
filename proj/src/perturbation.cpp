#include "penrose/perturbation.hpp"

#include <cmath>
#include <random>

#include "penrose/mass.hpp"

namespace penrose {

double bump_profile_c2_constant() {
    // b(s) = (1-s^2)^4, b''(s) = (1-s^2)^2 (56 s^2 - 8); |b''| peaks at s = 0.
    return 8.0;
}

double bump_c2_norm(const BumpSpec& spec) {
    return std::abs(spec.amplitude) * bump_profile_c2_constant() / (spec.radius * spec.radius);
}

BumpPerturbedGraph::BumpPerturbedGraph(std::shared_ptr<const GraphSurface> base, BumpSpec spec)
    : base_(std::move(base)), spec_(std::move(spec)) {
    if (spec_.center.size() != base_->dim())
        throw std::invalid_argument("bump center dimension mismatch");
    if (!(spec_.radius > 0.0)) throw std::invalid_argument("bump radius must be > 0");
}

double BumpPerturbedGraph::value(const Eigen::VectorXd& x) const {
    const double base = base_->value(x);
    const double q = (x - spec_.center).squaredNorm() / (spec_.radius * spec_.radius);
    if (q >= 1.0) return base;
    const double one_q = 1.0 - q;
    return base + spec_.amplitude * one_q * one_q * one_q * one_q;
}

Jet BumpPerturbedGraph::jet(const Eigen::VectorXd& x) const {
    Jet jet = base_->jet(x);
    const Eigen::VectorXd y = x - spec_.center;
    const double rad2 = spec_.radius * spec_.radius;
    const double q = y.squaredNorm() / rad2;
    if (q >= 1.0) return jet;  // bitwise-unchanged outside the support ball

    const int n = base_->dim();
    const double one_q = 1.0 - q;
    // beta(q) = (1-q)^4 and derivatives in q.
    const double beta1 = -4.0 * one_q * one_q * one_q;
    const double beta2 = 12.0 * one_q * one_q;
    const double beta3 = -24.0 * one_q;
    const double amp = spec_.amplitude;

    jet.grad += amp * beta1 * (2.0 / rad2) * y;
    jet.hess += amp * (beta2 * (4.0 / (rad2 * rad2)) * (y * y.transpose()) +
                       beta1 * (2.0 / rad2) * Eigen::MatrixXd::Identity(n, n));
    if (jet.third) {
        const Eigen::MatrixXd yyt = y * y.transpose();
        for (int k = 0; k < n; ++k) {
            Eigen::MatrixXd tk = beta3 * (8.0 / (rad2 * rad2 * rad2)) * y(k) * yyt;
            tk += beta2 * (4.0 / (rad2 * rad2)) *
                  (Eigen::VectorXd::Unit(n, k) * y.transpose() +
                   y * Eigen::VectorXd::Unit(n, k).transpose() +
                   y(k) * Eigen::MatrixXd::Identity(n, n));
            (*jet.third)[k] += amp * tk;
        }
    }
    return jet;
}

Eigen::VectorXd BumpPerturbedGraph::feature_axis() const {
    if (spec_.center.norm() < 1e-12) return base_->feature_axis();
    return spec_.center.normalized();
}

std::vector<double> BumpPerturbedGraph::polar_splits(double r) const {
    // Kink circle of the support sphere |x - c| = radius on the sphere |x| = r.
    const double c = spec_.center.norm();
    if (c < 1e-12) return {};
    const double ct = (r * r + c * c - spec_.radius * spec_.radius) / (2.0 * r * c);
    if (ct <= -1.0 || ct >= 1.0) return {};
    return {std::acos(ct)};
}

std::vector<double> BumpPerturbedGraph::radial_splits(double r1, double r2) const {
    const double c = spec_.center.norm();
    std::vector<double> splits;
    for (double s : {c - spec_.radius, c + spec_.radius})
        if (s > r1 && s < r2) splits.push_back(s);
    return splits;
}

std::shared_ptr<GraphSurface> bump_perturb(std::shared_ptr<const GraphSurface> base,
                                           const BumpSpec& spec) {
    const double exclusion = 1.1 * base->inner_radius();
    if (spec.center.norm() - spec.radius < exclusion)
        throw std::invalid_argument(
            "bump_perturb: support intersects the near-horizon exclusion zone");
    return std::make_shared<BumpPerturbedGraph>(std::move(base), spec);
}

PersistenceReport ellipticity_persistence(const GraphSurface& graph,
                                          const std::vector<Eigen::VectorXd>& samples,
                                          double tol) {
    PersistenceReport report;
    report.min_abs_s3 = std::numeric_limits<double>::infinity();
    auto severity = [](Ellipticity e) {
        switch (e) {
            case Ellipticity::elliptic_positive: return 0;
            case Ellipticity::elliptic_negative: return 1;
            default: return 2;
        }
    };
    for (const auto& x : samples) {
        const ShapeData sd = shape_data(graph.jet(x));
        const EllipticityReport rep = ellipticity_classify(sd, tol);
        if (std::abs(rep.s3) < report.min_abs_s3) report.min_abs_s3 = std::abs(rep.s3);
        if (severity(rep.classification) > severity(report.worst)) {
            report.worst = rep.classification;
            report.worst_point = x;
        }
    }
    return report;
}

std::vector<Eigen::VectorXd> persistence_samples(const GraphSurface& graph, double r_lo,
                                                 double r_hi, int shells, int per_shell) {
    const int n = graph.dim();
    std::mt19937_64 rng(77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> samples;
    for (int s = 0; s < shells; ++s) {
        const double r = r_lo * std::pow(r_hi / r_lo, double(s) / (shells - 1));
        for (int i = 0; i < per_shell; ++i) {
            Eigen::VectorXd v(n);
            for (int d = 0; d < n; ++d) v(d) = gauss(rng);
            samples.push_back(r * v.normalized());
        }
    }
    // Line of samples along the feature axis, where perturbations concentrate.
    const Eigen::VectorXd axis = graph.feature_axis();
    for (int i = 0; i <= 40; ++i) {
        const double r = r_lo + (r_hi - r_lo) * i / 40.0;
        samples.push_back(r * axis);
    }
    return samples;
}

std::vector<SlackRow> penrose_slack_sweep(const SchwarzschildProfile& profile,
                                          const BumpSpec& shape,
                                          const std::vector<double>& amplitudes,
                                          const SweepOptions& opts) {
    const auto base = std::make_shared<SchwarzschildGraph>(profile);
    const HorizonShape horizon = HorizonShape::round_sphere(profile.n, profile.r_m);

    MassFormulaOptions mf;
    mf.quad_order = opts.quad_order;
    if (opts.flux_radii.empty()) {
        for (double k : {10.0, 20.0, 40.0, 80.0}) mf.adm_radii.push_back(k * profile.r_m);
    } else {
        for (double k : opts.flux_radii) mf.adm_radii.push_back(k * profile.r_m);
    }

    std::vector<SlackRow> rows(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        BumpSpec spec = shape;
        spec.amplitude = amplitudes[i];
        const auto graph = bump_perturb(base, spec);
        const MassReport report =
            mass_formula_terms(*graph, horizon, opts.truncation_radius * profile.r_m, mf);
        SlackRow row;
        row.amplitude = amplitudes[i];
        row.adm_formula = report.bulk + report.horizon;
        row.adm_flux = report.adm;
        row.slack = row.adm_formula - report.penrose_rhs;
        const auto samples =
            persistence_samples(*graph, 1.1 * profile.r_m, opts.sample_r_hi * profile.r_m, 24, 16);
        double min_rg = std::numeric_limits<double>::infinity();
        for (const auto& x : samples) {
            const ShapeCore core = shape_core(graph->jet(x));
            min_rg = std::min(min_rg, 2.0 * elementary_symmetric(core.shape, 2));
        }
        row.min_scalar_curvature = min_rg;
        rows[i] = row;
    }
    return rows;
}

}  // namespace penrose
