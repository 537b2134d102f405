#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "penrose/geometry.hpp"
#include "penrose/graph.hpp"

namespace penrose {

/// Compactly supported quartic bump b(s) = (1-s^2)^4 on |s| < 1 (C^3, with
/// closed-form derivatives to third order).
struct BumpSpec {
    Eigen::VectorXd center;
    double radius = 1.0;
    double amplitude = 0.0;
};

/// max |b''(s)| over [0,1]; attained at s = 0 with value 8.
double bump_profile_c2_constant();

/// Reported C^2-norm of the perturbation: amplitude * max|b''| / radius^2.
double bump_c2_norm(const BumpSpec& spec);

/// f' = f + amplitude * b(|x-center|/radius); jets are exact sums. Outside the
/// support ball the base jets are returned unchanged (bitwise).
class BumpPerturbedGraph final : public GraphSurface {
public:
    BumpPerturbedGraph(std::shared_ptr<const GraphSurface> base, BumpSpec spec);
    int dim() const override { return base_->dim(); }
    double value(const Eigen::VectorXd& x) const override;
    Jet jet(const Eigen::VectorXd& x) const override;
    double inner_radius() const override { return base_->inner_radius(); }
    Eigen::VectorXd feature_axis() const override;
    std::vector<double> polar_splits(double r) const override;
    std::vector<double> radial_splits(double r1, double r2) const override;
    const BumpSpec& spec() const { return spec_; }

private:
    std::shared_ptr<const GraphSurface> base_;
    BumpSpec spec_;
};

/// Validates the support exclusion (support disjoint from |x| <= 1.1 * inner
/// radius of the base graph) and wraps the base.
std::shared_ptr<GraphSurface> bump_perturb(std::shared_ptr<const GraphSurface> base,
                                           const BumpSpec& spec);

struct PersistenceReport {
    double min_abs_s3 = 0.0;
    Ellipticity worst = Ellipticity::elliptic_positive;
    Eigen::VectorXd worst_point;  // a witness where `worst` was observed
};

/// Minimum |S_3| and worst ellipticity classification over the sample set.
PersistenceReport ellipticity_persistence(const GraphSurface& graph,
                                          const std::vector<Eigen::VectorXd>& samples,
                                          double tol = 1e-10);

/// Deterministic sample set covering radii [r_lo, r_hi]: log-spaced shells of
/// fixed-seed random directions, plus points along the feature axis.
std::vector<Eigen::VectorXd> persistence_samples(const GraphSurface& graph, double r_lo,
                                                 double r_hi, int shells, int per_shell);

struct SlackRow {
    double amplitude = 0.0;
    double adm_formula = 0.0;  // bulk + horizon from the mass formula
    double adm_flux = 0.0;     // extrapolated coordinate-sphere flux
    double slack = 0.0;        // adm_formula - penrose_rhs
    double min_scalar_curvature = 0.0;
};

struct SweepOptions {
    double truncation_radius = 10.0;     // in units of r_m
    int quad_order = 32;
    std::vector<double> flux_radii;      // in units of r_m; default {10,20,40,80}
    double sample_r_hi = 20.0;           // in units of r_m, for min R_g sampling
};

std::vector<SlackRow> penrose_slack_sweep(const SchwarzschildProfile& profile,
                                          const BumpSpec& shape,
                                          const std::vector<double>& amplitudes,
                                          const SweepOptions& opts = {});

}  // namespace penrose
