#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "penrose/jet.hpp"
#include "penrose/schwarzschild.hpp"

namespace penrose {

/// A hypersurface given as a graph over (part of) R^n. Jets are exact
/// (closed-form), so all downstream geometry is quadrature-limited only.
class GraphSurface {
public:
    virtual ~GraphSurface() = default;
    virtual int dim() const = 0;
    virtual double value(const Eigen::VectorXd& x) const = 0;
    virtual Jet jet(const Eigen::VectorXd& x) const = 0;

    /// Domain: |x| > inner_radius() (0 means all of R^n) and |x| < outer_radius().
    virtual double inner_radius() const { return 0.0; }
    virtual double outer_radius() const { return std::numeric_limits<double>::infinity(); }

    /// Quadrature hints: polar angles (measured from feature_axis) where the
    /// integrand has reduced smoothness on the sphere of radius r, and radii
    /// where the angular structure changes inside (r1, r2). Defaults: none.
    virtual Eigen::VectorXd feature_axis() const;
    virtual std::vector<double> polar_splits(double r) const { (void)r; return {}; }
    virtual std::vector<double> radial_splits(double r1, double r2) const {
        (void)r1; (void)r2; return {};
    }
};

/// f == 0 on all of R^n.
class FlatGraph final : public GraphSurface {
public:
    explicit FlatGraph(int n) : n_(n) {}
    int dim() const override { return n_; }
    double value(const Eigen::VectorXd&) const override { return 0.0; }
    Jet jet(const Eigen::VectorXd& x) const override;

private:
    int n_;
};

/// The Schwarzschild graph f(x) = u_m(|x|) over |x| > r_m.
class SchwarzschildGraph final : public GraphSurface {
public:
    explicit SchwarzschildGraph(SchwarzschildProfile profile) : profile_(profile) {}
    int dim() const override { return profile_.n; }
    double value(const Eigen::VectorXd& x) const override;
    Jet jet(const Eigen::VectorXd& x) const override { return graph_jet(profile_, x); }
    double inner_radius() const override { return profile_.r_m; }
    const SchwarzschildProfile& profile() const { return profile_; }

private:
    SchwarzschildProfile profile_;
};

/// Upper hemisphere f(x) = sqrt(R^2 - |x|^2) over |x| < R; shape operator -I.
class SphereCapGraph final : public GraphSurface {
public:
    SphereCapGraph(int n, double radius) : n_(n), radius_(radius) {}
    int dim() const override { return n_; }
    double value(const Eigen::VectorXd& x) const override;
    Jet jet(const Eigen::VectorXd& x) const override;
    double outer_radius() const override { return radius_; }

private:
    int n_;
    double radius_;
};

/// x -> lambda x, f -> lambda f; jets transform by the chain rule.
class ScaledGraph final : public GraphSurface {
public:
    ScaledGraph(std::shared_ptr<const GraphSurface> base, double lambda)
        : base_(std::move(base)), lambda_(lambda) {}
    int dim() const override { return base_->dim(); }
    double value(const Eigen::VectorXd& x) const override { return lambda_ * base_->value(x / lambda_); }
    Jet jet(const Eigen::VectorXd& x) const override;
    double inner_radius() const override { return lambda_ * base_->inner_radius(); }
    double outer_radius() const override { return lambda_ * base_->outer_radius(); }

private:
    std::shared_ptr<const GraphSurface> base_;
    double lambda_;
};

}  // namespace penrose
