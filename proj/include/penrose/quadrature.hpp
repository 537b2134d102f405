#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace penrose {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    static const GaussLegendre& get(int order);
};

/// Integrates fn over [a, b] with a single Gauss-Legendre panel.
double integrate_panel(const std::function<double(double)>& fn, double a, double b, int order);

/// Integrates fn over consecutive panels defined by breakpoints (ascending).
double integrate_panels(const std::function<double(double)>& fn, const std::vector<double>& breaks,
                        int order);

/// Tensorized Gauss-Legendre rule on the unit sphere S^{n-1} in R^n.
/// Spherical angles with the polar axis along `axis`; optional split points for
/// the polar angle let integrands with known kink circles stay piecewise analytic.
/// Weights sum to the sphere area omega_{n-1}.
struct SphereRule {
    std::vector<Vector> points;   // unit vectors
    std::vector<double> weights;
    static SphereRule build(int n, int order);
    static SphereRule build(int n, int order, const Vector& axis,
                            const std::vector<double>& polar_splits);
};

/// Deterministic reduction: nodes may be evaluated in parallel, the weighted
/// sum always runs in index order.
double integrate_sphere(const SphereRule& rule, const std::function<double(const Vector&)>& fn);

/// Dimension-aware default order for sphere rules (node count grows like
/// order^{n-2}, so higher dimensions get lower per-angle orders).
int default_sphere_order(int n);

}  // namespace penrose
