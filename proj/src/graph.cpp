#include "penrose/graph.hpp"

#include <cmath>
#include <stdexcept>

namespace penrose {

Eigen::VectorXd GraphSurface::feature_axis() const {
    Eigen::VectorXd axis = Eigen::VectorXd::Zero(dim());
    axis(0) = 1.0;
    return axis;
}

Jet FlatGraph::jet(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw std::invalid_argument("FlatGraph::jet: dimension mismatch");
    Jet j = Jet::zero(n_);
    j.third = std::vector<Eigen::MatrixXd>(n_, Eigen::MatrixXd::Zero(n_, n_));
    return j;
}

double SchwarzschildGraph::value(const Eigen::VectorXd& x) const {
    return profile_jet(profile_, x.norm()).u;
}

double SphereCapGraph::value(const Eigen::VectorXd& x) const {
    return std::sqrt(radius_ * radius_ - x.squaredNorm());
}

Jet SphereCapGraph::jet(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw std::invalid_argument("SphereCapGraph::jet: dimension mismatch");
    const double f2 = radius_ * radius_ - x.squaredNorm();
    if (!(f2 > 0.0)) throw std::domain_error("SphereCapGraph::jet: |x| >= radius");
    const double f = std::sqrt(f2);
    Jet j;
    j.dim = n_;
    j.grad = -x / f;
    j.hess = -Eigen::MatrixXd::Identity(n_, n_) / f - (x * x.transpose()) / (f * f2);
    std::vector<Eigen::MatrixXd> third(n_);
    const Eigen::MatrixXd xxt = x * x.transpose();
    for (int k = 0; k < n_; ++k) {
        Eigen::MatrixXd tk = -(Eigen::MatrixXd::Identity(n_, n_) * x(k)) / (f * f2);
        tk -= (Eigen::VectorXd::Unit(n_, k) * x.transpose() +
               x * Eigen::VectorXd::Unit(n_, k).transpose()) /
              (f * f2);
        tk -= 3.0 * x(k) * xxt / (f * f2 * f2);
        third[k] = tk;
    }
    j.third = std::move(third);
    return j;
}

Jet ScaledGraph::jet(const Eigen::VectorXd& x) const {
    Jet base = base_->jet(x / lambda_);
    Jet j;
    j.dim = base.dim;
    j.grad = base.grad;  // slopes are scale-invariant
    j.hess = base.hess / lambda_;
    if (base.third) {
        std::vector<Eigen::MatrixXd> third;
        third.reserve(base.third->size());
        for (const auto& t : *base.third) third.push_back(t / (lambda_ * lambda_));
        j.third = std::move(third);
    }
    return j;
}

}  // namespace penrose
