#include "penrose/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace penrose {

Jet Jet::zero(int n) {
    Jet j;
    j.dim = n;
    j.grad = Eigen::VectorXd::Zero(n);
    j.hess = Eigen::MatrixXd::Zero(n, n);
    return j;
}

bool Jet::finite() const {
    if (dim < 2 || grad.size() != dim || hess.rows() != dim || hess.cols() != dim) return false;
    if (!grad.allFinite() || !hess.allFinite()) return false;
    if (third) {
        if (static_cast<int>(third->size()) != dim) return false;
        for (const auto& t : *third)
            if (!t.allFinite()) return false;
    }
    return true;
}

const char* to_string(Ellipticity e) {
    switch (e) {
        case Ellipticity::elliptic_positive: return "elliptic_positive";
        case Ellipticity::elliptic_negative: return "elliptic_negative";
        default: return "degenerate";
    }
}

ShapeCore shape_core(const Jet& jet) {
    if (!jet.finite()) throw std::invalid_argument("shape_core: invalid jet");
    ShapeCore core;
    const double w2 = 1.0 + jet.grad.squaredNorm();
    core.w = std::sqrt(w2);
    const Vector hg = jet.hess * jet.grad;
    core.shape = jet.hess / core.w - (jet.grad * hg.transpose()) / (w2 * core.w);
    return core;
}

std::vector<double> elementary_symmetric_all(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw std::invalid_argument("elementary_symmetric: square matrix required");
    const int n = static_cast<int>(a.rows());
    std::vector<double> power_sums(n + 1, 0.0);  // p_j = tr(A^j)
    Matrix pw = a;
    for (int j = 1; j <= n; ++j) {
        power_sums[j] = pw.trace();
        if (j < n) pw = pw * a;
    }
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        double sign = 1.0;
        for (int j = 1; j <= k; ++j) {
            acc += sign * e[k - j] * power_sums[j];
            sign = -sign;
        }
        e[k] = acc / k;
    }
    return std::vector<double>(e.begin() + 1, e.end());
}

double elementary_symmetric(const Matrix& a, int k) {
    const int n = static_cast<int>(a.rows());
    if (k < 1 || k > n) throw std::invalid_argument("elementary_symmetric: k out of range");
    return elementary_symmetric_all(a)[k - 1];
}

namespace {

Vector real_sorted_eigenvalues(const Matrix& a) {
    Eigen::EigenSolver<Matrix> solver(a);
    Vector ev = solver.eigenvalues().real();
    std::sort(ev.data(), ev.data() + ev.size());
    return ev;
}

int numeric_rank(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * sv(0)) ++rank;
    return rank;
}

Ellipticity classify_from_eigenvalues(const Vector& eigenvalues, double s1, double tol) {
    bool all_pos = true, all_neg = true;
    for (int i = 0; i < eigenvalues.size(); ++i) {
        const double g = s1 - eigenvalues(i);
        all_pos = all_pos && (g > tol);
        all_neg = all_neg && (g < -tol);
    }
    if (all_pos) return Ellipticity::elliptic_positive;
    if (all_neg) return Ellipticity::elliptic_negative;
    return Ellipticity::degenerate;
}

}  // namespace

ShapeData shape_data(const Jet& jet) {
    if (!jet.finite()) throw std::invalid_argument("shape_data: invalid jet");
    const int n = jet.dim;
    ShapeData sd;
    sd.dim = n;
    const double w2 = 1.0 + jet.grad.squaredNorm();
    sd.w = std::sqrt(w2);
    sd.theta = 1.0 / sd.w;
    sd.metric = Matrix::Identity(n, n) + jet.grad * jet.grad.transpose();
    sd.metric_inv = Matrix::Identity(n, n) - (jet.grad * jet.grad.transpose()) / w2;
    sd.shape = shape_core(jet).shape;
    const auto e = elementary_symmetric_all(sd.shape);
    sd.sym_funcs = Eigen::Map<const Vector>(e.data(), n);
    sd.newton = sd.sym_funcs(0) * Matrix::Identity(n, n) - sd.shape;
    sd.eigenvalues = real_sorted_eigenvalues(sd.shape);
    sd.rank = numeric_rank(sd.shape);
    sd.ellipticity = classify_from_eigenvalues(sd.eigenvalues, sd.sym_funcs(0), 1e-10);
    return sd;
}

EllipticityReport ellipticity_classify(const ShapeData& sd, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("ellipticity_classify: tol must be > 0");
    EllipticityReport rep;
    rep.s3 = sd.dim >= 3 ? sd.s(3) : 0.0;
    rep.rank = sd.rank;
    rep.newton_eigenvalues = (sd.s(1) - sd.eigenvalues.array()).matrix();
    rep.classification = classify_from_eigenvalues(sd.eigenvalues, sd.s(1), tol);
    return rep;
}

TangentialField tangential_field(const Jet& jet, const ShapeData& sd) {
    TangentialField tf;
    // g^{ij} f_j = f_i / W^2 (Sherman-Morrison on the rank-one metric update).
    tf.x_components = jet.grad / (sd.w * sd.w);
    tf.gx_components = sd.newton * tf.x_components;
    tf.norm_g = std::sqrt(tf.x_components.dot(sd.metric * tf.x_components));
    return tf;
}

JacobiCoefficients jacobi_coefficients(const ShapeData& sd) {
    JacobiCoefficients jc;
    jc.newton = sd.newton;
    jc.zeroth = sd.dim >= 3 ? -3.0 * sd.s(3) : 0.0;
    return jc;
}

}  // namespace penrose
