#pragma once

#include <Eigen/Dense>
#include <vector>

#include "penrose/jet.hpp"

namespace penrose {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Ellipticity { elliptic_positive, elliptic_negative, degenerate };

const char* to_string(Ellipticity e);

/// Pointwise extrinsic geometry of a graph hypersurface. The shape operator is
/// the coordinate matrix A = B + C with B_ij = f_ij/W and
/// C_ij = -(1/W^3) f_i sum_k f_k f_kj; it is self-adjoint with respect to the
/// induced metric, so its eigenvalues (the principal curvatures) are real even
/// though the matrix is not symmetric in coordinates. Orientation: upward unit
/// normal (Theta > 0).
struct ShapeData {
    int dim = 0;
    double w = 1.0;        // sqrt(1 + |grad|^2)
    double theta = 1.0;    // 1/W, vertical component of the unit normal
    Matrix metric;         // g_ij = delta_ij + f_i f_j
    Matrix metric_inv;     // g^ij = delta_ij - f_i f_j / W^2
    Matrix shape;          // A
    Vector sym_funcs;      // S_1..S_n (sym_funcs[k-1] = S_k)
    Matrix newton;         // G(A) = S_1 I - A
    Vector eigenvalues;    // principal curvatures, ascending
    int rank = 0;          // singular values above 1e-10 * largest
    Ellipticity ellipticity = Ellipticity::degenerate;

    double s(int k) const { return sym_funcs(k - 1); }
    double scalar_curvature() const { return 2.0 * sym_funcs(1); }  // R_g = 2 S_2
};

struct TangentialField {
    Vector x_components;   // X^i = g^{ij} f_j
    Vector gx_components;  // (G(A) X)^i
    double norm_g = 0.0;   // |X| in the induced metric
};

struct EllipticityReport {
    Ellipticity classification = Ellipticity::degenerate;
    double s3 = 0.0;
    int rank = 0;
    Vector newton_eigenvalues;  // S_1 - lambda_i (eigenvalues of G(A) as an operator)
};

struct JacobiCoefficients {
    Matrix newton;         // divergence-part coefficient G(A)
    double zeroth = 0.0;   // -3 S_3
};

/// Shape operator matrix and area factor only; the cheap path for quadrature
/// integrands that do not need eigenvalues or diagnostics.
struct ShapeCore {
    double w = 1.0;
    Matrix shape;
};

ShapeCore shape_core(const Jet& jet);

/// Elementary symmetric functions S_1..S_n of the eigenvalues of a (not
/// necessarily symmetric) square matrix, via the trace recursion
/// e_k = (1/k) sum_{j=1}^{k} (-1)^{j-1} e_{k-j} tr(A^j).
std::vector<double> elementary_symmetric_all(const Matrix& a);
double elementary_symmetric(const Matrix& a, int k);

ShapeData shape_data(const Jet& jet);

EllipticityReport ellipticity_classify(const ShapeData& sd, double tol = 1e-10);

TangentialField tangential_field(const Jet& jet, const ShapeData& sd);

JacobiCoefficients jacobi_coefficients(const ShapeData& sd);

}  // namespace penrose
