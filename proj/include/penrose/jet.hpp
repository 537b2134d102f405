#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace penrose {

/// Second/third-order jet of a graph function at a point: the universal input
/// to the pointwise geometry. Carries f_i, f_ij and optionally f_ijk.
struct Jet {
    int dim = 0;
    Eigen::VectorXd grad;                               // f_i
    Eigen::MatrixXd hess;                               // f_ij, stored symmetric
    std::optional<std::vector<Eigen::MatrixXd>> third;  // third[k](i,j) = f_ijk

    static Jet zero(int n);
    bool finite() const;
};

}  // namespace penrose
