#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "penrose/graph.hpp"

namespace penrose {

struct StencilError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// div_M(G(A)X) at `point` by centered differences of the coordinate field
/// Y^i = (G(A)X)^i: div = W^{-1} sum_i d_i(W Y^i), using sqrt(det g) = W.
/// richardson > 0 applies that many levels of h-halving extrapolation.
double divergence_fd(const GraphSurface& graph, const Eigen::VectorXd& point, double h,
                     int richardson = 0);

/// |div_M(G(A)X) - 2 S_2 Theta| at `point`; O(h^2) for exact identities.
double divergence_residual(const GraphSurface& graph, const Eigen::VectorXd& point, double h);

struct FluxRecord {
    double r = 0.0;
    double normalized_flux = 0.0;  // c_n * boundary integral, mass units
    int quad_order = 0;
};

/// c_n * integral over {|x| = r} in M of <G(A)X, nu> with the outward unit
/// co-normal and area element of the induced metric. Reduces to
/// c_n * int (GX . omega) W r^{n-1} dsigma(omega) over the unit sphere.
FluxRecord normalized_boundary_flux(const GraphSurface& graph, double r, int quad_order = 0);

/// Closed-form horizon flux for a round horizon of radius r_m: (1/2) r_m^{n-2}.
double horizon_flux(double r_m, int n);

/// normalized_flux(r2) - normalized_flux(r1); for scalar-flat graphs ~ 0,
/// otherwise equals the annulus integral c_n int 2 S_2 Theta dM.
double flux_balance(const GraphSurface& graph, double r1, double r2, int quad_order = 0);

void write_flux_records_csv(const std::vector<FluxRecord>& records, std::ostream& os);

}  // namespace penrose
