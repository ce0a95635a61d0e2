#pragma once
// Gauss-Legendre rules on [-1,1] and 2D subdomain-composite rules for
// integrating piecewise-smooth transition shape functions.

#include <vector>

#include "xny/basis.hpp"

namespace xny {

/// One-dimensional Gauss-Legendre rule.
struct QuadRule {
    std::vector<double> points;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (exact for polynomials of degree 2n-1).
QuadRule gauss_rule(int n);

/// Subdomain breakpoints for composite integration over [-1,1]^2.
/// Breaks always include the endpoints -1 and +1.
struct SubdomainGrid {
    std::vector<double> xi_breaks{-1.0, 1.0};
    std::vector<double> eta_breaks{-1.0, 1.0};
};

/// Quadrature point over the reference square.
struct QuadPoint2D {
    double xi, eta, w;
};

/// Tensor Gauss rule per grid cell, affinely mapped, weights scaled by
/// cell area / 4; concatenated over all cells.
std::vector<QuadPoint2D> composite_rule_2d(const SubdomainGrid& grid,
                                           int n_per_dir);

} // namespace xny
