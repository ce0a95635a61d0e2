#pragma once
// Closed-form reference solutions: equilibrium-admissible polynomial
// displacement fields of arbitrary order, two cantilever bending solutions,
// and the circular-hole (Kirsch) field. All plane stress.

#include <functional>

#include <Eigen/Dense>

#include "xny/basis.hpp"

namespace xny {

/// Generic analytic reference field.
struct Field2D {
    std::function<std::array<double, 2>(std::array<double, 2>)> disp;
    /// (sigma_x, sigma_y, tau_xy)
    std::function<std::array<double, 3>(std::array<double, 2>)> stress;
};

/// Complete polynomial displacement field of the given degree satisfying
/// div(sigma) = 0 in plane stress. Coefficients of the non-mixed monomials
/// (Pascal ordering, 1-based) are prescribed as a_i = b_i = i; the mixed
/// ones are solved from the equilibrium conditions.
struct PolyField {
    int degree = 1;
    double nu = 0.3;
    double E = 1.0;
    std::vector<std::array<int, 2>> expo; ///< monomial exponents, Pascal order
    Eigen::VectorXd a, b;                 ///< u_x / u_y coefficients (0-based)

    std::array<double, 2> disp(std::array<double, 2> x) const;
    std::array<double, 3> stress(std::array<double, 2> x) const;
    Field2D field() const;
};

PolyField admissible_poly_field(int degree, double nu, double E = 1.0);

/// Max |div(sigma)| over the given points, evaluated with fourth-order
/// central differences of the stress closure and normalized by the largest
/// stress magnitude encountered.
double divergence_residual(const Field2D& f,
                           const std::vector<std::array<double, 2>>& points,
                           double h);

/// Pure-bending cantilever (quadratic exact field) on [0,10]x[0,2]:
/// sigma_x = 240 y/c - 120 with c = 2, other stresses zero.
Field2D beam_quadratic_field(double E, double nu, double c = 2.0);

/// Shear-loaded cantilever (cubic exact field) on [0,c]x[0,L],
/// c = 2, L = 10.
Field2D beam_cubic_field(double E, double nu, double c = 2.0,
                         double L = 10.0);

/// Infinite plate with a circular hole of radius a under remote uni-axial
/// tension sigma0 in x (Kirsch), plane stress.
Field2D hole_field(double E, double nu, double sigma0, double a);

} // namespace xny
