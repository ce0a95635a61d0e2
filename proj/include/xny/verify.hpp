#pragma once
// Verification harness primitives: built-in benchmark geometries, patch-test
// drivers (Dirichlet and traction versions), error norms and convergence
// rate fits.

#include "xny/analytic.hpp"
#include "xny/elasticity.hpp"

namespace xny {

/// Built-in geometry by name: "bathe-patch", "beam-quadratic", "beam-cubic",
/// "square-highorder", "hole-quadrant", "l-domain", "cantilever".
Mesh builtin_mesh(const std::string& name);

/// Boundary piece ids (usage == 1).
std::vector<int> boundary_pieces(const FeSpace& space);

/// Boundary pieces whose both endpoints satisfy the predicate.
std::vector<int>
pieces_where(const FeSpace& space,
             const std::function<bool(std::array<double, 2>)>& pred,
             bool boundary_only = true);

/// Scalar dof of the vertex closest to x (throws if farther than tol).
int vertex_dof_near(const FeSpace& space, std::array<double, 2> x,
                    double tol = 1e-9);

/// Per-component normalized displacement error: mean over a 5x5 reference
/// sample grid per element of |ref - num| / scale, where scale is the max
/// |ref| of that component over all samples (global max as fallback).
double displacement_error(const FeSpace& space, const Eigen::VectorXd& u,
                          const Field2D& ref);

/// Mean relative stress error over a 5x5 reference sample grid per element:
/// |ref - num| per Voigt component, normalized by the largest reference
/// stress magnitude over all samples.
double stress_error(const FeSpace& space, const Eigen::VectorXd& u,
                    const Field2D& ref, const Eigen::Matrix3d& D);

/// Relative L2 norm of the displacement error (composite Gauss, p+3).
double relative_l2_error(const FeSpace& space, const Eigen::VectorXd& u,
                         const Field2D& ref);

/// Energy-norm error sqrt((U_ref - U_num) / U_ref).
double energy_norm_error(double U_num, double U_ref);

/// Least-squares slope of log10(error) vs log10(n_dof); rows with
/// error < 1e-11 are excluded. Requires >= 2 usable rows.
double fit_rate(const std::vector<std::pair<double, double>>& dof_err);

struct SolveResult {
    Eigen::VectorXd u;
    int n_dof = 0;
    double energy = 0.0;
};

/// Dirichlet patch test: the exact field is prescribed on every boundary
/// piece and the interior is solved (no loads).
SolveResult solve_dirichlet_patch(const FeSpace& space, const Field2D& ref,
                                  const Material& mat, int quad_boost = 0,
                                  int n_threads = 1);

/// Traction patch test: consistent loads sigma.n on all boundary edges not
/// fully fixed, plus the given essential constraints.
SolveResult solve_traction_patch(const FeSpace& space, const Field2D& ref,
                                 const Material& mat,
                                 const std::map<int, double>& fixed,
                                 const std::vector<int>& loaded_pieces,
                                 int quad_boost = 0, int n_threads = 1);

/// Local edge (element, k) realizations of piece pid.
std::vector<std::pair<int, int>> piece_edge_users(const FeSpace& space,
                                                  int pid);

} // namespace xny
