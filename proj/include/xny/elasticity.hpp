#pragma once
// Plane-stress/plane-strain elasticity on an FeSpace: element stiffness via
// composite Gauss quadrature, sparse assembly, Dirichlet elimination,
// consistent edge tractions and post-processing (displacement/stress/energy).

#include <functional>
#include <map>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "xny/space.hpp"

namespace xny {

struct Material {
    double E = 70e9;
    double nu = 0.3;
    bool plane_strain = false;
};

/// 3x3 constitutive matrix in Voigt order (sigma_x, sigma_y, tau_xy).
Eigen::Matrix3d material_matrix(const Material& mat);

/// Element stiffness, interleaved local dofs (shape i, comp c) -> 2i+c.
/// quad_boost adds Gauss points per direction beyond the default p+1.
Eigen::MatrixXd element_stiffness(const FeSpace& space, std::size_t e,
                                  const Eigen::Matrix3d& D,
                                  int quad_boost = 0);

Eigen::SparseMatrix<double> assemble_stiffness(const FeSpace& space,
                                               const Eigen::Matrix3d& D,
                                               int quad_boost = 0,
                                               int n_threads = 1);

/// Traction callback: physical point, outward unit normal -> (t_x, t_y).
using TractionFn = std::function<std::array<double, 2>(
    std::array<double, 2>, std::array<double, 2>)>;

/// Displacement field callback: physical point -> (u_x, u_y).
using FieldFn =
    std::function<std::array<double, 2>(std::array<double, 2>)>;

/// Accumulate the consistent load of a traction on local edge k of
/// element e into the global vector f.
void add_edge_traction(const FeSpace& space, std::size_t e, int k,
                       const TractionFn& traction, Eigen::VectorXd& f);

/// Prescribe field values on boundary piece pid (vertices + interior
/// trace dofs; nodal interpolation for the spectral family, vertex-lifted
/// L2 projection for the hierarchic family). comp_mask selects components.
void constrain_piece(const FeSpace& space, int pid, const FieldFn& field,
                     std::map<int, double>& fixed,
                     std::array<bool, 2> comp_mask = {true, true});

/// Solve K u = f with the given vector dofs eliminated at prescribed
/// values; returns the full displacement vector. Throws NumericalError if
/// the factorization fails or the reduced relative residual exceeds 1e-6.
Eigen::VectorXd solve_dirichlet(const Eigen::SparseMatrix<double>& K,
                                const Eigen::VectorXd& f,
                                const std::map<int, double>& fixed);

/// Overload that may free K once the reduced system has been built; use it
/// when K is not needed afterwards (halves the peak memory on big meshes).
Eigen::VectorXd solve_dirichlet(Eigen::SparseMatrix<double>&& K,
                                const Eigen::VectorXd& f,
                                const std::map<int, double>& fixed);

/// Displacement (u_x, u_y) at reference point (xi, eta) of element e.
std::array<double, 2> eval_displacement(const FeSpace& space, std::size_t e,
                                        double xi, double eta,
                                        const Eigen::VectorXd& u);

/// Stress (sigma_x, sigma_y, tau_xy) at reference point of element e.
std::array<double, 3> eval_stress(const FeSpace& space, std::size_t e,
                                  double xi, double eta,
                                  const Eigen::Matrix3d& D,
                                  const Eigen::VectorXd& u);

/// Strain energy u^T K u / 2.
double strain_energy(const Eigen::SparseMatrix<double>& K,
                     const Eigen::VectorXd& u);

} // namespace xny
