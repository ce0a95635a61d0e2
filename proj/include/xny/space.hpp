#pragma once
// Finite-element space over a classified mesh: per-edge-piece governing
// basis, per-element shape sets built from the coupling chains, and the
// global scalar/vector DOF numbering (vertices, then edge-piece interior
// functions, then element bubbles).

#include <vector>

#include "xny/blending.hpp"
#include "xny/mesh.hpp"

namespace xny {

/// Bilinear geometry map of one quad.
struct GeomMap {
    std::array<std::array<double, 2>, 4> c; ///< corner coordinates, CCW

    std::array<double, 2> map(double xi, double eta) const;
    /// Row-major Jacobian [dx/dxi dx/deta; dy/dxi dy/deta] and its det.
    std::array<double, 4> jacobian(double xi, double eta) const;
};

struct SpaceParams {
    Basis1D basis_x; ///< family/order of the coarse (x) region
    Basis1D basis_y; ///< family/order of the refined (y) region
};

class FeSpace {
  public:
    FeSpace(const Mesh& mesh, SpaceParams params);

    const Mesh& mesh() const { return mesh_; }
    const Couplings& couplings() const { return coup_; }
    const SpaceParams& params() const { return params_; }

    int n_scalar() const { return n_scalar_; }
    int n_dof() const { return 2 * n_scalar_; }
    std::size_t n_elements() const { return mesh_.quads.size(); }

    const ShapeSet& shapes(std::size_t e) const { return shapes_[e]; }
    GeomMap geometry(std::size_t e) const;
    /// Scalar dof ids in element-local shape ordering.
    const std::vector<int>& element_dofs(std::size_t e) const {
        return elem_dofs_[e];
    }
    /// Vector dof: component comp in {0,1} of scalar dof s.
    static int vector_dof(int scalar_dof, int comp) {
        return 2 * scalar_dof + comp;
    }

    /// Governing 1D basis of edge piece pid (y-side basis wins on x/y
    /// interfaces).
    const Basis1D& piece_basis(int pid) const { return piece_basis_[pid]; }
    int piece_dof_start(int pid) const { return piece_start_[pid]; }
    /// First bubble scalar dof of element e.
    int bubble_dof_start(std::size_t e) const { return bubble_start_[e]; }

    /// Gauss points per direction for exact stiffness integration on e.
    int quad_order(std::size_t e) const;

  private:
    Mesh mesh_; ///< owned copy; keeps the space valid past the argument
    SpaceParams params_;
    Couplings coup_;
    std::vector<Basis1D> piece_basis_;
    std::vector<int> piece_start_;
    std::vector<int> bubble_start_;
    std::vector<ShapeSet> shapes_;
    std::vector<std::vector<int>> elem_dofs_;
    int n_scalar_ = 0;
};

} // namespace xny
