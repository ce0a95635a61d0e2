#include "xny/space.hpp"

#include <algorithm>

namespace xny {

std::array<double, 2> GeomMap::map(double xi, double eta) const {
    std::array<double, 2> p;
    double n0 = 0.25 * (1 - xi) * (1 - eta), n1 = 0.25 * (1 + xi) * (1 - eta);
    double n2 = 0.25 * (1 + xi) * (1 + eta), n3 = 0.25 * (1 - xi) * (1 + eta);
    for (int d = 0; d < 2; ++d)
        p[d] = n0 * c[0][d] + n1 * c[1][d] + n2 * c[2][d] + n3 * c[3][d];
    return p;
}

std::array<double, 4> GeomMap::jacobian(double xi, double eta) const {
    std::array<double, 4> j;
    j[0] = 0.25 * ((1 - eta) * (c[1][0] - c[0][0]) +
                   (1 + eta) * (c[2][0] - c[3][0])); // dx/dxi
    j[1] = 0.25 * ((1 - xi) * (c[3][0] - c[0][0]) +
                   (1 + xi) * (c[2][0] - c[1][0])); // dx/deta
    j[2] = 0.25 * ((1 - eta) * (c[1][1] - c[0][1]) +
                   (1 + eta) * (c[2][1] - c[3][1])); // dy/dxi
    j[3] = 0.25 * ((1 - xi) * (c[3][1] - c[0][1]) +
                   (1 + xi) * (c[2][1] - c[1][1])); // dy/deta
    return j;
}

FeSpace::FeSpace(const Mesh& mesh, SpaceParams params)
    : mesh_(mesh), params_(params) {
    if (mesh.element_class.size() != mesh.quads.size())
        throw ArgumentError("FeSpace: mesh has not been classified");
    coup_ = discover_couplings(mesh);

    // Governing basis per edge piece: the y-side basis on x/y interfaces
    // (the finer/possibly different family dictates the trace space there),
    // otherwise the basis of the region owning the piece.
    piece_basis_.reserve(coup_.pieces.size());
    for (const auto& piece : coup_.pieces) {
        bool any_y = false;
        for (const auto& [e, k] : piece.direct_users)
            if (mesh.region[e] == 'y')
                any_y = true;
        piece_basis_.push_back(any_y ? params_.basis_y : params_.basis_x);
    }

    // Scalar dof layout: vertices, then per-piece interior dofs, then
    // per-element bubbles.
    int next = static_cast<int>(mesh.vertices.size());
    piece_start_.resize(coup_.pieces.size());
    for (std::size_t pid = 0; pid < coup_.pieces.size(); ++pid) {
        piece_start_[pid] = next;
        next += piece_basis_[pid].order() - 1;
    }
    bubble_start_.resize(mesh.quads.size());
    shapes_.reserve(mesh.quads.size());
    elem_dofs_.resize(mesh.quads.size());
    for (std::size_t e = 0; e < mesh.quads.size(); ++e) {
        const Basis1D& interior =
            mesh.region[e] == 'x' ? params_.basis_x : params_.basis_y;
        std::array<EdgeSpec, 4> edges;
        for (int k = 0; k < 4; ++k)
            for (const auto& link : coup_.elem_edges[e][k])
                edges[k].segments.push_back({link.lo, link.hi,
                                             piece_basis_[link.piece],
                                             link.reversed});
        shapes_.emplace_back(edges, interior);
        bubble_start_[e] = next;
        next += (interior.order() - 1) * (interior.order() - 1);

        // Element dof list in local shape ordering: corners, E1..E4
        // interior trace functions (piece dofs in local positional order,
        // with junction vertices between chain links), then bubbles.
        auto& dofs = elem_dofs_[e];
        const ShapeSet& ss = shapes_[e];
        dofs.reserve(ss.count());
        for (int i = 0; i < 4; ++i)
            dofs.push_back(mesh.quads[e][i]);
        for (int k = 0; k < 4; ++k) {
            const auto& chain = coup_.elem_edges[e][k];
            for (std::size_t s = 0; s < chain.size(); ++s) {
                const auto& link = chain[s];
                int p = piece_basis_[link.piece].order();
                for (int q = 1; q < p; ++q) {
                    int b = link.reversed ? p - q : q; // canonical index
                    dofs.push_back(piece_dof_start(link.piece) + b - 1);
                }
                if (s + 1 < chain.size())
                    dofs.push_back(link.vend); // junction vertex
            }
        }
        for (int m = 0; m < (interior.order() - 1) * (interior.order() - 1); ++m)
            dofs.push_back(bubble_start_[e] + m);
        if (static_cast<int>(dofs.size()) != ss.count())
            throw NumericalError("FeSpace: dof list / shape count mismatch");
    }
    n_scalar_ = next;
}

GeomMap FeSpace::geometry(std::size_t e) const {
    GeomMap g;
    for (int i = 0; i < 4; ++i)
        g.c[i] = mesh_.vertices[mesh_.quads[e][i]];
    return g;
}

int FeSpace::quad_order(std::size_t e) const {
    int p = shapes_[e].interior().order();
    for (int k = 0; k < 4; ++k)
        for (const auto& seg : shapes_[e].edge(k).segments)
            p = std::max(p, seg.basis.order());
    return std::min(p + 1, 32);
}

} // namespace xny
