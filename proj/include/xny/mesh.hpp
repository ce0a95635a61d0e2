#pragma once
// Quadrilateral mesh model: JSON load/save, (n_y, n_s) banded refinement of
// the y-region, uniform refinement, element classification and
// edge-coupling discovery.

#include <array>
#include <string>
#include <vector>

#include "xny/basis.hpp"

namespace xny {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Banded-refinement parameters.
struct RefineParams {
    int n_y = 2; ///< split count per direction and pass
    int n_s = 1; ///< number of successive passes
};

struct Mesh {
    std::vector<std::array<double, 2>> vertices;
    std::vector<std::array<int, 4>> quads; ///< CCW vertex ids
    std::vector<char> region;              ///< 'x' or 'y' per quad
    /// Filled by classify(): "X", "Y", "XNY" or "YNY".
    std::vector<std::string> element_class;

    double bbox_diag() const;
    void validate() const; ///< orientation, duplicate vertices
};

/// Parse the JSON mesh format {"vertices":[[x,y],..],"quads":[[..]],
/// "region":["x"|"y",..]}; throws MeshError with context on bad input.
Mesh load_mesh(const std::string& text);

/// Serialize in the same format (shortest round-trip float printing).
std::string save_mesh(const Mesh& mesh);

/// n_s passes; each pass splits every leaf y-element that shares an edge
/// (or part of one) with an x-region element into n_y x n_y children
/// (bilinear subdivision). Classification is refreshed afterwards.
Mesh refine_y_region(const Mesh& mesh, const RefineParams& params);

/// Split every quad into 4 via edge midpoints and centroid; tags inherited.
Mesh uniform_refine(const Mesh& mesh);

/// One segment of an element edge chain.
struct EdgeLink {
    int piece = -1;       ///< piece id
    double lo = -1.0;     ///< local edge parameter of segment start
    double hi = 1.0;      ///< local edge parameter of segment end
    int vstart = -1;      ///< vertex id at local parameter lo
    int vend = -1;        ///< vertex id at local parameter hi
    bool reversed = false; ///< canonical (ascending id) runs against local
};

/// Minimal (finest) mesh edge shared between elements.
struct EdgePiece {
    int va = -1, vb = -1; ///< canonical direction va -> vb, va < vb
    std::vector<std::pair<int, int>> direct_users; ///< (element, local edge)
    int usage = 0; ///< total chain references; 1 => boundary piece
};

/// Edge-coupling table: per element and local edge (E1..E4), the ordered
/// chain of pieces; local edge direction is the ascending reference
/// coordinate (E1: c0->c1, E2: c1->c2, E3: c3->c2, E4: c0->c3).
struct Couplings {
    std::vector<EdgePiece> pieces;
    std::vector<std::array<std::vector<EdgeLink>, 4>> elem_edges;
};

Couplings discover_couplings(const Mesh& mesh);

/// Fill mesh.element_class from region tags and edge subdivision.
void classify(Mesh& mesh);

/// Endpoint vertex ids (start, end) of local edge k in ascending-parameter
/// direction.
std::array<int, 2> edge_endpoints(const std::array<int, 4>& quad, int k);

} // namespace xny
