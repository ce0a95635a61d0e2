#pragma once
// Transfinite (Boolean-sum) construction of transition-element shape
// functions: piecewise edge traces, corner/edge blending, tensor bubbles,
// and the closed-form 12-node fixtures used as test oracles.

#include <array>
#include <vector>

#include "xny/basis.hpp"
#include "xny/quadrature.hpp"

namespace xny {

/// One segment of a (possibly subdivided) element edge.
/// [lo,hi] is the sub-interval of the edge parameter t in [-1,1];
/// `reversed` marks that the canonical parameter of the underlying mesh
/// edge runs against ascending t (trace functions are always evaluated in
/// canonical parameter, which realizes hierarchic sign flips and Lagrange
/// node reordering automatically).
struct EdgeSegment {
    double lo = -1.0;
    double hi = 1.0;
    Basis1D basis;
    bool reversed = false;
};

/// Piecewise trace space on one element edge.
struct EdgeSpec {
    std::vector<EdgeSegment> segments;

    EdgeSpec() = default;
    explicit EdgeSpec(Basis1D b) { segments.push_back({-1.0, 1.0, b, false}); }

    void validate() const;
    /// Number of trace functions: sum(p_k + 1) - (n_segments - 1);
    /// junction functions across segment boundaries are merged.
    int n_functions() const;
    /// Evaluate trace function i (0-based, 0 and n-1 are the endpoint
    /// functions) at edge parameter t; derivative w.r.t. t.
    Eval1D trace(int i, double t) const;
    /// Interior breakpoints (segment boundaries), excluding +-1.
    std::vector<double> interior_breaks() const;
};

struct ShapeValue {
    double v = 0.0;
    double dxi = 0.0;
    double deta = 0.0;
};

/// Full 2D shape-function set of a (transition) quadrilateral element on
/// the reference square. Local ordering: corners 1..4, then the interior
/// trace functions of E1 (eta=-1), E2 (xi=+1), E3 (eta=+1), E4 (xi=-1),
/// then tensor bubbles.
class ShapeSet {
  public:
    /// edges: specs for E1..E4, each parameterized by its ascending local
    /// coordinate (E1,E3 by xi; E2,E4 by eta). interior: base 1D basis for
    /// the tensor bubble space (and the tensor fast path).
    ShapeSet(std::array<EdgeSpec, 4> edges, Basis1D interior,
             bool force_blended = false);

    int count() const { return n_total_; }
    int n_edge_interior(int k) const { return edges_[k].n_functions() - 2; }
    const EdgeSpec& edge(int k) const { return edges_[k]; }
    const Basis1D& interior() const { return interior_; }
    bool tensor_path() const { return tensor_; }

    /// Offset of the first interior trace function of edge k.
    int edge_offset(int k) const { return edge_offset_[k]; }
    int bubble_offset() const { return bubble_offset_; }

    ShapeValue eval(int k, double xi, double eta) const;
    std::vector<ShapeValue> eval_all(double xi, double eta) const;

    /// Subdomain breakpoints for composite quadrature (kinks of the
    /// piecewise traces).
    SubdomainGrid subdomain_grid() const;

  private:
    std::array<EdgeSpec, 4> edges_;
    Basis1D interior_;
    bool tensor_ = false;
    int n_total_ = 0;
    std::array<int, 4> edge_offset_{};
    int bubble_offset_ = 0;

    ShapeValue eval_tensor(int k, double xi, double eta) const;
    ShapeValue eval_blended(int k, double xi, double eta) const;
};

enum class FixtureVariant { LaLa, LaLe, LeLe };

/// Closed-form transcription of the 12 boundary shape functions of the
/// piecewise bi-quadratic 12-node/mode transition element (test oracle).
/// Returns values of N_1..N_12 at (xi, eta).
std::array<double, 12> twelve_node_fixture(FixtureVariant variant, double xi,
                                           double eta);

} // namespace xny
