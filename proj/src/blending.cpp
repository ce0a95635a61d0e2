#include "xny/blending.hpp"

#include <algorithm>
#include <cmath>

namespace xny {

namespace {
// Linear blending functions.
inline double a1(double t) { return 0.5 * (1.0 - t); }
inline double a2(double t) { return 0.5 * (1.0 + t); }
constexpr double da1 = -0.5;
constexpr double da2 = 0.5;
} // namespace

void EdgeSpec::validate() const {
    if (segments.empty())
        throw ArgumentError("EdgeSpec: no segments");
    if (std::abs(segments.front().lo + 1.0) > 1e-12 ||
        std::abs(segments.back().hi - 1.0) > 1e-12)
        throw ArgumentError("EdgeSpec: segments must cover [-1,1]");
    for (std::size_t k = 0; k < segments.size(); ++k) {
        if (!(segments[k].lo < segments[k].hi - 1e-12))
            throw ArgumentError("EdgeSpec: degenerate segment");
        if (k > 0 && std::abs(segments[k].lo - segments[k - 1].hi) > 1e-12)
            throw ArgumentError("EdgeSpec: gap/overlap between segments");
    }
}

int EdgeSpec::n_functions() const {
    int n = 1 - static_cast<int>(segments.size());
    for (const auto& s : segments)
        n += s.basis.order() + 1;
    return n;
}

Eval1D EdgeSpec::trace(int i, double t) const {
    if (i < 0 || i >= n_functions())
        throw ArgumentError("EdgeSpec::trace: index out of range");
    // Locate the segment containing t.
    std::size_t k = 0;
    while (k + 1 < segments.size() && t > segments[k].hi)
        ++k;
    const EdgeSegment& s = segments[k];
    // Global positional offset of this segment's left endpoint function.
    int off = 0;
    for (std::size_t j = 0; j < k; ++j)
        off += segments[j].basis.order();
    int q = i - off; // positional index within the segment
    int p = s.basis.order();
    if (q < 0 || q > p)
        return {0.0, 0.0}; // function not supported on this segment
    // Map to the segment's canonical parameter.
    double scale = 2.0 / (s.hi - s.lo);
    double u = (2.0 * t - s.lo - s.hi) / (s.hi - s.lo);
    double dudt = scale;
    int b = q;
    if (s.reversed) {
        u = -u;
        dudt = -scale;
        b = p - q;
    }
    Eval1D e = s.basis.eval(b, u);
    return {e.v, e.d * dudt};
}

std::vector<double> EdgeSpec::interior_breaks() const {
    std::vector<double> br;
    for (std::size_t k = 0; k + 1 < segments.size(); ++k)
        br.push_back(segments[k].hi);
    return br;
}

ShapeSet::ShapeSet(std::array<EdgeSpec, 4> edges, Basis1D interior,
                   bool force_blended)
    : edges_(std::move(edges)), interior_(interior) {
    for (const auto& e : edges_)
        e.validate();
    tensor_ = !force_blended;
    for (const auto& e : edges_)
        if (e.segments.size() != 1 || !(e.segments[0].basis == interior_))
            tensor_ = false;
    int off = 4;
    for (int k = 0; k < 4; ++k) {
        edge_offset_[k] = off;
        off += n_edge_interior(k);
    }
    bubble_offset_ = off;
    int pi = interior_.order();
    n_total_ = off + (pi - 1) * (pi - 1);
}

ShapeValue ShapeSet::eval(int k, double xi, double eta) const {
    if (k < 0 || k >= n_total_)
        throw ArgumentError("ShapeSet::eval: index out of range");
    return tensor_ ? eval_tensor(k, xi, eta) : eval_blended(k, xi, eta);
}

std::vector<ShapeValue> ShapeSet::eval_all(double xi, double eta) const {
    std::vector<ShapeValue> out(n_total_);
    for (int k = 0; k < n_total_; ++k)
        out[k] = eval(k, xi, eta);
    return out;
}

ShapeValue ShapeSet::eval_tensor(int k, double xi, double eta) const {
    const int p = interior_.order();
    // 1D factor along an edge direction, evaluated in canonical parameter
    // of that edge (positional slot q -> basis index p-q with flipped
    // argument when the edge is reversed).
    auto edge_factor = [&](int edge, int q, double t) -> Eval1D {
        bool rev = edges_[edge].segments[0].reversed;
        int b = rev ? p - q : q;
        Eval1D e = interior_.eval(b, rev ? -t : t);
        if (rev)
            e.d = -e.d;
        return e;
    };
    auto plain = [&](int b, double t) { return interior_.eval(b, t); };

    if (k < 4) {
        // Corner functions: endpoint x endpoint (orientation-independent).
        static const int ci[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        int a = ci[k][0] == 0 ? 0 : p;
        int b = ci[k][1] == 0 ? 0 : p;
        Eval1D fx = plain(a, xi), fy = plain(b, eta);
        return {fx.v * fy.v, fx.d * fy.v, fx.v * fy.d};
    }
    if (k < bubble_offset_) {
        int edge = 0;
        while (edge < 3 && k >= edge_offset_[edge + 1])
            ++edge;
        int q = k - edge_offset_[edge] + 1; // positional slot 1..p-1
        Eval1D along, across;
        double av, ad;
        switch (edge) {
        case 0: // E1, eta = -1
            along = edge_factor(0, q, xi);
            across = plain(0, eta);
            return {along.v * across.v, along.d * across.v,
                    along.v * across.d};
        case 1: // E2, xi = +1
            along = edge_factor(1, q, eta);
            across = plain(p, xi);
            return {along.v * across.v, along.v * across.d,
                    along.d * across.v};
        case 2: // E3, eta = +1
            along = edge_factor(2, q, xi);
            across = plain(p, eta);
            return {along.v * across.v, along.d * across.v,
                    along.v * across.d};
        default: // E4, xi = -1
            along = edge_factor(3, q, eta);
            across = plain(0, xi);
            av = across.v;
            ad = across.d;
            return {along.v * av, along.v * ad, along.d * av};
        }
    }
    int m = k - bubble_offset_;
    int ni = p - 1;
    int i = m / ni + 1, j = m % ni + 1;
    Eval1D fx = plain(i, xi), fy = plain(j, eta);
    return {fx.v * fy.v, fx.d * fy.v, fx.v * fy.d};
}

ShapeValue ShapeSet::eval_blended(int k, double xi, double eta) const {
    const int n1 = edges_[0].n_functions();
    const int n2 = edges_[1].n_functions();
    const int n3 = edges_[2].n_functions();
    const int n4 = edges_[3].n_functions();

    if (k < 4) {
        // Boolean sum of the two incident edge endpoint traces minus the
        // bilinear correction.
        Eval1D t;
        double bv, bd_xi, bd_eta;
        switch (k) {
        case 0: { // corner (-1,-1): traces on E1 (index 0) and E4 (index 0)
            Eval1D e1 = edges_[0].trace(0, xi);
            Eval1D e4 = edges_[3].trace(0, eta);
            bv = a1(xi) * a1(eta);
            bd_xi = da1 * a1(eta);
            bd_eta = a1(xi) * da1;
            return {a1(eta) * e1.v + a1(xi) * e4.v - bv,
                    a1(eta) * e1.d + da1 * e4.v - bd_xi,
                    da1 * e1.v + a1(xi) * e4.d - bd_eta};
        }
        case 1: { // corner (+1,-1): E1 last, E2 first
            Eval1D e1 = edges_[0].trace(n1 - 1, xi);
            Eval1D e2 = edges_[1].trace(0, eta);
            bv = a2(xi) * a1(eta);
            return {a1(eta) * e1.v + a2(xi) * e2.v - bv,
                    a1(eta) * e1.d + da2 * e2.v - da2 * a1(eta),
                    da1 * e1.v + a2(xi) * e2.d - a2(xi) * da1};
        }
        case 2: { // corner (+1,+1): E2 last, E3 last
            Eval1D e2 = edges_[1].trace(n2 - 1, eta);
            Eval1D e3 = edges_[2].trace(n3 - 1, xi);
            bv = a2(xi) * a2(eta);
            return {a2(xi) * e2.v + a2(eta) * e3.v - bv,
                    da2 * e2.v + a2(eta) * e3.d - da2 * a2(eta),
                    a2(xi) * e2.d + da2 * e3.v - a2(xi) * da2};
        }
        default: { // corner (-1,+1): E3 first, E4 last
            Eval1D e3 = edges_[2].trace(0, xi);
            Eval1D e4 = edges_[3].trace(n4 - 1, eta);
            bv = a1(xi) * a2(eta);
            (void)t;
            return {a2(eta) * e3.v + a1(xi) * e4.v - bv,
                    a2(eta) * e3.d + da1 * e4.v - da1 * a2(eta),
                    da2 * e3.v + a1(xi) * e4.d - a1(xi) * da2};
        }
        }
    }
    if (k < bubble_offset_) {
        int edge = 0;
        while (edge < 3 && k >= edge_offset_[edge + 1])
            ++edge;
        int j = k - edge_offset_[edge] + 1; // trace index 1..nE-2
        switch (edge) {
        case 0: { // E1: A1(eta) * trace(xi)
            Eval1D e = edges_[0].trace(j, xi);
            return {a1(eta) * e.v, a1(eta) * e.d, da1 * e.v};
        }
        case 1: { // E2: A2(xi) * trace(eta)
            Eval1D e = edges_[1].trace(j, eta);
            return {a2(xi) * e.v, da2 * e.v, a2(xi) * e.d};
        }
        case 2: { // E3: A2(eta) * trace(xi)
            Eval1D e = edges_[2].trace(j, xi);
            return {a2(eta) * e.v, a2(eta) * e.d, da2 * e.v};
        }
        default: { // E4: A1(xi) * trace(eta)
            Eval1D e = edges_[3].trace(j, eta);
            return {a1(xi) * e.v, da1 * e.v, a1(xi) * e.d};
        }
        }
    }
    int m = k - bubble_offset_;
    int p = interior_.order();
    int ni = p - 1;
    int i = m / ni + 1, j = m % ni + 1;
    Eval1D fx = interior_.eval(i, xi), fy = interior_.eval(j, eta);
    return {fx.v * fy.v, fx.d * fy.v, fx.v * fy.d};
}

SubdomainGrid ShapeSet::subdomain_grid() const {
    SubdomainGrid g;
    auto merge = [](std::vector<double>& dst, const std::vector<double>& add) {
        for (double b : add) {
            bool found = false;
            for (double x : dst)
                if (std::abs(x - b) < 1e-12)
                    found = true;
            if (!found)
                dst.push_back(b);
        }
        std::sort(dst.begin(), dst.end());
    };
    merge(g.xi_breaks, edges_[0].interior_breaks());
    merge(g.xi_breaks, edges_[2].interior_breaks());
    merge(g.eta_breaks, edges_[1].interior_breaks());
    merge(g.eta_breaks, edges_[3].interior_breaks());
    return g;
}

std::array<double, 12> twelve_node_fixture(FixtureVariant variant, double xi,
                                           double eta) {
    // Direct transcription of the appendix closed forms. "Fine" family
    // lives on the subdivided edges E1/E2, "coarse" on E3/E4.
    auto la = [](int i, double t) { // 1D quadratic Lagrange, i = 1..3
        if (i == 1)
            return 0.5 * (t * t - t);
        if (i == 2)
            return 1.0 - t * t;
        return 0.5 * (t * t + t);
    };
    auto le = [](int i, double t) { // 1D quadratic hierarchic, i = 1..3
        if (i == 1)
            return 0.5 * (1.0 - t);
        if (i == 2)
            return 0.25 * std::sqrt(6.0) * (t * t - 1.0);
        return 0.5 * (1.0 + t);
    };
    bool fine_le = variant != FixtureVariant::LaLa;
    bool coarse_le = variant == FixtureVariant::LeLe;
    auto fine = [&](int i, double t) { return fine_le ? le(i, t) : la(i, t); };
    auto coarse = [&](int i, double t) {
        return coarse_le ? le(i, t) : la(i, t);
    };
    // Piecewise traces on the subdivided edges, extended by zero.
    double x1 = 2.0 * xi + 1.0, x2 = 2.0 * xi - 1.0; // xi-check coordinates
    double y1 = 2.0 * eta + 1.0, y2 = 2.0 * eta - 1.0;
    bool xl = xi <= 0.0, yl = eta <= 0.0;
    auto e1 = [&](int i) { // E1 trace i=1..5 at xi
        switch (i) {
        case 1: return xl ? fine(1, x1) : 0.0;
        case 2: return xl ? fine(2, x1) : 0.0;
        case 3: return xl ? fine(3, x1) : fine(1, x2);
        case 4: return xl ? 0.0 : fine(2, x2);
        default: return xl ? 0.0 : fine(3, x2);
        }
    };
    auto e2 = [&](int i) { // E2 trace i=1..5 at eta
        switch (i) {
        case 1: return yl ? fine(1, y1) : 0.0;
        case 2: return yl ? fine(2, y1) : 0.0;
        case 3: return yl ? fine(3, y1) : fine(1, y2);
        case 4: return yl ? 0.0 : fine(2, y2);
        default: return yl ? 0.0 : fine(3, y2);
        }
    };
    std::array<double, 12> n{};
    // Corner vertices (Boolean sums).
    n[0] = a1(xi) * coarse(1, eta) + a1(eta) * e1(1) - a1(xi) * a1(eta);
    n[1] = a2(xi) * e2(1) + a1(eta) * e1(5) - a2(xi) * a1(eta);
    n[2] = a2(xi) * e2(5) + a2(eta) * coarse(3, xi) - a2(xi) * a2(eta);
    n[3] = a1(xi) * coarse(3, eta) + a2(eta) * coarse(1, xi) -
           a1(xi) * a2(eta);
    // Edge functions.
    n[4] = a1(eta) * e1(2);
    n[5] = a1(eta) * e1(3);
    n[6] = a1(eta) * e1(4);
    n[7] = a2(xi) * e2(2);
    n[8] = a2(xi) * e2(3);
    n[9] = a2(xi) * e2(4);
    n[10] = a2(eta) * coarse(2, xi);
    n[11] = a1(xi) * coarse(2, eta);
    return n;
}

} // namespace xny
