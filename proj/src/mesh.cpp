#include "xny/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <json.hpp>

namespace xny {

namespace {

struct VertexDedup {
    // Quantized coordinate lookup with neighbor-cell search so that points
    // equal within tol merge regardless of rounding cell.
    double tol;
    std::unordered_map<long long, std::vector<int>> cells;
    std::vector<std::array<double, 2>>* verts;

    VertexDedup(std::vector<std::array<double, 2>>* v, double t)
        : tol(t), verts(v) {
        for (std::size_t i = 0; i < v->size(); ++i)
            insert(static_cast<int>(i));
    }
    long long key(double x, double y) const {
        long long kx = static_cast<long long>(std::llround(x / tol));
        long long ky = static_cast<long long>(std::llround(y / tol));
        return kx * 73856093LL ^ ky * 19349663LL;
    }
    void insert(int id) {
        cells[key((*verts)[id][0], (*verts)[id][1])].push_back(id);
    }
    int get_or_add(double x, double y) {
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                auto it = cells.find(key(x + dx * tol, y + dy * tol));
                if (it == cells.end())
                    continue;
                for (int id : it->second) {
                    double ex = (*verts)[id][0] - x, ey = (*verts)[id][1] - y;
                    if (std::abs(ex) <= tol && std::abs(ey) <= tol)
                        return id;
                }
            }
        verts->push_back({x, y});
        int id = static_cast<int>(verts->size()) - 1;
        insert(id);
        return id;
    }
};

std::array<double, 2> bilerp(const std::array<std::array<double, 2>, 4>& c,
                             double s, double t) {
    std::array<double, 2> p;
    for (int d = 0; d < 2; ++d)
        p[d] = (1.0 - s) * (1.0 - t) * c[0][d] + s * (1.0 - t) * c[1][d] +
               s * t * c[2][d] + (1.0 - s) * t * c[3][d];
    return p;
}

} // namespace

double Mesh::bbox_diag() const {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& v : vertices) {
        xmin = std::min(xmin, v[0]);
        xmax = std::max(xmax, v[0]);
        ymin = std::min(ymin, v[1]);
        ymax = std::max(ymax, v[1]);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

void Mesh::validate() const {
    if (quads.size() != region.size())
        throw MeshError("mesh: region tag count does not match quad count");
    double diag = bbox_diag();
    // Orientation: bilinear Jacobian at the 2x2 Gauss points.
    const double g = 1.0 / std::sqrt(3.0);
    for (std::size_t e = 0; e < quads.size(); ++e) {
        std::array<std::array<double, 2>, 4> c;
        for (int i = 0; i < 4; ++i) {
            int v = quads[e][i];
            if (v < 0 || v >= static_cast<int>(vertices.size()))
                throw MeshError("mesh: quad " + std::to_string(e) +
                                " references invalid vertex");
            c[i] = vertices[v];
        }
        for (double xi : {-g, g})
            for (double eta : {-g, g}) {
                double dxdxi = 0.25 * ((1 - eta) * (c[1][0] - c[0][0]) +
                                       (1 + eta) * (c[2][0] - c[3][0]));
                double dydxi = 0.25 * ((1 - eta) * (c[1][1] - c[0][1]) +
                                       (1 + eta) * (c[2][1] - c[3][1]));
                double dxdeta = 0.25 * ((1 - xi) * (c[3][0] - c[0][0]) +
                                        (1 + xi) * (c[2][0] - c[1][0]));
                double dydeta = 0.25 * ((1 - xi) * (c[3][1] - c[0][1]) +
                                        (1 + xi) * (c[2][1] - c[1][1]));
                if (dxdxi * dydeta - dxdeta * dydxi <= 0.0)
                    throw MeshError("mesh: quad " + std::to_string(e) +
                                    " is not positively oriented");
            }
    }
    // Duplicate vertices.
    double tol = 1e-10 * diag;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (std::abs(vertices[i][0] - vertices[j][0]) < tol &&
                std::abs(vertices[i][1] - vertices[j][1]) < tol)
                throw MeshError("mesh: duplicate vertices " +
                                std::to_string(i) + " and " +
                                std::to_string(j));
}

Mesh load_mesh(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MeshError(std::string("mesh parse error: ") + e.what());
    }
    Mesh m;
    try {
        for (const auto& v : j.at("vertices"))
            m.vertices.push_back({v.at(0).get<double>(),
                                  v.at(1).get<double>()});
        for (const auto& q : j.at("quads"))
            m.quads.push_back({q.at(0).get<int>(), q.at(1).get<int>(),
                               q.at(2).get<int>(), q.at(3).get<int>()});
        for (const auto& r : j.at("region")) {
            std::string s = r.get<std::string>();
            if (s != "x" && s != "y")
                throw MeshError("mesh: region tag must be \"x\" or \"y\"");
            m.region.push_back(s[0]);
        }
    } catch (const nlohmann::json::exception& e) {
        throw MeshError(std::string("mesh format error: ") + e.what());
    }
    m.validate();
    classify(m);
    return m;
}

std::string save_mesh(const Mesh& mesh) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : mesh.vertices)
        j["vertices"].push_back({v[0], v[1]});
    j["quads"] = nlohmann::json::array();
    for (const auto& q : mesh.quads)
        j["quads"].push_back({q[0], q[1], q[2], q[3]});
    j["region"] = nlohmann::json::array();
    for (char r : mesh.region)
        j["region"].push_back(std::string(1, r));
    return j.dump();
}

std::array<int, 2> edge_endpoints(const std::array<int, 4>& q, int k) {
    switch (k) {
    case 0: return {q[0], q[1]}; // E1 (eta=-1), ascending xi
    case 1: return {q[1], q[2]}; // E2 (xi=+1), ascending eta
    case 2: return {q[3], q[2]}; // E3 (eta=+1), ascending xi
    default: return {q[0], q[3]}; // E4 (xi=-1), ascending eta
    }
}

namespace {

/// True when segment (p,q) lies on segment (a,b) (collinear sub-segment).
bool on_segment(const std::array<double, 2>& a, const std::array<double, 2>& b,
                const std::array<double, 2>& p, double tol, double* tpar) {
    double ex = b[0] - a[0], ey = b[1] - a[1];
    double len2 = ex * ex + ey * ey;
    double px = p[0] - a[0], py = p[1] - a[1];
    double cross = ex * py - ey * px;
    if (std::abs(cross) > tol * std::sqrt(len2))
        return false;
    double t = (px * ex + py * ey) / len2;
    if (tpar)
        *tpar = t;
    double slack = tol / std::sqrt(len2);
    return t > -slack && t < 1.0 + slack;
}

Mesh split_elements(const Mesh& mesh, const std::vector<char>& split, int n) {
    Mesh out;
    out.vertices = mesh.vertices;
    VertexDedup dedup(&out.vertices, 1e-9 * mesh.bbox_diag());
    for (std::size_t e = 0; e < mesh.quads.size(); ++e) {
        if (!split[e]) {
            out.quads.push_back(mesh.quads[e]);
            out.region.push_back(mesh.region[e]);
            continue;
        }
        std::array<std::array<double, 2>, 4> c;
        for (int i = 0; i < 4; ++i)
            c[i] = mesh.vertices[mesh.quads[e][i]];
        // (n+1)^2 grid of child vertices via the bilinear parent map.
        std::vector<int> grid((n + 1) * (n + 1));
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                auto p = bilerp(c, static_cast<double>(i) / n,
                                static_cast<double>(j) / n);
                grid[j * (n + 1) + i] = dedup.get_or_add(p[0], p[1]);
            }
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                out.quads.push_back({grid[j * (n + 1) + i],
                                     grid[j * (n + 1) + i + 1],
                                     grid[(j + 1) * (n + 1) + i + 1],
                                     grid[(j + 1) * (n + 1) + i]});
                out.region.push_back(mesh.region[e]);
            }
    }
    return out;
}

} // namespace

Mesh refine_y_region(const Mesh& mesh, const RefineParams& params) {
    if (params.n_y < 1 || params.n_y > 4 || params.n_s < 1 || params.n_s > 8)
        throw ArgumentError("refine_y_region: n_y in [1,4], n_s in [1,8]");
    Mesh cur = mesh;
    double tol = 1e-10 * mesh.bbox_diag();
    for (int pass = 0; pass < params.n_s && params.n_y > 1; ++pass) {
        // Collect x-element edges, then split every y-element one of whose
        // edges lies on an x-element edge (the current x/y interface).
        std::vector<std::array<std::array<double, 2>, 2>> xedges;
        for (std::size_t e = 0; e < cur.quads.size(); ++e) {
            if (cur.region[e] != 'x')
                continue;
            for (int k = 0; k < 4; ++k) {
                auto ep = edge_endpoints(cur.quads[e], k);
                xedges.push_back(
                    {cur.vertices[ep[0]], cur.vertices[ep[1]]});
            }
        }
        std::vector<char> split(cur.quads.size(), 0);
        bool any = false;
        for (std::size_t e = 0; e < cur.quads.size(); ++e) {
            if (cur.region[e] != 'y')
                continue;
            for (int k = 0; k < 4 && !split[e]; ++k) {
                auto ep = edge_endpoints(cur.quads[e], k);
                const auto& a = cur.vertices[ep[0]];
                const auto& b = cur.vertices[ep[1]];
                for (const auto& xe : xedges)
                    if (on_segment(xe[0], xe[1], a, tol, nullptr) &&
                        on_segment(xe[0], xe[1], b, tol, nullptr)) {
                        split[e] = 1;
                        any = true;
                        break;
                    }
            }
        }
        if (!any)
            throw MeshError("refine_y_region: no y-element adjacent to an "
                            "x-element");
        cur = split_elements(cur, split, params.n_y);
    }
    classify(cur);
    return cur;
}

Mesh uniform_refine(const Mesh& mesh) {
    std::vector<char> split(mesh.quads.size(), 1);
    Mesh out = split_elements(mesh, split, 2);
    classify(out);
    return out;
}

Couplings discover_couplings(const Mesh& mesh) {
    Couplings c;
    c.elem_edges.resize(mesh.quads.size());
    double tol = 1e-10 * mesh.bbox_diag();

    // All element-edge vertex pairs (for chain-link validation).
    std::map<std::pair<int, int>, int> pair_count;
    for (const auto& q : mesh.quads)
        for (int k = 0; k < 4; ++k) {
            auto ep = edge_endpoints(q, k);
            pair_count[{std::min(ep[0], ep[1]), std::max(ep[0], ep[1])}]++;
        }

    std::map<std::pair<int, int>, int> piece_id;
    auto get_piece = [&](int va, int vb) {
        std::pair<int, int> key{std::min(va, vb), std::max(va, vb)};
        auto it = piece_id.find(key);
        if (it != piece_id.end())
            return it->second;
        int id = static_cast<int>(c.pieces.size());
        piece_id[key] = id;
        EdgePiece p;
        p.va = key.first;
        p.vb = key.second;
        c.pieces.push_back(p);
        return id;
    };

    for (std::size_t e = 0; e < mesh.quads.size(); ++e) {
        for (int k = 0; k < 4; ++k) {
            auto ep = edge_endpoints(mesh.quads[e], k);
            const auto& a = mesh.vertices[ep[0]];
            const auto& b = mesh.vertices[ep[1]];
            // Interior vertices on this edge (hanging chain).
            std::vector<std::pair<double, int>> chain; // (param, vertex)
            double lox = std::min(a[0], b[0]) - tol,
                   hix = std::max(a[0], b[0]) + tol;
            double loy = std::min(a[1], b[1]) - tol,
                   hiy = std::max(a[1], b[1]) + tol;
            for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
                const auto& p = mesh.vertices[v];
                if (p[0] < lox || p[0] > hix || p[1] < loy || p[1] > hiy)
                    continue;
                if (static_cast<int>(v) == ep[0] ||
                    static_cast<int>(v) == ep[1])
                    continue;
                double t;
                if (on_segment(a, b, p, tol, &t) && t > 1e-9 && t < 1 - 1e-9)
                    chain.push_back({t, static_cast<int>(v)});
            }
            std::sort(chain.begin(), chain.end());
            chain.insert(chain.begin(), {0.0, ep[0]});
            chain.push_back({1.0, ep[1]});
            bool single = chain.size() == 2;
            for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
                int vs = chain[s].second, ve = chain[s + 1].second;
                if (!single &&
                    !pair_count.count(
                        {std::min(vs, ve), std::max(vs, ve)}))
                    throw MeshError(
                        "discover_couplings: T-junction mismatch on edge of "
                        "element " +
                        std::to_string(e));
                int pid = get_piece(vs, ve);
                EdgeLink link;
                link.piece = pid;
                link.lo = -1.0 + 2.0 * chain[s].first;
                link.hi = -1.0 + 2.0 * chain[s + 1].first;
                link.vstart = vs;
                link.vend = ve;
                link.reversed = (vs != c.pieces[pid].va);
                c.elem_edges[e][k].push_back(link);
                c.pieces[pid].usage++;
                if (single)
                    c.pieces[pid].direct_users.push_back(
                        {static_cast<int>(e), k});
            }
        }
    }
    return c;
}

void classify(Mesh& mesh) {
    Couplings c = discover_couplings(mesh);
    mesh.element_class.assign(mesh.quads.size(), "");
    for (std::size_t e = 0; e < mesh.quads.size(); ++e) {
        bool multi = false, touches_y = false;
        for (int k = 0; k < 4; ++k) {
            const auto& chain = c.elem_edges[e][k];
            if (chain.size() > 1)
                multi = true;
            for (const auto& link : chain)
                for (const auto& [oe, ok] :
                     c.pieces[link.piece].direct_users)
                    if (oe != static_cast<int>(e) &&
                        mesh.region[oe] == 'y')
                        touches_y = true;
        }
        if (mesh.region[e] == 'x')
            mesh.element_class[e] = (multi || touches_y) ? "XNY" : "X";
        else
            mesh.element_class[e] = multi ? "YNY" : "Y";
    }
}

} // namespace xny
