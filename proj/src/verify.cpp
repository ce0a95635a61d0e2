#include "xny/verify.hpp"

#include <cmath>

namespace xny {

namespace {

Mesh make_mesh(std::vector<std::array<double, 2>> verts,
               std::vector<std::array<int, 4>> quads,
               std::vector<char> region) {
    Mesh m;
    m.vertices = std::move(verts);
    m.quads = std::move(quads);
    m.region = std::move(region);
    m.validate();
    classify(m);
    return m;
}

/// Axis-aligned grid mesh on [x0,x1]x[y0,y1] with nx x ny cells.
void add_grid(std::vector<std::array<double, 2>>& verts,
              std::vector<std::array<int, 4>>& quads,
              std::vector<char>& region, double x0, double x1, double y0,
              double y1, int nx, int ny, char tag) {
    // Vertices are deduplicated later through Mesh merging; here we simply
    // append and rely on exact coordinate match.
    auto vid = [&](double x, double y) {
        for (std::size_t i = 0; i < verts.size(); ++i)
            if (verts[i][0] == x && verts[i][1] == y)
                return static_cast<int>(i);
        verts.push_back({x, y});
        return static_cast<int>(verts.size()) - 1;
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double xa = x0 + (x1 - x0) * i / nx;
            double xb = x0 + (x1 - x0) * (i + 1) / nx;
            double ya = y0 + (y1 - y0) * j / ny;
            double yb = y0 + (y1 - y0) * (j + 1) / ny;
            quads.push_back({vid(xa, ya), vid(xb, ya), vid(xb, yb),
                             vid(xa, yb)});
            region.push_back(tag);
        }
}

} // namespace

Mesh builtin_mesh(const std::string& name) {
    if (name == "bathe-patch") {
        // Five-element distorted patch; the interior quad is the y-element.
        return make_mesh(
            {{0, 0}, {10, 0}, {2, 2}, {8, 3}, {4, 7}, {8, 7}, {0, 10},
             {10, 10}},
            {{0, 1, 3, 2}, {1, 7, 5, 3}, {7, 6, 4, 5}, {6, 0, 2, 4},
             {2, 3, 5, 4}},
            {'x', 'x', 'x', 'x', 'y'});
    }
    if (name == "beam-quadratic") {
        // [0,10]x[0,2] cantilever strip, skew interface (4,0)-(6,2).
        return make_mesh({{0, 0}, {4, 0}, {10, 0}, {0, 2}, {6, 2}, {10, 2}},
                         {{0, 1, 4, 3}, {1, 2, 5, 4}}, {'x', 'y'});
    }
    if (name == "beam-cubic") {
        // [0,2]x[0,10] column, skew interface (0,4)-(2,6).
        return make_mesh({{0, 0}, {2, 0}, {0, 4}, {2, 6}, {0, 10}, {2, 10}},
                         {{0, 1, 3, 2}, {2, 3, 5, 4}}, {'x', 'y'});
    }
    if (name == "square-highorder") {
        // Unit square split at x = 0.5.
        return make_mesh(
            {{0, 0}, {0.5, 0}, {1, 0}, {0, 1}, {0.5, 1}, {1, 1}},
            {{0, 1, 4, 3}, {1, 2, 5, 4}}, {'x', 'y'});
    }
    if (name == "hole-quadrant") {
        // Strip [1,3]x[0,4] beside a unit circular hole at the origin.
        return make_mesh({{1, 0}, {3, 0}, {1, 2}, {3, 2}, {1, 4}, {3, 4}},
                         {{0, 1, 3, 2}, {2, 3, 5, 4}}, {'x', 'y'});
    }
    if (name == "l-domain") {
        // [0,40]^2 minus the upper-right quadrant; 12 squares of side 10.
        // The three squares touching the re-entrant point (20,20) form the
        // y-region, so banded refinement concentrates near the corner.
        std::vector<std::array<double, 2>> verts;
        std::vector<std::array<int, 4>> quads;
        std::vector<char> region;
        add_grid(verts, quads, region, 0, 40, 0, 20, 4, 2, 'x');
        add_grid(verts, quads, region, 0, 20, 20, 40, 2, 2, 'x');
        Mesh m;
        m.vertices = verts;
        m.quads = quads;
        m.region = region;
        for (std::size_t e = 0; e < m.quads.size(); ++e) {
            auto c = m.vertices[m.quads[e][0]];
            bool diag = c[0] == 10 && c[1] == 10;
            bool right = c[0] == 20 && c[1] == 10;
            bool top = c[0] == 10 && c[1] == 20;
            if (diag || right || top)
                m.region[e] = 'y';
        }
        m.validate();
        classify(m);
        return m;
    }
    if (name == "cantilever") {
        // [0,10]x[0,2] strip, 10x2 grid, interior vertices perturbed by a
        // seeded LCG (+-10% of cell size); the two clamped-corner elements
        // form the y-region.
        std::vector<std::array<double, 2>> verts;
        std::vector<std::array<int, 4>> quads;
        std::vector<char> region;
        add_grid(verts, quads, region, 0, 10, 0, 2, 10, 2, 'x');
        unsigned long long s = 20240915ULL;
        auto rnd = [&]() {
            s = s * 6364136223846793005ULL + 1442695040888963407ULL;
            return static_cast<double>((s >> 33) & 0xffffff) / 0xffffff *
                       2.0 -
                   1.0;
        };
        for (auto& v : verts) {
            bool interior = v[0] > 0 && v[0] < 10 && v[1] > 0 && v[1] < 2;
            double dx = rnd(), dy = rnd(); // always draw to keep the
                                           // sequence mesh-independent
            if (interior) {
                v[0] += 0.1 * dx;
                v[1] += 0.1 * dy;
            }
        }
        Mesh m;
        m.vertices = verts;
        m.quads = quads;
        m.region = region;
        for (std::size_t e = 0; e < m.quads.size(); ++e) {
            auto c = m.vertices[m.quads[e][0]];
            if (c[0] == 0) // clamped column carries the corner singularities
                m.region[e] = 'y';
        }
        m.validate();
        classify(m);
        return m;
    }
    throw ArgumentError("builtin_mesh: unknown geometry \"" + name + "\"");
}

std::vector<int> boundary_pieces(const FeSpace& space) {
    std::vector<int> out;
    const auto& pieces = space.couplings().pieces;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].usage == 1)
            out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int>
pieces_where(const FeSpace& space,
             const std::function<bool(std::array<double, 2>)>& pred,
             bool boundary_only) {
    std::vector<int> out;
    const auto& pieces = space.couplings().pieces;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (boundary_only && pieces[i].usage != 1)
            continue;
        if (pred(space.mesh().vertices[pieces[i].va]) &&
            pred(space.mesh().vertices[pieces[i].vb]))
            out.push_back(static_cast<int>(i));
    }
    return out;
}

int vertex_dof_near(const FeSpace& space, std::array<double, 2> x,
                    double tol) {
    double scale = space.mesh().bbox_diag();
    int best = -1;
    double bd = 1e300;
    for (std::size_t v = 0; v < space.mesh().vertices.size(); ++v) {
        const auto& p = space.mesh().vertices[v];
        double d = std::hypot(p[0] - x[0], p[1] - x[1]);
        if (d < bd) {
            bd = d;
            best = static_cast<int>(v);
        }
    }
    if (best < 0 || bd > tol * scale)
        throw ArgumentError("vertex_dof_near: no vertex at requested point");
    return best;
}

double displacement_error(const FeSpace& space, const Eigen::VectorXd& u,
                          const Field2D& ref) {
    std::vector<std::array<double, 2>> num, exact;
    for (std::size_t e = 0; e < space.n_elements(); ++e) {
        GeomMap geom = space.geometry(e);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                double xi = -1.0 + 0.5 * i, eta = -1.0 + 0.5 * j;
                num.push_back(eval_displacement(space, e, xi, eta, u));
                exact.push_back(ref.disp(geom.map(xi, eta)));
            }
    }
    double scale[2] = {0, 0}, gmax = 0;
    for (const auto& v : exact)
        for (int c = 0; c < 2; ++c) {
            scale[c] = std::max(scale[c], std::abs(v[c]));
            gmax = std::max(gmax, std::abs(v[c]));
        }
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < num.size(); ++i)
        for (int c = 0; c < 2; ++c) {
            double s = scale[c] > 1e-14 * gmax ? scale[c] : gmax;
            if (s == 0)
                s = 1;
            sum += std::abs(num[i][c] - exact[i][c]) / s;
            ++n;
        }
    return sum / static_cast<double>(n);
}

double stress_error(const FeSpace& space, const Eigen::VectorXd& u,
                    const Field2D& ref, const Eigen::Matrix3d& D) {
    double sum = 0, scale = 0;
    std::size_t n = 0;
    std::vector<double> diffs;
    for (std::size_t e = 0; e < space.n_elements(); ++e) {
        GeomMap geom = space.geometry(e);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                double xi = -1.0 + 0.5 * i, eta = -1.0 + 0.5 * j;
                auto num = eval_stress(space, e, xi, eta, D, u);
                auto ex = ref.stress(geom.map(xi, eta));
                for (int c = 0; c < 3; ++c) {
                    diffs.push_back(std::abs(num[c] - ex[c]));
                    scale = std::max(scale, std::abs(ex[c]));
                }
            }
    }
    for (double d : diffs) {
        sum += d;
        ++n;
    }
    return sum / static_cast<double>(n) / (scale > 0 ? scale : 1.0);
}

double relative_l2_error(const FeSpace& space, const Eigen::VectorXd& u,
                         const Field2D& ref) {
    double err2 = 0, ref2 = 0;
    for (std::size_t e = 0; e < space.n_elements(); ++e) {
        GeomMap geom = space.geometry(e);
        int nq = std::min(space.quad_order(e) + 3, 32);
        auto pts = composite_rule_2d(space.shapes(e).subdomain_grid(), nq);
        for (const auto& qp : pts) {
            auto J = geom.jacobian(qp.xi, qp.eta);
            double det = J[0] * J[3] - J[1] * J[2];
            auto nu_ = eval_displacement(space, e, qp.xi, qp.eta, u);
            auto ex = ref.disp(geom.map(qp.xi, qp.eta));
            double w = qp.w * det;
            for (int c = 0; c < 2; ++c) {
                err2 += w * (nu_[c] - ex[c]) * (nu_[c] - ex[c]);
                ref2 += w * ex[c] * ex[c];
            }
        }
    }
    return std::sqrt(err2 / (ref2 > 0 ? ref2 : 1.0));
}

double energy_norm_error(double U_num, double U_ref) {
    if (U_ref <= 0)
        throw ArgumentError("energy_norm_error: U_ref must be positive");
    double q = (U_ref - U_num) / U_ref;
    return std::sqrt(std::max(q, 0.0));
}

double fit_rate(const std::vector<std::pair<double, double>>& dof_err) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, e] : dof_err)
        if (e >= 1e-11)
            pts.push_back({std::log10(n), std::log10(e)});
    if (pts.size() < 2)
        throw NumericalError("fit_rate: fewer than 2 usable points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SolveResult solve_dirichlet_patch(const FeSpace& space, const Field2D& ref,
                                  const Material& mat, int quad_boost,
                                  int n_threads) {
    Eigen::Matrix3d D = material_matrix(mat);
    Eigen::SparseMatrix<double> K =
        assemble_stiffness(space, D, quad_boost, n_threads);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(space.n_dof());
    std::map<int, double> fixed;
    for (int pid : boundary_pieces(space))
        constrain_piece(space, pid, ref.disp, fixed);
    SolveResult res;
    res.u = solve_dirichlet(K, f, fixed);
    res.n_dof = space.n_dof();
    res.energy = strain_energy(K, res.u);
    return res;
}

std::vector<std::pair<int, int>> piece_edge_users(const FeSpace& space,
                                                  int pid) {
    return space.couplings().pieces[pid].direct_users;
}

SolveResult solve_traction_patch(const FeSpace& space, const Field2D& ref,
                                 const Material& mat,
                                 const std::map<int, double>& fixed,
                                 const std::vector<int>& loaded_pieces,
                                 int quad_boost, int n_threads) {
    Eigen::Matrix3d D = material_matrix(mat);
    Eigen::SparseMatrix<double> K =
        assemble_stiffness(space, D, quad_boost, n_threads);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(space.n_dof());
    TractionFn traction = [&ref](std::array<double, 2> x,
                                 std::array<double, 2> n) {
        auto s = ref.stress(x);
        return std::array<double, 2>{s[0] * n[0] + s[2] * n[1],
                                     s[2] * n[0] + s[1] * n[1]};
    };
    for (int pid : loaded_pieces) {
        auto users = piece_edge_users(space, pid);
        if (users.size() != 1)
            throw ArgumentError(
                "solve_traction_patch: piece is not a boundary edge");
        add_edge_traction(space, users[0].first, users[0].second, traction,
                          f);
    }
    SolveResult res;
    res.u = solve_dirichlet(K, f, fixed);
    res.n_dof = space.n_dof();
    res.energy = strain_energy(K, res.u);
    return res;
}

} // namespace xny
