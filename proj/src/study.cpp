#include "xny/study.hpp"

#include <chrono>
#include <cmath>

namespace xny {

std::pair<FamilyKind, FamilyKind> parse_pairing(const std::string& s) {
    auto one = [](const std::string& t) {
        if (t == "la")
            return FamilyKind::LagrangeSpectral;
        if (t == "le")
            return FamilyKind::HierarchicLegendre;
        throw ConfigError("unknown family \"" + t + "\"");
    };
    auto dash = s.find('-');
    if (dash == std::string::npos)
        throw ConfigError("pairing must look like \"la-le\"");
    return {one(s.substr(0, dash)), one(s.substr(dash + 1))};
}

NodeDistribution parse_dist(const std::string& s) {
    if (s == "gll")
        return NodeDistribution::GLL;
    if (s == "glc")
        return NodeDistribution::GLC;
    throw ConfigError("unknown node distribution \"" + s + "\"");
}

FeSpace make_space(const Mesh& mesh, const std::string& pairing,
                   const std::string& dist, int p_x, int p_y) {
    auto [fx, fy] = parse_pairing(pairing);
    NodeDistribution nd = parse_dist(dist);
    SpaceParams sp{make_basis(fx, p_x, nd), make_basis(fy, p_y, nd)};
    return FeSpace(mesh, sp);
}

Field2D constant_stress_field(int state, double E, double nu) {
    // state 0: sigma_x = 1; 1: sigma_y = 1; 2: tau_xy = 1.
    if (state == 0)
        return {[E, nu](std::array<double, 2> p) {
                    return std::array<double, 2>{p[0] / E, -nu * p[1] / E};
                },
                [](std::array<double, 2>) {
                    return std::array<double, 3>{1, 0, 0};
                }};
    if (state == 1)
        return {[E, nu](std::array<double, 2> p) {
                    return std::array<double, 2>{-nu * p[0] / E, p[1] / E};
                },
                [](std::array<double, 2>) {
                    return std::array<double, 3>{0, 1, 0};
                }};
    return {[E, nu](std::array<double, 2> p) {
                return std::array<double, 2>{2.0 * (1.0 + nu) * p[1] / E,
                                             0.0};
            },
            [](std::array<double, 2>) {
                return std::array<double, 3>{0, 0, 1};
            }};
}

namespace {

Mesh refined_builtin(const std::string& name, int level, int n_y, int n_s) {
    Mesh m = builtin_mesh(name);
    for (int l = 0; l < level; ++l)
        m = uniform_refine(m);
    if (n_y > 1 && n_s > 0)
        m = refine_y_region(m, {n_y, n_s});
    return m;
}

/// Worst mean relative stress error over the three constant-stress states
/// of the traction-driven linear patch test on the distorted 5-element
/// patch.
double linear_patch_error(const Mesh& mesh, const std::string& pairing,
                          const std::string& dist, int p,
                          const StudyConfig& cfg, int* n_dof) {
    FeSpace space = make_space(mesh, pairing, dist, p, p);
    if (n_dof)
        *n_dof = space.n_dof();
    Material mat{cfg.E, cfg.nu, false};
    Eigen::Matrix3d D = material_matrix(mat);
    std::map<int, double> fixed;
    int v00 = vertex_dof_near(space, {0, 0});
    int v10 = vertex_dof_near(space, {10, 0});
    fixed[FeSpace::vector_dof(v00, 0)] = 0.0;
    fixed[FeSpace::vector_dof(v00, 1)] = 0.0;
    fixed[FeSpace::vector_dof(v10, 1)] = 0.0;
    auto loaded = boundary_pieces(space);
    double worst = 0.0;
    for (int state = 0; state < 3; ++state) {
        Field2D ref = constant_stress_field(state, cfg.E, cfg.nu);
        auto res = solve_traction_patch(space, ref, mat, fixed, loaded,
                                        cfg.quad_boost, cfg.jobs);
        worst = std::max(worst, stress_error(space, res.u, ref, D));
    }
    return worst;
}

StudyResult study_patch_linear(const StudyConfig& cfg) {
    StudyResult out;
    int pairing_idx = -1;
    for (const auto& pairing : cfg.pairings) {
        ++pairing_idx;
        int dist_idx = -1;
        for (const auto& dist : cfg.dists) {
            ++dist_idx;
            for (int n_y : cfg.n_y_list)
                for (int n_s : cfg.n_s_list)
                    for (int p : cfg.p_list) {
                        if (cfg.mode == "stratified" &&
                            (pairing_idx + dist_idx + n_y + n_s + p / 2) %
                                    2 !=
                                0)
                            continue;
                        Mesh mesh =
                            refined_builtin("bathe-patch", 0, n_y, n_s);
                        StudyRow row;
                        row.p_x = row.p_y = p;
                        row.level = n_s;
                        row.error = linear_patch_error(
                            mesh, pairing, dist, p, cfg, &row.n_dof);
                        out.rows.push_back(row);
                    }
        }
    }
    return out;
}

StudyResult study_patch_beam(const StudyConfig& cfg, bool cubic) {
    StudyResult out;
    Material mat{cfg.E, cfg.nu, false};
    Mesh mesh = refined_builtin(cubic ? "beam-cubic" : "beam-quadratic", 0,
                                cfg.n_y, cfg.n_s);
    for (int p : cfg.p_list) {
        FeSpace space = make_space(mesh, cfg.pairing, cfg.dist, p, p);
        std::map<int, double> fixed;
        Field2D ref;
        std::vector<int> loaded;
        if (!cubic) {
            ref = beam_quadratic_field(cfg.E, cfg.nu);
            // u_x = 0 on the clamped edge x = 0, u_y pinned at the origin;
            // traction only on the free end (zero elsewhere).
            for (int pid : pieces_where(
                     space, [](std::array<double, 2> v) {
                         return std::abs(v[0]) < 1e-12;
                     }))
                constrain_piece(space, pid, ref.disp, fixed, {true, false});
            fixed[FeSpace::vector_dof(vertex_dof_near(space, {0, 0}), 1)] =
                0.0;
            loaded = pieces_where(space, [](std::array<double, 2> v) {
                return std::abs(v[0] - 10.0) < 1e-12;
            });
        } else {
            ref = beam_cubic_field(cfg.E, cfg.nu);
            // Minimal supports, consistent tractions everywhere.
            int v00 = vertex_dof_near(space, {0, 0});
            int vc0 = vertex_dof_near(space, {2, 0});
            fixed[FeSpace::vector_dof(v00, 0)] = 0.0;
            fixed[FeSpace::vector_dof(v00, 1)] = 0.0;
            fixed[FeSpace::vector_dof(vc0, 1)] = ref.disp({2, 0})[1];
            loaded = boundary_pieces(space);
        }
        auto res = solve_traction_patch(space, ref, mat, fixed, loaded,
                                        cfg.quad_boost, cfg.jobs);
        out.rows.push_back({res.n_dof,
                            displacement_error(space, res.u, ref), p, p, 0});
    }
    return out;
}

StudyResult study_patch_highorder(const StudyConfig& cfg, int degree) {
    StudyResult out;
    Material mat{cfg.E, cfg.nu, false};
    PolyField pf = admissible_poly_field(degree, cfg.nu, cfg.E);
    Field2D ref = pf.field();
    int level = cfg.levels.empty() ? 2 : cfg.levels.front();
    Mesh mesh = refined_builtin("square-highorder", level, cfg.n_y, cfg.n_s);
    for (int p : cfg.p_list) {
        FeSpace space = make_space(mesh, cfg.pairing, cfg.dist, p, p);
        auto res = solve_dirichlet_patch(space, ref, mat, cfg.quad_boost,
                                         cfg.jobs);
        out.rows.push_back({res.n_dof,
                            displacement_error(space, res.u, ref), p, p,
                            level});
    }
    return out;
}

StudyResult study_convergence(const StudyConfig& cfg, bool hole) {
    StudyResult out;
    Material mat{cfg.E, cfg.nu, false};
    Field2D ref;
    PolyField pf;
    if (hole) {
        ref = hole_field(cfg.E, cfg.nu, 1.0, 1.0);
    } else {
        pf = admissible_poly_field(8, cfg.nu, cfg.E);
        ref = pf.field();
    }
    const std::string geo = hole ? "hole-quadrant" : "square-highorder";
    for (int p_y : cfg.p_y_list) {
        std::vector<std::pair<double, double>> pts;
        for (int level : cfg.levels) {
            Mesh mesh = refined_builtin(geo, level, cfg.n_y, cfg.n_s);
            FeSpace space =
                make_space(mesh, cfg.pairing, cfg.dist, cfg.p_x, p_y);
            auto res = solve_dirichlet_patch(space, ref, mat,
                                             cfg.quad_boost, cfg.jobs);
            double err = relative_l2_error(space, res.u, ref);
            out.rows.push_back({res.n_dof, err, cfg.p_x, p_y, level});
            pts.push_back({static_cast<double>(res.n_dof), err});
        }
        if (pts.size() >= 2)
            out.stats["slope_py" + std::to_string(p_y)] = fit_rate(pts);
    }
    return out;
}

SolveResult solve_singular(const Mesh& mesh, const StudyConfig& cfg, int p,
                           bool l_domain) {
    FeSpace space = make_space(mesh, cfg.pairing, cfg.dist, p, p);
    Material mat{cfg.E, cfg.nu, false};
    Eigen::Matrix3d D = material_matrix(mat);
    Eigen::SparseMatrix<double> K =
        assemble_stiffness(space, D, cfg.quad_boost, cfg.jobs);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(space.n_dof());
    std::map<int, double> fixed;
    auto zero = [](std::array<double, 2>) {
        return std::array<double, 2>{0.0, 0.0};
    };
    if (l_domain) {
        // Roller support on y = 0, pin u_x at the origin; unit normal
        // tension on the top edge y = 40.
        for (int pid : pieces_where(space, [](std::array<double, 2> v) {
                 return std::abs(v[1]) < 1e-12;
             }))
            constrain_piece(space, pid, zero, fixed, {false, true});
        fixed[FeSpace::vector_dof(vertex_dof_near(space, {0, 0}), 0)] = 0.0;
        TractionFn pull = [](std::array<double, 2>, std::array<double, 2>) {
            return std::array<double, 2>{0.0, 1.0};
        };
        for (int pid : pieces_where(space, [](std::array<double, 2> v) {
                 return std::abs(v[1] - 40.0) < 1e-12;
             }))
            for (auto [e, k] : piece_edge_users(space, pid))
                add_edge_traction(space, e, k, pull, f);
    } else {
        // Clamped cantilever with a constant end shear.
        for (int pid : pieces_where(space, [](std::array<double, 2> v) {
                 return std::abs(v[0]) < 1e-12;
             }))
            constrain_piece(space, pid, zero, fixed);
        TractionFn shear = [](std::array<double, 2>,
                              std::array<double, 2>) {
            return std::array<double, 2>{0.0, -1.0};
        };
        for (int pid : pieces_where(space, [](std::array<double, 2> v) {
                 return std::abs(v[0] - 10.0) < 1e-12;
             }))
            for (auto [e, k] : piece_edge_users(space, pid))
                add_edge_traction(space, e, k, shear, f);
    }
    SolveResult res;
    res.n_dof = space.n_dof();
    // All essential constraints above are homogeneous, so the strain energy
    // equals 0.5 u.f and K can be released inside the solver (the overkill
    // reference meshes would not fit in memory otherwise).
    res.u = solve_dirichlet(std::move(K), f, fixed);
    res.energy = 0.5 * res.u.dot(f);
    return res;
}

StudyResult study_singular(const StudyConfig& cfg, bool l_domain) {
    StudyResult out;
    const std::string geo = l_domain ? "l-domain" : "cantilever";
    // Overkill reference energy: deep uniform + banded refinement at p = 6.
    {
        Mesh ref_mesh =
            refined_builtin(geo, l_domain ? 3 : 2, 2, l_domain ? 6 : 4);
        StudyConfig rc = cfg;
        rc.quad_boost = std::max(rc.quad_boost, 0);
        auto ref = solve_singular(ref_mesh, rc, 6, l_domain);
        out.stats["u_ref"] = ref.energy;
    }
    double U_ref = out.stats["u_ref"];
    for (int p : cfg.p_list) {
        Mesh mesh;
        int level;
        if (cfg.refinement == "uniform") {
            level = cfg.levels.empty() ? 2 : cfg.levels.front();
            mesh = refined_builtin(geo, level, 1, 0);
        } else {
            level = cfg.n_s;
            mesh = refined_builtin(geo, 0, cfg.n_y, cfg.n_s);
        }
        auto res = solve_singular(mesh, cfg, p, l_domain);
        out.rows.push_back({res.n_dof,
                            energy_norm_error(res.energy, U_ref), p, p,
                            level});
    }
    return out;
}

} // namespace

StudyResult run_study(const StudyConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    StudyResult out;
    if (cfg.kind == "patch-linear")
        out = study_patch_linear(cfg);
    else if (cfg.kind == "patch-quadratic")
        out = study_patch_beam(cfg, false);
    else if (cfg.kind == "patch-cubic")
        out = study_patch_beam(cfg, true);
    else if (cfg.kind == "patch-highorder")
        out = study_patch_highorder(cfg, 7);
    else if (cfg.kind == "conv-poly")
        out = study_convergence(cfg, false);
    else if (cfg.kind == "conv-hole")
        out = study_convergence(cfg, true);
    else if (cfg.kind == "singular-cantilever")
        out = study_singular(cfg, false);
    else if (cfg.kind == "singular-L")
        out = study_singular(cfg, true);
    else if (cfg.kind == "basis-dump")
        ; // handled by the CLI (shape-value table, no solves)
    else
        throw ConfigError("unknown study kind \"" + cfg.kind + "\"");
    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
}

} // namespace xny
