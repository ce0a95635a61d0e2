// Acceptance suite: one test case per acceptance criterion, each printing a
// single PASS/FAIL line with the measured quantity and its pinned tolerance.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/Eigenvalues>

#include "xny/study.hpp"

using namespace xny;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 =
        std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d (%s): %s\n", pass ? "PASS" : "FAIL", id,
                name, detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const int kJobs = 4;

} // namespace

TEST_CASE("criterion 1: linear patch test, stratified combination sweep") {
    Timer tm;
    StudyConfig cfg;
    cfg.kind = "patch-linear";
    cfg.p_list = {2, 4, 6, 8};
    cfg.mode = "stratified";
    cfg.jobs = kJobs;
    StudyResult res = run_study(cfg);
    double worst = 0;
    for (const auto& r : res.rows)
        worst = std::max(worst, r.error);
    bool pass = res.rows.size() == 64 && worst < 1e-10 && tm.seconds() < 60;
    report(1, "patch-linear", pass,
           std::to_string(res.rows.size()) +
               " combos, worst mean stress error = " + fmt(worst) +
               " (tol 1e-10), " + fmt(tm.seconds()) + " s");
    CHECK(pass);
}

TEST_CASE("criterion 2: quadratic patch test") {
    StudyConfig cfg;
    cfg.kind = "patch-quadratic";
    cfg.p_list = {1, 2, 3};
    cfg.jobs = kJobs;
    StudyResult res = run_study(cfg);
    REQUIRE(res.rows.size() == 3);
    bool pass = res.rows[0].error > 1e-3 && res.rows[1].error < 1e-8 &&
                res.rows[2].error < 1e-8;
    report(2, "patch-quadratic", pass,
           "E_rel(p=1) = " + fmt(res.rows[0].error) + " (> 1e-3), E_rel(p=2) = " +
               fmt(res.rows[1].error) + ", E_rel(p=3) = " +
               fmt(res.rows[2].error) + " (< 1e-8)");
    CHECK(pass);
}

TEST_CASE("criterion 3: cubic patch test") {
    StudyConfig cfg;
    cfg.kind = "patch-cubic";
    cfg.p_list = {2, 3, 4};
    cfg.jobs = kJobs;
    StudyResult res = run_study(cfg);
    REQUIRE(res.rows.size() == 3);
    bool pass = res.rows[0].error > 1e-4 && res.rows[1].error < 1e-8 &&
                res.rows[2].error < 1e-8;
    report(3, "patch-cubic", pass,
           "E_rel(p=2) = " + fmt(res.rows[0].error) + " (> 1e-4), E_rel(p=3) = " +
               fmt(res.rows[1].error) + ", E_rel(p=4) = " +
               fmt(res.rows[2].error) + " (< 1e-8)");
    CHECK(pass);
}

TEST_CASE("criterion 4: degree-7 field, p-sweep on a fixed mesh") {
    StudyConfig cfg;
    cfg.kind = "patch-highorder";
    cfg.p_list = {1, 2, 3, 4, 5, 6, 7};
    cfg.levels = {0};
    cfg.n_s = 2; // two banded refinement passes, no uniform pre-refinement
    cfg.E = 1.0;
    cfg.jobs = kJobs;
    StudyResult res = run_study(cfg);
    REQUIRE(res.rows.size() == 7);
    bool monotone = true;
    for (std::size_t i = 1; i < res.rows.size(); ++i)
        if (res.rows[i].error > res.rows[i - 1].error)
            monotone = false;
    bool below = true;
    for (std::size_t i = 0; i + 1 < res.rows.size(); ++i)
        if (res.rows[i].error < 1e-7)
            below = false;
    bool pass = monotone && below && res.rows.back().error < 1e-9;
    report(4, "patch-highorder", pass,
           std::string("monotone = ") + (monotone ? "yes" : "no") +
               ", E_rel(p<7) > 1e-7 = " + (below ? "yes" : "no") +
               ", E_rel(p=7) = " + fmt(res.rows.back().error) +
               " (tol 1e-9)");
    CHECK(pass);
}

TEST_CASE("criterion 5: h-convergence rates, polynomial field") {
    Timer tm;
    StudyConfig cfg;
    cfg.kind = "conv-poly";
    cfg.p_x = 8;
    cfg.p_y_list = {1, 2, 3};
    cfg.levels = {1, 2, 3, 4, 5}; // 4 refinement steps, asymptotic window
    cfg.n_y = 1; // pure order transition: p_x = 8 coupled to low-order p_y
    cfg.E = 1.0;
    cfg.jobs = kJobs;
    StudyResult res = run_study(cfg);
    bool pass = tm.seconds() < 600;
    std::string detail;
    for (int py : cfg.p_y_list) {
        double slope = res.stats.at("slope_py" + std::to_string(py));
        double want = -(py + 1.0) / 2.0;
        if (std::abs(slope - want) > 0.2)
            pass = false;
        detail += "p_y=" + std::to_string(py) + ": " + fmt(slope) +
                  " (want " + fmt(want) + " +- 0.2)  ";
    }
    report(5, "conv-poly rates", pass,
           detail + fmt(tm.seconds()) + " s (< 600)");
    CHECK(pass);
}

TEST_CASE("criterion 6: h-convergence rates, hole field") {
    Timer tm;
    StudyConfig cfg;
    cfg.kind = "conv-hole";
    cfg.p_x = 8;
    cfg.p_y_list = {1, 2, 3};
    cfg.levels = {1, 2, 3, 4, 5}; // 4 refinement steps, asymptotic window
    cfg.n_y = 1; // pure order transition: p_x = 8 coupled to low-order p_y
    cfg.E = 1.0;
    cfg.jobs = kJobs;
    StudyResult res = run_study(cfg);
    bool pass = tm.seconds() < 600;
    std::string detail;
    for (int py : cfg.p_y_list) {
        double slope = res.stats.at("slope_py" + std::to_string(py));
        double want = -(py + 1.0) / 2.0;
        if (std::abs(slope - want) > 0.2)
            pass = false;
        detail += "p_y=" + std::to_string(py) + ": " + fmt(slope) +
                  " (want " + fmt(want) + " +- 0.2)  ";
    }
    report(6, "conv-hole rates", pass,
           detail + fmt(tm.seconds()) + " s (< 600)");
    CHECK(pass);
}

TEST_CASE("criterion 7: admissible polynomial reference fields") {
    bool pass = true;
    // Coefficient spot checks a_5, b_5, a_13, b_13, a_39, b_39 (1e-9
    // relative). nu = 0 is excluded: the reference table itself carries
    // 1/nu terms (e.g. the x y^2 coefficient) and the closure system is
    // inconsistent there, so the generator refuses it instead.
    for (double nu : {0.3, 0.45}) {
        PolyField f = admissible_poly_field(8, nu);
        auto rel = [](double got, double want) {
            return std::abs(got - want) /
                   std::max(1.0, std::abs(want));
        };
        pass = pass &&
               rel(f.a[4], 8.0 * (nu - 4.0) / (nu + 1.0)) < 1e-9 &&
               rel(f.b[4], 4.0 * (3.0 * nu - 7.0) / (nu + 1.0)) < 1e-9 &&
               rel(f.a[12], -78.0) < 1e-9 && rel(f.b[12], -78.0) < 1e-9 &&
               rel(f.a[38], -1092.0) < 1e-9 && rel(f.b[38], -1092.0) < 1e-9;
    }
    bool nu0_rejected = false;
    try {
        admissible_poly_field(8, 0.0);
    } catch (const NumericalError&) {
        nu0_rejected = true;
    }
    pass = pass && nu0_rejected;
    // equilibrium residual at 100 random points, every degree up to 8
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < 100; ++i)
        pts.push_back({U(rng), U(rng)});
    double worst = 0;
    for (int d = 1; d <= 8; ++d)
        for (double nu : {0.3, 0.45})
            worst = std::max(
                worst,
                divergence_residual(admissible_poly_field(d, nu).field(),
                                    pts, 1e-3));
    pass = pass && worst < 1e-8;
    report(7, "reference fields", pass,
           "table spots < 1e-9 rel (nu = 0.3, 0.45; nu = 0 rejected: "
           "singular closure), worst |div sigma| = " +
               fmt(worst) + " (tol 1e-8, 100 points)");
    CHECK(pass);
}

TEST_CASE("criterion 8: closed-form 12-function transition fixture") {
    double worst = 0;
    for (auto v : {FixtureVariant::LaLa, FixtureVariant::LaLe,
                   FixtureVariant::LeLe}) {
        Basis1D fine = v == FixtureVariant::LaLa
                           ? make_basis(FamilyKind::LagrangeSpectral, 2)
                           : make_basis(FamilyKind::HierarchicLegendre, 2);
        Basis1D coarse = v == FixtureVariant::LeLe
                             ? make_basis(FamilyKind::HierarchicLegendre, 2)
                             : make_basis(FamilyKind::LagrangeSpectral, 2);
        EdgeSpec split;
        split.segments = {{-1.0, 0.0, fine, false},
                          {0.0, 1.0, fine, false}};
        ShapeSet ss({split, split, EdgeSpec(coarse), EdgeSpec(coarse)},
                    coarse);
        for (int a = 0; a < 21; ++a)
            for (int c = 0; c < 21; ++c) {
                double xi = -1.0 + 0.1 * a, eta = -1.0 + 0.1 * c;
                auto ref = twelve_node_fixture(v, xi, eta);
                for (int k = 0; k < 12; ++k)
                    worst = std::max(
                        worst, std::abs(ss.eval(k, xi, eta).v - ref[k]));
            }
    }
    bool pass = worst < 1e-12;
    report(8, "transition fixture", pass,
           "21x21 grid, 3 variants, max |diff| = " + fmt(worst) +
               " (tol 1e-12)");
    CHECK(pass);
}

TEST_CASE("criterion 9: L-domain efficiency of local refinement") {
    StudyConfig loc;
    loc.kind = "singular-L";
    loc.p_list = {2, 3, 4};
    loc.refinement = "local";
    loc.n_y = 2;
    loc.n_s = 4;
    loc.jobs = kJobs;
    StudyResult rl = run_study(loc);
    StudyConfig uni = loc;
    uni.refinement = "uniform";
    uni.levels = {2};
    StudyResult ru = run_study(uni);
    REQUIRE(rl.rows.size() == 3);
    REQUIRE(ru.rows.size() == 3);
    bool pass = true;
    std::string detail;
    for (int i = 0; i < 3; ++i) {
        double ratio = rl.rows[i].error / ru.rows[i].error;
        if (rl.rows[i].error >= ru.rows[i].error)
            pass = false;
        if (i == 2 && ratio > 0.5)
            pass = false;
        // the uniform mesh must offer comparable or more DOFs
        if (ru.rows[i].n_dof < rl.rows[i].n_dof)
            pass = false;
        detail += "p=" + std::to_string(rl.rows[i].p_x) + ": E_SE " +
                  fmt(rl.rows[i].error) + " (" +
                  std::to_string(rl.rows[i].n_dof) + " dof) vs " +
                  fmt(ru.rows[i].error) + " (" +
                  std::to_string(ru.rows[i].n_dof) + " dof), ratio " +
                  fmt(ratio) + "  ";
    }
    report(9, "singular-L efficiency", pass,
           detail +
               "p=4 ratio tol 0.5; banded refinement grades toward the "
               "x/y interface, not into the re-entrant corner, so at "
               "least one corner sector stays coarse");
    CHECK(pass);
}

TEST_CASE("criterion 10: property suite runtime") {
    Timer tm;
    bool ok = true;
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    // partition of unity on a transition element, all pairings
    Mesh m = refine_y_region(builtin_mesh("square-highorder"), {2, 2});
    for (const char* pairing : {"la-la", "la-le", "le-la", "le-le"}) {
        FeSpace s = make_space(m, pairing, "gll", 4, 2);
        // partition of unity holds on pure tensor-product Lagrange
        // elements (the blended sets are not nodal: corner/edge blends
        // already sum to one and the bubbles come on top)
        if (std::string(pairing) == "la-la")
            for (std::size_t e = 0; e < s.n_elements(); ++e) {
                const ShapeSet& ss = s.shapes(e);
                if (!ss.tensor_path())
                    continue;
                for (int t = 0; t < 10; ++t) {
                    double xi = U(rng), eta = U(rng), sum = 0;
                    for (int k = 0; k < ss.count(); ++k)
                        sum += ss.eval(k, xi, eta).v;
                    ok = ok && std::abs(sum - 1.0) < 1e-10;
                }
            }
        // interface conformity with random coefficients
        Eigen::VectorXd u(s.n_dof());
        for (int i = 0; i < u.size(); ++i)
            u[i] = U(rng);
        const auto& coup = s.couplings();
        for (std::size_t pid = 0; pid < coup.pieces.size(); ++pid) {
            if (coup.pieces[pid].usage < 2)
                continue;
            for (int t = 0; t < 20; ++t) {
                double r = 0.5 + 0.5 * U(rng) * 0.96;
                std::vector<std::array<double, 2>> vals;
                for (std::size_t e = 0; e < s.n_elements(); ++e)
                    for (int k = 0; k < 4; ++k)
                        for (const auto& link : coup.elem_edges[e][k]) {
                            if (link.piece != static_cast<int>(pid))
                                continue;
                            double tt =
                                link.vstart == coup.pieces[pid].va
                                    ? link.lo + r * (link.hi - link.lo)
                                    : link.hi - r * (link.hi - link.lo);
                            double xi = k == 1 ? 1.0 : (k == 3 ? -1.0 : tt);
                            double eta = k == 0 ? -1.0 : (k == 2 ? 1.0 : tt);
                            vals.push_back(
                                eval_displacement(s, e, xi, eta, u));
                        }
                for (std::size_t i = 1; i < vals.size(); ++i)
                    ok = ok && std::abs(vals[i][0] - vals[0][0]) < 1e-11 &&
                         std::abs(vals[i][1] - vals[0][1]) < 1e-11;
            }
        }
        // element stiffness symmetry / PSD on the transition element
        Eigen::Matrix3d D = material_matrix({1.0, 0.3, false});
        Eigen::MatrixXd K = element_stiffness(s, 0, D);
        ok = ok && (K - K.transpose()).cwiseAbs().maxCoeff() <
                       1e-12 * K.cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
        ok = ok &&
             es.eigenvalues()[0] > -1e-10 * K.cwiseAbs().maxCoeff();
    }
    // global rigid modes on the distorted patch
    {
        FeSpace s = make_space(builtin_mesh("bathe-patch"), "la-le", "gll",
                               3, 2);
        Eigen::Matrix3d D = material_matrix({1.0, 0.3, false});
        Eigen::MatrixXd K =
            Eigen::MatrixXd(assemble_stiffness(s, D, 0, kJobs));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
        const auto& ev = es.eigenvalues();
        double norm = ev[ev.size() - 1];
        ok = ok && std::abs(ev[2]) < 1e-9 * norm && ev[3] > 1e-8 * norm;
    }
    bool pass = ok && tm.seconds() < 120;
    report(10, "property suite", pass,
           std::string("invariants = ") + (ok ? "ok" : "violated") + ", " +
               fmt(tm.seconds()) + " s (< 120)");
    CHECK(pass);
}
