#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "xny/space.hpp"
#include "xny/verify.hpp"

using namespace xny;

namespace {

const char* kTwoQuadJson = R"({
  "vertices": [[0,0],[0.5,0],[1,0],[0,1],[0.5,1],[1,1]],
  "quads": [[0,1,4,3],[1,2,5,4]],
  "region": ["x","y"]
})";

std::map<std::string, int> census(const Mesh& m) {
    std::map<std::string, int> c;
    for (const auto& cl : m.element_class)
        c[cl]++;
    return c;
}

/// Reference-square coordinates of edge-parameter t on local edge k.
std::array<double, 2> edge_ref(int k, double t) {
    switch (k) {
    case 0: return {t, -1.0};
    case 1: return {1.0, t};
    case 2: return {t, 1.0};
    default: return {-1.0, t};
    }
}

} // namespace

TEST_CASE("mesh JSON load, save and round-trip") {
    Mesh m = load_mesh(kTwoQuadJson);
    CHECK(m.vertices.size() == 6); // [TRIVIAL]
    CHECK(m.quads.size() == 2);
    CHECK(m.region[0] == 'x');
    CHECK(m.region[1] == 'y');
    Mesh m2 = load_mesh(save_mesh(m));
    REQUIRE(m2.vertices.size() == m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        CHECK(m2.vertices[i][0] == m.vertices[i][0]); // lossless
        CHECK(m2.vertices[i][1] == m.vertices[i][1]);
    }
    CHECK(m2.quads == m.quads);
}

TEST_CASE("mesh validation errors") {
    // negatively oriented quad [TRIVIAL]
    CHECK_THROWS_AS(load_mesh(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],
        "quads":[[0,3,2,1]],"region":["x"]})"),
                    MeshError);
    // duplicate vertices
    CHECK_THROWS_AS(load_mesh(R"({"vertices":[[0,0],[1,0],[1,1],[0,1],[1,0]],
        "quads":[[0,1,2,3]],"region":["x"]})"),
                    MeshError);
    // malformed JSON
    CHECK_THROWS_AS(load_mesh("{"), MeshError);
    // region tag mismatch
    CHECK_THROWS_AS(load_mesh(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],
        "quads":[[0,1,2,3]],"region":["z"]})"),
                    MeshError);
}

TEST_CASE("bathe patch mesh loads with positive Jacobians") {
    Mesh m = builtin_mesh("bathe-patch"); // [PAPER] vertex table
    CHECK(m.vertices.size() == 8);
    CHECK(m.quads.size() == 5);
    auto c = census(m);
    CHECK(c["XNY"] == 4);
    CHECK(c["Y"] == 1);
}

TEST_CASE("banded y refinement census") {
    Mesh base = load_mesh(kTwoQuadJson);
    {
        Mesh m = refine_y_region(base, {2, 1});
        CHECK(m.quads.size() == 5); // [PAPER] 1 XNY + 4 Y
        auto c = census(m);
        CHECK(c["XNY"] == 1);
        CHECK(c["Y"] == 4);
    }
    {
        // n_y = 1: identity split, classes only [TRIVIAL]
        Mesh m = refine_y_region(base, {1, 3});
        CHECK(m.quads.size() == 2);
        CHECK(m.element_class[0] == "XNY");
        CHECK(m.element_class[1] == "Y");
    }
    {
        // n_s = 2: interface column refined twice. The second pass replaces
        // the two interface children, leaving 1 XNY + 2 YNY + 8 Y
        // (11 elements).
        Mesh m = refine_y_region(base, {2, 2});
        CHECK(m.quads.size() == 11);
        auto c = census(m);
        CHECK(c["XNY"] == 1);
        CHECK(c["YNY"] == 2);
        CHECK(c["Y"] == 8);
    }
}

TEST_CASE("uniform refinement") {
    Mesh base = load_mesh(kTwoQuadJson);
    Mesh m = uniform_refine(base);
    CHECK(m.quads.size() == 8); // [PAPER]
    int nx = 0, ny = 0;
    for (char r : m.region)
        (r == 'x' ? nx : ny)++;
    CHECK(nx == 4);
    CHECK(ny == 4);
    // single quad -> 9 vertices [TRIVIAL]
    Mesh q = load_mesh(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],
        "quads":[[0,1,2,3]],"region":["x"]})");
    CHECK(uniform_refine(q).vertices.size() == 9);
    // 5-quad patch refined twice -> 80 quads [DERIVED]
    Mesh p = builtin_mesh("bathe-patch");
    CHECK(uniform_refine(uniform_refine(p)).quads.size() == 80);
}

TEST_CASE("coupling discovery") {
    Mesh base = load_mesh(kTwoQuadJson);
    {
        // conforming mesh: all chains single-segment [TRIVIAL]
        auto c = discover_couplings(base);
        for (const auto& ee : c.elem_edges)
            for (const auto& chain : ee)
                CHECK(chain.size() == 1);
        CHECK(c.pieces.size() == 7);
    }
    {
        // n_y = 2: coupling edge breakpoint at parametric 0 [TRIVIAL]
        Mesh m = refine_y_region(base, {2, 1});
        auto c = discover_couplings(m);
        const auto& chain = c.elem_edges[0][1]; // x-element, E2
        REQUIRE(chain.size() == 2);
        CHECK(chain[0].lo == doctest::Approx(-1.0));
        CHECK(chain[0].hi == doctest::Approx(0.0));
        CHECK(chain[1].hi == doctest::Approx(1.0));
    }
    {
        // n_y = 3: breakpoints at -1/3 and 1/3 [DERIVED]
        Mesh m = refine_y_region(base, {3, 1});
        auto c = discover_couplings(m);
        const auto& chain = c.elem_edges[0][1];
        REQUIRE(chain.size() == 3);
        CHECK(chain[0].hi == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
        CHECK(chain[1].hi == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    {
        // hanging vertex without a matching fine edge -> T-junction error
        Mesh bad;
        bad.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1},
                        {2, 0}, {2, 1}, {1, 0.3}};
        bad.quads = {{0, 1, 2, 3}, {1, 4, 5, 2}};
        bad.region = {'x', 'y'};
        CHECK_THROWS_AS(discover_couplings(bad), MeshError);
    }
}

TEST_CASE("dof counts") {
    // single tensor element p=3 -> 32 DOFs [TRIVIAL]
    Mesh q = load_mesh(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],
        "quads":[[0,1,2,3]],"region":["x"]})");
    SpaceParams sp3{make_basis(FamilyKind::LagrangeSpectral, 3),
                    make_basis(FamilyKind::LagrangeSpectral, 3)};
    CHECK(FeSpace(q, sp3).n_dof() == 32);
    // two conforming p=2 elements -> 30 DOFs [DERIVED]
    Mesh two = load_mesh(kTwoQuadJson);
    SpaceParams sp2{make_basis(FamilyKind::LagrangeSpectral, 2),
                    make_basis(FamilyKind::LagrangeSpectral, 2)};
    CHECK(FeSpace(two, sp2).n_dof() == 30);
    // coupling edge of the XNY element carries 5 scalar trace functions
    // [PAPER] (two quadratic segments sharing a junction)
    Mesh m = refine_y_region(two, {2, 1});
    FeSpace space(m, sp2);
    CHECK(space.shapes(0).edge(1).n_functions() == 5);
    // monotonicity in p and refinement
    int prev = 0;
    for (int p = 1; p <= 5; ++p) {
        SpaceParams sp{make_basis(FamilyKind::LagrangeSpectral, p),
                       make_basis(FamilyKind::LagrangeSpectral, p)};
        int nd = FeSpace(m, sp).n_dof();
        CHECK(nd > prev);
        prev = nd;
    }
    CHECK(FeSpace(refine_y_region(two, {2, 2}), sp2).n_dof() >
          FeSpace(m, sp2).n_dof());
    // deterministic dof map
    FeSpace again(m, sp2);
    for (std::size_t e = 0; e < m.quads.size(); ++e)
        CHECK(space.element_dofs(e) == again.element_dofs(e));
}

TEST_CASE("global continuity across coupling interfaces") {
    // [DERIVED property] random coefficient field, jump < 1e-11 at
    // interface points, all four pairings.
    Mesh base = load_mesh(kTwoQuadJson);
    Mesh m = refine_y_region(base, {2, 2});
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const auto& pairing :
         {std::pair{FamilyKind::LagrangeSpectral,
                    FamilyKind::HierarchicLegendre},
          std::pair{FamilyKind::LagrangeSpectral,
                    FamilyKind::LagrangeSpectral},
          std::pair{FamilyKind::HierarchicLegendre,
                    FamilyKind::LagrangeSpectral},
          std::pair{FamilyKind::HierarchicLegendre,
                    FamilyKind::HierarchicLegendre}}) {
        SpaceParams sp{make_basis(pairing.first, 3),
                       make_basis(pairing.second, 2)};
        FeSpace space(m, sp);
        Eigen::VectorXd u(space.n_dof());
        for (int i = 0; i < u.size(); ++i)
            u[i] = U(rng);
        const auto& coup = space.couplings();
        // realizations of each piece: (element, local edge, link)
        for (std::size_t pid = 0; pid < coup.pieces.size(); ++pid) {
            if (coup.pieces[pid].usage < 2)
                continue;
            std::vector<std::array<double, 2>> samples; // (num_x, num_y)
            for (double r : {0.15, 0.5, 0.85}) {
                std::vector<std::array<double, 2>> vals;
                for (std::size_t e = 0; e < space.n_elements(); ++e)
                    for (int k = 0; k < 4; ++k)
                        for (const auto& link : coup.elem_edges[e][k]) {
                            if (link.piece != static_cast<int>(pid))
                                continue;
                            double t =
                                link.vstart == coup.pieces[pid].va
                                    ? link.lo + r * (link.hi - link.lo)
                                    : link.hi - r * (link.hi - link.lo);
                            auto rc = edge_ref(k, t);
                            vals.push_back(eval_displacement(
                                space, e, rc[0], rc[1], u));
                        }
                REQUIRE(vals.size() >= 2);
                for (std::size_t i = 1; i < vals.size(); ++i) {
                    CHECK(std::abs(vals[i][0] - vals[0][0]) < 1e-11);
                    CHECK(std::abs(vals[i][1] - vals[0][1]) < 1e-11);
                }
            }
        }
    }
}

TEST_CASE("built-in geometries are valid") {
    for (const char* name :
         {"bathe-patch", "beam-quadratic", "beam-cubic", "square-highorder",
          "hole-quadrant", "l-domain", "cantilever"}) {
        Mesh m = builtin_mesh(name);
        CHECK(m.quads.size() >= 2);
        CHECK(!m.element_class.empty());
        // refinement keeps the mesh consistent
        Mesh r = refine_y_region(m, {2, 2});
        r.validate();
        auto c = discover_couplings(r); // no T-junction errors
        CHECK(c.pieces.size() > 0);
    }
    CHECK_THROWS_AS(builtin_mesh("nope"), ArgumentError);
}
