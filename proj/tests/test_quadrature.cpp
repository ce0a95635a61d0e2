#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xny/quadrature.hpp"

using namespace xny;

TEST_CASE("gauss rule small orders") {
    // [TRIVIAL]
    auto r1 = gauss_rule(1);
    REQUIRE(r1.points.size() == 1);
    CHECK(r1.points[0] == 0.0);
    CHECK(r1.weights[0] == doctest::Approx(2.0));
    auto r2 = gauss_rule(2);
    CHECK(std::abs(r2.points[0]) ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    // [DERIVED] n = 5 nodes/weights (frozen)
    auto r5 = gauss_rule(5);
    std::vector<double> absp;
    for (double p : r5.points)
        absp.push_back(std::abs(p));
    std::sort(absp.begin(), absp.end());
    CHECK(absp[0] == 0.0);
    CHECK(absp[1] == doctest::Approx(0.53846931010568309).epsilon(1e-14));
    CHECK(absp[3] == doctest::Approx(0.90617984593866396).epsilon(1e-14));
    double w0 = 0;
    for (std::size_t i = 0; i < 5; ++i)
        if (r5.points[i] == 0.0)
            w0 = r5.weights[i];
    CHECK(w0 == doctest::Approx(0.56888888888888889).epsilon(1e-14));
}

TEST_CASE("gauss rule invariants and exactness") {
    for (int n = 1; n <= 32; ++n) {
        auto r = gauss_rule(n);
        double sw = 0;
        for (double w : r.weights)
            sw += w;
        CHECK(sw == doctest::Approx(2.0).epsilon(1e-13)); // sum w = 2
        // exact for degree 2n-1
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0;
            for (std::size_t i = 0; i < r.points.size(); ++i)
                s += r.weights[i] * std::pow(r.points[i], k);
            double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
            CHECK(s == doctest::Approx(exact).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(gauss_rule(0), ArgumentError);
    CHECK_THROWS_AS(gauss_rule(33), ArgumentError);
}

TEST_CASE("composite 2d rule") {
    SubdomainGrid grid;
    grid.xi_breaks = {-1.0, 0.0, 1.0};
    grid.eta_breaks = {-1.0, 0.25, 1.0};
    auto pts = composite_rule_2d(grid, 4);
    double sw = 0;
    for (const auto& p : pts)
        sw += p.w;
    CHECK(sw == doctest::Approx(4.0).epsilon(1e-13)); // area of [-1,1]^2
    // integrates a degree (7,7) polynomial exactly
    double s = 0;
    for (const auto& p : pts)
        s += p.w * std::pow(p.xi, 6) * std::pow(p.eta, 4);
    CHECK(s == doctest::Approx(2.0 / 7.0 * 2.0 / 5.0).epsilon(1e-12));
    // piecewise polynomial with a kink at the breaks
    double s2 = 0;
    for (const auto& p : pts)
        s2 += p.w * std::abs(p.xi);
    CHECK(s2 == doctest::Approx(2.0).epsilon(1e-12)); // int |xi| = 1, times 2
}
