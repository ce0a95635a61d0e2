#include "xny/quadrature.hpp"

#include <cmath>

namespace xny {

QuadRule gauss_rule(int n) {
    if (n < 1 || n > 32)
        throw ArgumentError("gauss_rule: n must be in [1,32]");
    QuadRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, Newton on L_n.
        double x = std::cos(M_PI * (4.0 * i + 3.0) / (4.0 * n + 2.0));
        for (int it = 0; it < 100; ++it) {
            Eval1D le = legendre_eval(n, x);
            double dx = le.v / le.d;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        Eval1D le = legendre_eval(n, x);
        rule.points[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * le.d * le.d);
    }
    // Ascending points; symmetrize against round-off.
    for (int i = 0; 2 * i < n - 1; ++i) {
        double s = 0.5 * (rule.points[i] - rule.points[n - 1 - i]);
        rule.points[i] = s;
        rule.points[n - 1 - i] = -s;
        double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.points[n / 2] = 0.0;
    return rule;
}

std::vector<QuadPoint2D> composite_rule_2d(const SubdomainGrid& grid,
                                           int n_per_dir) {
    QuadRule g = gauss_rule(n_per_dir);
    std::vector<QuadPoint2D> pts;
    const auto& xb = grid.xi_breaks;
    const auto& eb = grid.eta_breaks;
    pts.reserve((xb.size() - 1) * (eb.size() - 1) * g.points.size() *
                g.points.size());
    for (std::size_t cx = 0; cx + 1 < xb.size(); ++cx) {
        double xm = 0.5 * (xb[cx] + xb[cx + 1]);
        double xh = 0.5 * (xb[cx + 1] - xb[cx]);
        for (std::size_t ce = 0; ce + 1 < eb.size(); ++ce) {
            double em = 0.5 * (eb[ce] + eb[ce + 1]);
            double eh = 0.5 * (eb[ce + 1] - eb[ce]);
            for (std::size_t i = 0; i < g.points.size(); ++i)
                for (std::size_t j = 0; j < g.points.size(); ++j)
                    pts.push_back({xm + xh * g.points[i],
                                   em + eh * g.points[j],
                                   g.weights[i] * g.weights[j] * xh * eh});
        }
    }
    return pts;
}

} // namespace xny
