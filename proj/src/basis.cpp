#include "xny/basis.hpp"

#include <cmath>

namespace xny {

Eval1D legendre_eval(int n, double x) {
    if (n < 0)
        throw ArgumentError("legendre_eval: n must be >= 0");
    if (n == 0)
        return {1.0, 0.0};
    double lm1 = 1.0; // L_{k-1}
    double lk = x;    // L_k
    double dm1 = 0.0; // L'_{k-1}
    double dk = 1.0;  // L'_k
    for (int k = 1; k < n; ++k) {
        // Bonnet: (k+1) L_{k+1} = (2k+1) x L_k - k L_{k-1}
        double lp1 = ((2.0 * k + 1.0) * x * lk - k * lm1) / (k + 1.0);
        // derivative recursion: L'_{k+1} = L'_{k-1} + (2k+1) L_k
        double dp1 = dm1 + (2.0 * k + 1.0) * lk;
        lm1 = lk;
        lk = lp1;
        dm1 = dk;
        dk = dp1;
    }
    return {lk, dk};
}

std::vector<double> glc_points(int p) {
    if (p < 1)
        throw ArgumentError("glc_points: p must be >= 1");
    std::vector<double> pts(p + 1);
    for (int i = 0; i <= p; ++i)
        pts[i] = -std::cos(i * M_PI / p);
    pts.front() = -1.0;
    pts.back() = 1.0;
    if (p % 2 == 0)
        pts[p / 2] = 0.0; // snap midpoint exactly
    return pts;
}

std::vector<double> gll_points(int p) {
    if (p < 1)
        throw ArgumentError("gll_points: p must be >= 1");
    std::vector<double> pts = glc_points(p);
    // Interior points: Newton on L'_p, using the second-derivative from the
    // Legendre ODE (1-x^2) L'' = 2x L' - p(p+1) L.
    for (int i = 1; i < p; ++i) {
        double x = pts[i];
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            Eval1D le = legendre_eval(p, x);
            double fp = (2.0 * x * le.d - p * (p + 1.0) * le.v) /
                        (1.0 - x * x);
            double dx = le.d / fp;
            x -= dx;
            if (std::abs(dx) < 1e-14) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NumericalError("gll_points: Newton did not converge");
        pts[i] = x;
    }
    // Symmetric pairing x_i = -x_{p-i} to remove asymmetric round-off.
    for (int i = 1; 2 * i < p; ++i) {
        double s = 0.5 * (pts[i] - pts[p - i]);
        pts[i] = s;
        pts[p - i] = -s;
    }
    if (p % 2 == 0)
        pts[p / 2] = 0.0;
    return pts;
}

Basis1D::Basis1D(FamilyKind family, int p, NodeDistribution dist)
    : family_(family), p_(p), dist_(dist) {
    if (p < 1 || p > 12)
        throw ArgumentError("Basis1D: order must be in [1,12]");
    if (family_ == FamilyKind::LagrangeSpectral)
        nodes_ = dist == NodeDistribution::GLL ? gll_points(p) : glc_points(p);
    else
        nodes_ = {-1.0, 1.0};
}

Eval1D Basis1D::eval(int i, double x) const {
    if (i < 0 || i > p_)
        throw ArgumentError("Basis1D::eval: index out of range");
    if (family_ == FamilyKind::LagrangeSpectral) {
        // Product form; derivative by the product-rule sum. O(p^2), stable
        // at and between nodes.
        const std::vector<double>& n = nodes_;
        double denom = 1.0;
        for (int j = 0; j <= p_; ++j)
            if (j != i)
                denom *= n[i] - n[j];
        double value = 1.0;
        for (int j = 0; j <= p_; ++j)
            if (j != i)
                value *= x - n[j];
        double deriv = 0.0;
        for (int k = 0; k <= p_; ++k) {
            if (k == i)
                continue;
            double term = 1.0;
            for (int j = 0; j <= p_; ++j)
                if (j != i && j != k)
                    term *= x - n[j];
            deriv += term;
        }
        return {value / denom, deriv / denom};
    }
    // Hierarchic integrated-Legendre family.
    if (i == 0)
        return {0.5 * (1.0 - x), -0.5};
    if (i == p_)
        return {0.5 * (1.0 + x), 0.5};
    int m = i + 1; // mode number 2..p
    Eval1D lm = legendre_eval(m, x);
    Eval1D lm2 = legendre_eval(m - 2, x);
    Eval1D lm1 = legendre_eval(m - 1, x);
    double scale = std::sqrt(2.0 * (2.0 * m - 1.0));
    return {(lm.v - lm2.v) / scale, std::sqrt((2.0 * m - 1.0) / 2.0) * lm1.v};
}

Basis1D make_basis(FamilyKind family, int p, NodeDistribution dist) {
    return Basis1D(family, p, dist);
}

} // namespace xny
