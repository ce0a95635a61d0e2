#include "xny/analytic.hpp"

#include <cmath>
#include <map>

namespace xny {

namespace {

std::vector<std::array<int, 2>> pascal_exponents(int degree) {
    std::vector<std::array<int, 2>> e;
    for (int d = 0; d <= degree; ++d)
        for (int j = 0; j <= d; ++j)
            e.push_back({d - j, j});
    return e;
}

double mono(double x, double y, int q, int r) {
    return std::pow(x, q) * std::pow(y, r);
}

} // namespace

std::array<double, 2> PolyField::disp(std::array<double, 2> x) const {
    double ux = 0, uy = 0;
    for (std::size_t i = 0; i < expo.size(); ++i) {
        double m = mono(x[0], x[1], expo[i][0], expo[i][1]);
        ux += a[static_cast<int>(i)] * m;
        uy += b[static_cast<int>(i)] * m;
    }
    return {ux, uy};
}

std::array<double, 3> PolyField::stress(std::array<double, 2> x) const {
    double ex = 0, ey = 0, gxy = 0;
    for (std::size_t i = 0; i < expo.size(); ++i) {
        int q = expo[i][0], r = expo[i][1];
        double dx = q > 0 ? q * mono(x[0], x[1], q - 1, r) : 0.0;
        double dy = r > 0 ? r * mono(x[0], x[1], q, r - 1) : 0.0;
        ex += a[static_cast<int>(i)] * dx;
        ey += b[static_cast<int>(i)] * dy;
        gxy += a[static_cast<int>(i)] * dy + b[static_cast<int>(i)] * dx;
    }
    double f = E / (1.0 - nu * nu);
    return {f * (ex + nu * ey), f * (ey + nu * ex),
            E / (2.0 * (1.0 + nu)) * gxy};
}

Field2D PolyField::field() const {
    PolyField copy = *this;
    return {[copy](std::array<double, 2> x) { return copy.disp(x); },
            [copy](std::array<double, 2> x) { return copy.stress(x); }};
}

PolyField admissible_poly_field(int degree, double nu, double E) {
    if (degree < 1 || degree > 12)
        throw ArgumentError("admissible_poly_field: degree in [1,12]");
    PolyField pf;
    pf.degree = degree;
    pf.nu = nu;
    pf.E = E;
    pf.expo = pascal_exponents(degree);
    int np = static_cast<int>(pf.expo.size());
    pf.a.resize(np);
    pf.b.resize(np);
    // Non-mixed monomials carry the prescribed 1-based index value; the
    // mixed ones are the unknowns fixed by div(sigma) = 0.
    std::vector<int> mixed; // monomial indices (0-based) with both q,r > 0
    for (int i = 0; i < np; ++i) {
        pf.a[i] = pf.b[i] = i + 1.0;
        if (pf.expo[i][0] > 0 && pf.expo[i][1] > 0)
            mixed.push_back(i);
    }
    if (mixed.empty())
        return pf;
    int nm = static_cast<int>(mixed.size());
    std::map<std::pair<int, int>, int> row_of; // eq monomial -> row
    auto rows = pascal_exponents(degree - 2);
    for (std::size_t r = 0; r < rows.size(); ++r)
        row_of[{rows[r][0], rows[r][1]}] = static_cast<int>(r);
    int nr = static_cast<int>(rows.size());
    // Unknown layout: z = [a_mixed (nm); b_mixed (nm)],
    // equations: eq1 rows (nr), then eq2 rows (nr); 2*nr == 2*nm.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * nr, 2 * nm);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * nr);
    std::vector<int> col_of(np, -1);
    for (int j = 0; j < nm; ++j)
        col_of[mixed[j]] = j;
    double cxx = 1.0 / (1.0 - nu * nu);     // normal-stress own term
    double cs = 1.0 / (2.0 * (1.0 + nu));   // shear term
    double cm = 1.0 / (2.0 * (1.0 - nu));   // combined mixed term
    auto add = [&](int row, int mono_i, bool is_b, double coef) {
        if (row < 0)
            return;
        int col = col_of[mono_i];
        if (col >= 0)
            A(row, col + (is_b ? nm : 0)) += coef;
        else
            rhs[row] -= coef * (mono_i + 1.0); // prescribed a_i = b_i = i
    };
    auto row_at = [&](int q, int r) {
        auto it = row_of.find({q, r});
        return it == row_of.end() ? -1 : it->second;
    };
    for (int i = 0; i < np; ++i) {
        int q = pf.expo[i][0], r = pf.expo[i][1];
        double pxx = q * (q - 1.0), pyy = r * (r - 1.0), pxy = q * r;
        if (pxx != 0.0) {
            int rr = row_at(q - 2, r);
            add(rr, i, false, cxx * pxx);                  // eq1, a
            add(rr < 0 ? -1 : nr + rr, i, true, cs * pxx); // eq2, b
        }
        if (pyy != 0.0) {
            int rr = row_at(q, r - 2);
            add(rr, i, false, cs * pyy);                    // eq1, a
            add(rr < 0 ? -1 : nr + rr, i, true, cxx * pyy); // eq2, b
        }
        if (pxy != 0.0) {
            int rr = row_at(q - 1, r - 1);
            add(rr, i, true, cm * pxy);                 // eq1, b
            add(rr < 0 ? -1 : nr + rr, i, false, cm * pxy); // eq2, a
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
        throw NumericalError(
            "admissible_poly_field: singular closure system (nu = " +
            std::to_string(nu) + ")");
    Eigen::VectorXd z = lu.solve(rhs);
    for (int j = 0; j < nm; ++j) {
        pf.a[mixed[j]] = z[j];
        pf.b[mixed[j]] = z[nm + j];
    }
    return pf;
}

double divergence_residual(const Field2D& f,
                           const std::vector<std::array<double, 2>>& points,
                           double h) {
    auto d4 = [&](int comp, std::array<double, 2> x, int dir) {
        auto sh = [&](double k) {
            auto p = x;
            p[dir] += k * h;
            return f.stress(p)[comp];
        };
        return (-sh(2) + 8 * sh(1) - 8 * sh(-1) + sh(-2)) / (12.0 * h);
    };
    double worst = 0.0, scale = 0.0;
    for (const auto& x : points) {
        auto s = f.stress(x);
        for (double c : s)
            scale = std::max(scale, std::abs(c));
        double r1 = d4(0, x, 0) + d4(2, x, 1);
        double r2 = d4(2, x, 0) + d4(1, x, 1);
        worst = std::max({worst, std::abs(r1), std::abs(r2)});
    }
    return worst / (scale > 0 ? scale : 1.0);
}

Field2D beam_quadratic_field(double E, double nu, double c) {
    return {
        [E, nu, c](std::array<double, 2> p) {
            double x = p[0], y = p[1];
            return std::array<double, 2>{
                (240.0 * x * y / c - 120.0 * x) / E,
                (-120.0 * x * x / c - 120.0 * nu * y * y / c +
                 120.0 * nu * y) /
                    E};
        },
        [c](std::array<double, 2> p) {
            return std::array<double, 3>{240.0 * p[1] / c - 120.0, 0.0, 0.0};
        }};
}

Field2D beam_cubic_field(double E, double nu, double c, double L) {
    auto disp = [E, nu, c, L](std::array<double, 2> p) {
        double x = p[0], y = p[1];
        double ux = (120.0 * x * x * y / (c * L) - 92.0 * y * y * y / (c * L) -
                     60.0 * x * x / L - 240.0 * x * y / c +
                     138.0 * y * y / L + 120.0 * x - 46.0 * c * y / L) /
                    E;
        double uy = (-40.0 * x * x * x / (c * L) -
                     120.0 * nu * x * y * y / (c * L) + 120.0 * x * x / c +
                     120.0 * nu * x * y / L + 120.0 * nu * y * y / c +
                     46.0 * c * x / L - 120.0 * nu * y) /
                    E;
        return std::array<double, 2>{ux, uy};
    };
    auto stress = [nu, c, L](std::array<double, 2> p) {
        double x = p[0], y = p[1];
        double sx = 240.0 * x * y / (c * L) - 120.0 * x / L -
                    240.0 * y / c + 120.0;
        double txy = (1.0 / (1.0 + nu)) *
                     (-(138.0 + 60.0 * nu) * y * y / (c * L) +
                      (138.0 + 60.0 * nu) * y / L);
        return std::array<double, 3>{sx, 0.0, txy};
    };
    return {disp, stress};
}

Field2D hole_field(double E, double nu, double sigma0, double a) {
    double G = E / (2.0 * (1.0 + nu));
    double kappa = (3.0 - nu) / (1.0 + nu); // plane stress
    auto disp = [sigma0, a, G, kappa](std::array<double, 2> p) {
        double r = std::hypot(p[0], p[1]);
        double th = std::atan2(p[1], p[0]);
        double f = sigma0 * a / (8.0 * G);
        double ar = a / r, ar3 = ar * ar * ar;
        double ux = f * ((r / a) * (kappa + 1.0) * std::cos(th) +
                         2.0 * ar * ((1.0 + kappa) * std::cos(th) +
                                     std::cos(3.0 * th)) -
                         2.0 * ar3 * std::cos(3.0 * th));
        double uy = f * ((r / a) * (kappa - 3.0) * std::sin(th) +
                         2.0 * ar * ((1.0 - kappa) * std::sin(th) +
                                     std::sin(3.0 * th)) -
                         2.0 * ar3 * std::sin(3.0 * th));
        return std::array<double, 2>{ux, uy};
    };
    auto stress = [sigma0, a](std::array<double, 2> p) {
        double r = std::hypot(p[0], p[1]);
        double th = std::atan2(p[1], p[0]);
        double q = (a / r) * (a / r), q2 = q * q;
        double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);
        double srr = 0.5 * sigma0 * (1.0 - q) +
                     0.5 * sigma0 * (1.0 - 4.0 * q + 3.0 * q2) * c2;
        double stt = 0.5 * sigma0 * (1.0 + q) -
                     0.5 * sigma0 * (1.0 + 3.0 * q2) * c2;
        double srt = -0.5 * sigma0 * (1.0 + 2.0 * q - 3.0 * q2) * s2;
        double c = std::cos(th), s = std::sin(th);
        return std::array<double, 3>{
            srr * c * c + stt * s * s - 2.0 * srt * s * c,
            srr * s * s + stt * c * c + 2.0 * srt * s * c,
            (srr - stt) * s * c + srt * (c * c - s * s)};
    };
    return {disp, stress};
}

} // namespace xny
