#include "xny/elasticity.hpp"

#include <cmath>
#include <thread>

#include <Eigen/IterativeLinearSolvers>

namespace xny {

Eigen::Matrix3d material_matrix(const Material& mat) {
    if (mat.E <= 0.0 || mat.nu <= -1.0 || mat.nu >= 0.5)
        throw ArgumentError("material_matrix: require E > 0, nu in (-1,0.5)");
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    if (mat.plane_strain) {
        double f = mat.E / ((1.0 + mat.nu) * (1.0 - 2.0 * mat.nu));
        D(0, 0) = D(1, 1) = f * (1.0 - mat.nu);
        D(0, 1) = D(1, 0) = f * mat.nu;
        D(2, 2) = f * (1.0 - 2.0 * mat.nu) / 2.0;
    } else {
        double f = mat.E / (1.0 - mat.nu * mat.nu);
        D(0, 0) = D(1, 1) = f;
        D(0, 1) = D(1, 0) = f * mat.nu;
        D(2, 2) = f * (1.0 - mat.nu) / 2.0;
    }
    return D;
}

Eigen::MatrixXd element_stiffness(const FeSpace& space, std::size_t e,
                                  const Eigen::Matrix3d& D, int quad_boost) {
    const ShapeSet& ss = space.shapes(e);
    GeomMap geom = space.geometry(e);
    int n = ss.count();
    Eigen::MatrixXd Ke = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    int nq = std::min(space.quad_order(e) + quad_boost, 32);
    auto pts = composite_rule_2d(ss.subdomain_grid(), nq);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 2 * n);
    for (const auto& qp : pts) {
        auto vals = ss.eval_all(qp.xi, qp.eta);
        auto J = geom.jacobian(qp.xi, qp.eta);
        double det = J[0] * J[3] - J[1] * J[2];
        if (det <= 0.0)
            throw NumericalError("element_stiffness: non-positive Jacobian");
        // inv(J)^T applied to reference gradients.
        double ixx = J[3] / det, ixe = -J[2] / det;
        double iex = -J[1] / det, iee = J[0] / det;
        for (int i = 0; i < n; ++i) {
            double dx = vals[i].dxi * ixx + vals[i].deta * ixe;
            double dy = vals[i].dxi * iex + vals[i].deta * iee;
            B(0, 2 * i) = dx;
            B(1, 2 * i + 1) = dy;
            B(2, 2 * i) = dy;
            B(2, 2 * i + 1) = dx;
        }
        Ke.noalias() += qp.w * det * B.transpose() * D * B;
    }
    return Ke;
}

Eigen::SparseMatrix<double> assemble_stiffness(const FeSpace& space,
                                               const Eigen::Matrix3d& D,
                                               int quad_boost, int n_threads) {
    std::size_t ne = space.n_elements();
    int n = space.n_dof();
    Eigen::SparseMatrix<double> K(n, n);
    // Accumulate in element chunks so the triplet buffers stay bounded on
    // large meshes.
    const std::size_t budget = 8000000; // triplets per chunk
    std::size_t start = 0;
    bool first = true;
    while (start < ne) {
        std::size_t end = start, est = 0;
        while (end < ne) {
            std::size_t d = 2 * space.element_dofs(end).size();
            if (est + d * d > budget && end > start)
                break;
            est += d * d;
            ++end;
        }
        std::size_t nc = end - start;
        int nt = std::max(1, std::min<int>(n_threads,
                                           static_cast<int>(nc)));
        std::vector<std::vector<Eigen::Triplet<double>>> parts(nt);
        auto work = [&](int t) {
            std::size_t lo = start + nc * t / nt;
            std::size_t hi = start + nc * (t + 1) / nt;
            auto& trips = parts[t];
            for (std::size_t e = lo; e < hi; ++e) {
                Eigen::MatrixXd Ke =
                    element_stiffness(space, e, D, quad_boost);
                const auto& dofs = space.element_dofs(e);
                for (std::size_t i = 0; i < dofs.size(); ++i)
                    for (std::size_t j = 0; j < dofs.size(); ++j)
                        for (int ci = 0; ci < 2; ++ci)
                            for (int cj = 0; cj < 2; ++cj)
                                trips.emplace_back(
                                    FeSpace::vector_dof(dofs[i], ci),
                                    FeSpace::vector_dof(dofs[j], cj),
                                    Ke(2 * i + ci, 2 * j + cj));
            }
        };
        if (nt == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nt; ++t)
                pool.emplace_back(work, t);
            for (auto& th : pool)
                th.join();
        }
        std::vector<Eigen::Triplet<double>> trips;
        std::size_t total = 0;
        for (const auto& p : parts)
            total += p.size();
        trips.reserve(total);
        for (auto& p : parts) {
            trips.insert(trips.end(), p.begin(), p.end());
            p.clear();
            p.shrink_to_fit();
        }
        Eigen::SparseMatrix<double> chunk(n, n);
        chunk.setFromTriplets(trips.begin(), trips.end());
        if (first) {
            K = std::move(chunk);
            first = false;
        } else {
            K += chunk;
        }
        start = end;
    }
    K.makeCompressed();
    return K;
}

void add_edge_traction(const FeSpace& space, std::size_t e, int k,
                       const TractionFn& traction, Eigen::VectorXd& f) {
    const ShapeSet& ss = space.shapes(e);
    GeomMap geom = space.geometry(e);
    const auto& dofs = space.element_dofs(e);
    // Integrate piecewise over the trace segments.
    std::vector<double> breaks = {-1.0};
    for (double b : ss.edge(k).interior_breaks())
        breaks.push_back(b);
    breaks.push_back(1.0);
    int pmax = ss.interior().order();
    for (const auto& seg : ss.edge(k).segments)
        pmax = std::max(pmax, seg.basis.order());
    QuadRule g = gauss_rule(std::min(pmax + 4, 32));
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        double mid = 0.5 * (breaks[s] + breaks[s + 1]);
        double half = 0.5 * (breaks[s + 1] - breaks[s]);
        for (std::size_t q = 0; q < g.points.size(); ++q) {
            double t = mid + half * g.points[q];
            double xi = 0, eta = 0;
            switch (k) {
            case 0: xi = t; eta = -1; break;
            case 1: xi = 1; eta = t; break;
            case 2: xi = t; eta = 1; break;
            default: xi = -1; eta = t; break;
            }
            auto J = geom.jacobian(xi, eta);
            // Tangent along the ascending edge parameter.
            double tx = (k == 0 || k == 2) ? J[0] : J[1];
            double ty = (k == 0 || k == 2) ? J[2] : J[3];
            double len = std::hypot(tx, ty);
            // Outward normal: E1/E2 traverse the CCW boundary with
            // ascending parameter, E3/E4 against it.
            double sgn = (k == 0 || k == 1) ? 1.0 : -1.0;
            std::array<double, 2> nrm = {sgn * ty / len, -sgn * tx / len};
            auto x = geom.map(xi, eta);
            auto tr = traction(x, nrm);
            double w = g.weights[q] * half * len;
            auto vals = ss.eval_all(xi, eta);
            for (std::size_t i = 0; i < vals.size(); ++i) {
                if (vals[i].v == 0.0)
                    continue;
                f[FeSpace::vector_dof(dofs[i], 0)] += w * vals[i].v * tr[0];
                f[FeSpace::vector_dof(dofs[i], 1)] += w * vals[i].v * tr[1];
            }
        }
    }
}

void constrain_piece(const FeSpace& space, int pid, const FieldFn& field,
                     std::map<int, double>& fixed,
                     std::array<bool, 2> comp_mask) {
    const EdgePiece& piece = space.couplings().pieces[pid];
    const Basis1D& basis = space.piece_basis(pid);
    const auto& va = space.mesh().vertices[piece.va];
    const auto& vb = space.mesh().vertices[piece.vb];
    auto at = [&](double u) {
        double s = 0.5 * (u + 1.0);
        return std::array<double, 2>{va[0] * (1.0 - s) + vb[0] * s,
                                     va[1] * (1.0 - s) + vb[1] * s};
    };
    auto ga = field(at(-1.0)), gb = field(at(1.0));
    for (int c = 0; c < 2; ++c) {
        if (!comp_mask[c])
            continue;
        fixed[FeSpace::vector_dof(piece.va, c)] = ga[c];
        fixed[FeSpace::vector_dof(piece.vb, c)] = gb[c];
    }
    int p = basis.order();
    if (p < 2)
        return;
    if (basis.family() == FamilyKind::LagrangeSpectral) {
        for (int b = 1; b < p; ++b) {
            auto gv = field(at(basis.nodes()[b]));
            for (int c = 0; c < 2; ++c)
                if (comp_mask[c])
                    fixed[FeSpace::vector_dof(
                        space.piece_dof_start(pid) + b - 1, c)] = gv[c];
        }
        return;
    }
    // Hierarchic family: vertex lift plus L2 projection of the remainder.
    QuadRule g = gauss_rule(std::min(p + 4, 32));
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p - 1, p - 1);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(p - 1, 2);
    for (std::size_t q = 0; q < g.points.size(); ++q) {
        double u = g.points[q], w = g.weights[q];
        double lift0 = basis.eval(0, u).v, lift1 = basis.eval(p, u).v;
        auto gv = field(at(u));
        std::vector<double> phi(p - 1);
        for (int i = 1; i < p; ++i)
            phi[i - 1] = basis.eval(i, u).v;
        for (int i = 0; i < p - 1; ++i) {
            for (int j = 0; j < p - 1; ++j)
                M(i, j) += w * phi[i] * phi[j];
            for (int c = 0; c < 2; ++c)
                r(i, c) += w * phi[i] *
                           (gv[c] - ga[c] * lift0 - gb[c] * lift1);
        }
    }
    Eigen::MatrixXd coef = M.ldlt().solve(r);
    for (int i = 0; i < p - 1; ++i)
        for (int c = 0; c < 2; ++c)
            if (comp_mask[c])
                fixed[FeSpace::vector_dof(space.piece_dof_start(pid) + i,
                                          c)] = coef(i, c);
}

namespace {

/// Shared implementation; if `release` is non-null it aliases K and may be
/// emptied once the reduced system has been extracted (large meshes).
Eigen::VectorXd solve_dirichlet_core(const Eigen::SparseMatrix<double>& K,
                                     Eigen::SparseMatrix<double>* release,
                                     const Eigen::VectorXd& f,
                                     const std::map<int, double>& fixed) {
    int n = static_cast<int>(K.rows());
    std::vector<int> to_red(n, -1);
    std::vector<int> free_ids;
    free_ids.reserve(n);
    for (int i = 0; i < n; ++i)
        if (!fixed.count(i)) {
            to_red[i] = static_cast<int>(free_ids.size());
            free_ids.push_back(i);
        }
    int m = static_cast<int>(free_ids.size());
    if (m == 0) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
        for (const auto& [i, v] : fixed)
            u[i] = v;
        return u;
    }
    // Right-hand side with the fixed-dof columns folded in: fr = S (f - K g)
    // where g carries the prescribed values and S selects the free rows.
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (const auto& [i, v] : fixed)
        g[i] = v;
    Eigen::VectorXd fk = f - K * g;
    Eigen::VectorXd fr(m);
    for (int i = 0; i < m; ++i)
        fr[i] = fk[free_ids[i]];
    // Drop the fixed rows/columns of K directly into compressed storage
    // (exact per-column reservation, no triplet copy): the peak memory is
    // one K plus one Kr, which matters on large meshes.
    Eigen::SparseMatrix<double> Kr(m, m);
    {
        Eigen::VectorXi counts = Eigen::VectorXi::Zero(m);
        for (int col = 0; col < K.outerSize(); ++col) {
            int rj = to_red[col];
            if (rj < 0)
                continue;
            int c = 0;
            for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it;
                 ++it)
                if (to_red[it.row()] >= 0)
                    ++c;
            counts[rj] = c;
        }
        Kr.reserve(counts);
        for (int col = 0; col < K.outerSize(); ++col) {
            int rj = to_red[col];
            if (rj < 0)
                continue;
            for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it;
                 ++it) {
                int ri = to_red[it.row()];
                if (ri >= 0)
                    Kr.insert(ri, rj) = it.value();
            }
        }
        Kr.makeCompressed();
    }
    if (release) {
        release->resize(0, 0);
        release->data().squeeze();
    }
    Eigen::VectorXd ur;
    // Past this size a direct factorization exceeds sensible memory; fall
    // back to conjugate gradients with an incomplete-Cholesky preconditioner
    // (the reduced operator is SPD for well-posed problems).
    const int direct_limit = 200000;
    if (m <= direct_limit) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
        solver.compute(Kr);
        if (solver.info() != Eigen::Success)
            throw NumericalError("solve_dirichlet: factorization failed");
        ur = solver.solve(fr);
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                 Eigen::Lower | Eigen::Upper,
                                 Eigen::IncompleteCholesky<double>>
            cg;
        cg.setTolerance(1e-12);
        cg.setMaxIterations(50000);
        cg.compute(Kr);
        if (cg.info() != Eigen::Success)
            throw NumericalError("solve_dirichlet: preconditioner failed");
        ur = cg.solve(fr);
        if (cg.info() != Eigen::Success)
            throw NumericalError("solve_dirichlet: iteration failed");
    }
    double denom = fr.norm();
    double resid = (Kr * ur - fr).norm() / (denom > 0 ? denom : 1.0);
    if (!(resid < 1e-6))
        throw NumericalError("solve_dirichlet: relative residual " +
                             std::to_string(resid));
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i)
        u[free_ids[i]] = ur[i];
    for (const auto& [i, v] : fixed)
        u[i] = v;
    return u;
}

} // namespace

Eigen::VectorXd solve_dirichlet(const Eigen::SparseMatrix<double>& K,
                                const Eigen::VectorXd& f,
                                const std::map<int, double>& fixed) {
    return solve_dirichlet_core(K, nullptr, f, fixed);
}

Eigen::VectorXd solve_dirichlet(Eigen::SparseMatrix<double>&& K,
                                const Eigen::VectorXd& f,
                                const std::map<int, double>& fixed) {
    return solve_dirichlet_core(K, &K, f, fixed);
}

std::array<double, 2> eval_displacement(const FeSpace& space, std::size_t e,
                                        double xi, double eta,
                                        const Eigen::VectorXd& u) {
    const ShapeSet& ss = space.shapes(e);
    const auto& dofs = space.element_dofs(e);
    auto vals = ss.eval_all(xi, eta);
    std::array<double, 2> d{0.0, 0.0};
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (int c = 0; c < 2; ++c)
            d[c] += vals[i].v * u[FeSpace::vector_dof(dofs[i], c)];
    return d;
}

std::array<double, 3> eval_stress(const FeSpace& space, std::size_t e,
                                  double xi, double eta,
                                  const Eigen::Matrix3d& D,
                                  const Eigen::VectorXd& u) {
    const ShapeSet& ss = space.shapes(e);
    GeomMap geom = space.geometry(e);
    const auto& dofs = space.element_dofs(e);
    auto vals = ss.eval_all(xi, eta);
    auto J = geom.jacobian(xi, eta);
    double det = J[0] * J[3] - J[1] * J[2];
    double ixx = J[3] / det, ixe = -J[2] / det;
    double iex = -J[1] / det, iee = J[0] / det;
    Eigen::Vector3d eps = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double dx = vals[i].dxi * ixx + vals[i].deta * ixe;
        double dy = vals[i].dxi * iex + vals[i].deta * iee;
        double ux = u[FeSpace::vector_dof(dofs[i], 0)];
        double uy = u[FeSpace::vector_dof(dofs[i], 1)];
        eps[0] += dx * ux;
        eps[1] += dy * uy;
        eps[2] += dy * ux + dx * uy;
    }
    Eigen::Vector3d sig = D * eps;
    return {sig[0], sig[1], sig[2]};
}

double strain_energy(const Eigen::SparseMatrix<double>& K,
                     const Eigen::VectorXd& u) {
    return 0.5 * u.dot(K * u);
}

} // namespace xny
