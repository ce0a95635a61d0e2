#pragma once
// One-dimensional shape-function families: Legendre evaluation, GLL/GLC
// node sets, spectral Lagrange interpolants and hierarchic
// integrated-Legendre functions on [-1,1].

#include <stdexcept>
#include <string>
#include <vector>

namespace xny {

/// Value/derivative pair of a 1D function.
struct Eval1D {
    double v = 0.0;
    double d = 0.0;
};

/// L_n(x) and L'_n(x) by the three-term (Bonnet) recursion.
Eval1D legendre_eval(int n, double x);

/// Gauss-Lobatto-Chebyshev points, eta_i = -cos(i*pi/p), i = 0..p.
std::vector<double> glc_points(int p);

/// Gauss-Lobatto-Legendre points: +-1 and the roots of L'_p, found by
/// Newton iteration from the GLC points and symmetrized.
std::vector<double> gll_points(int p);

enum class NodeDistribution { GLL, GLC };

enum class FamilyKind { LagrangeSpectral, HierarchicLegendre };

/// A 1D basis of order p with p+1 functions. Positional index convention:
/// index 0 is the left endpoint (vertex) function, index p the right one,
/// indices 1..p-1 the interior functions (interior Lagrange nodes in
/// ascending order, or hierarchic modes 2..p).
class Basis1D {
  public:
    Basis1D() = default;
    Basis1D(FamilyKind family, int p,
            NodeDistribution dist = NodeDistribution::GLL);

    FamilyKind family() const { return family_; }
    int order() const { return p_; }
    NodeDistribution distribution() const { return dist_; }
    int count() const { return p_ + 1; }
    /// Node coordinates; for the hierarchic family only the endpoints.
    const std::vector<double>& nodes() const { return nodes_; }

    /// Evaluate function i (positional index, 0-based) at x in [-1,1].
    Eval1D eval(int i, double x) const;

    bool operator==(const Basis1D& o) const {
        return family_ == o.family_ && p_ == o.p_ &&
               (family_ != FamilyKind::LagrangeSpectral || dist_ == o.dist_);
    }

  private:
    FamilyKind family_ = FamilyKind::LagrangeSpectral;
    int p_ = 1;
    NodeDistribution dist_ = NodeDistribution::GLL;
    std::vector<double> nodes_;
};

/// Convenience constructor mirroring the module operation table.
Basis1D make_basis(FamilyKind family, int p,
                   NodeDistribution dist = NodeDistribution::GLL);

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace xny
