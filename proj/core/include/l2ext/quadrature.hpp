#pragma once

#include "l2ext/polynomial.hpp"
#include "l2ext/weights.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace l2ext {

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    static GaussLegendre make(int order);
};

/// Tensor rule in polar coordinates: Gauss-Legendre in the squared modulus
/// s = |z_i|^2 and the trapezoid rule in the argument. Intervals bounded away
/// from s = 0 are integrated in log s, split into panels of at most
/// `log_panel_width`. Integrands singular at s = 0 use geometrically graded
/// panels down to s = r^2 e^{-graded_depth}.
class QuadratureRule {
public:
    QuadratureRule(int radial_order, int angular_order);

    /// Defaults per dimension: (120, 64) for n = 1, (60, 32) otherwise.
    static QuadratureRule defaults_for(int dimension);

    int radial_order() const { return radial_order_; }
    int angular_order() const { return angular_order_; }
    const GaussLegendre& radial() const { return radial_; }
    const GaussLegendre& graded() const { return graded_; }

    double log_panel_width = 1.0;
    double graded_depth = 40.0;

    /// Same rule with both orders doubled.
    QuadratureRule refined() const;

private:
    int radial_order_;
    int angular_order_;
    GaussLegendre radial_;
    GaussLegendre graded_;
};

using ToricFunction = std::function<double(std::span<const double>)>;

/// {f < level} boundary of a function of the squared moduli that is
/// nondecreasing in each argument.
struct LevelSet {
    ToricFunction f;
    double level = 0.0;
};

enum class RegionKind { full, sublevel, annulus };

/// Full polydisc, sublevel {f < t} or annulus {t < f < t + 1}, for a toric
/// level function f that is nondecreasing in every squared modulus.
struct RegionSpec {
    RegionKind kind = RegionKind::full;
    ToricFunction level;
    double t = 0.0;

    static RegionSpec full();
    static RegionSpec sublevel(const SingularWeight& psi, double t);
    static RegionSpec annulus(const SingularWeight& psi, double t);
    static RegionSpec sublevel(ToricFunction f, double t);
    static RegionSpec annulus(ToricFunction f, double t);

    bool contains_moduli(std::span<const double> s) const;
};

/// Radial nodes of a region: squared moduli per node and the product weight
/// (Gauss-Legendre weight times the Jacobian of the log map), without the
/// angular factor.
struct RadialGrid {
    int dimension = 1;
    std::vector<double> moduli;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    std::span<const double> node(std::size_t i) const {
        return {moduli.data() + i * static_cast<std::size_t>(dimension),
                static_cast<std::size_t>(dimension)};
    }
};

/// Builds the radial grid; region boundaries and kinks are located along each
/// ray by bisection to relative 1e-13 and the radial rule is mapped onto each
/// clipped interval.
RadialGrid build_radial_grid(const DomainSpec& domain, const RegionSpec& region,
                             std::span<const LevelSet> kinks, const QuadratureRule& rule,
                             bool graded);

/// Real integrand. When `toric` is set the integrand depends on squared moduli
/// only and the angular integrals are done exactly; otherwise `pointwise` is
/// evaluated on the full tensor grid.
struct Integrand {
    ToricFunction toric;
    std::function<double(std::span<const cplx>)> pointwise;
    std::vector<LevelSet> kinks;
    bool singular_at_origin = false;
};

/// Integral with respect to Lebesgue measure. Throws SingularIntegrandError
/// naming the node when the integrand is not finite there.
double integrate(const Integrand& f, const RegionSpec& region, const QuadratureRule& rule,
                 const DomainSpec& domain);

/// Kinks of e^{-w}: the deformation switch {pole = shift}.
std::vector<LevelSet> weight_kinks(const WeightSpec& w);

/// M_ij = integral over the region of conj(z^{rows_i}) z^{cols_j} e^{-w}.
/// Exponents may be negative. For toric w, entries with rows_i != cols_j are
/// exactly zero.
Eigen::MatrixXcd pairing_matrix(std::span<const MultiIndex> rows, std::span<const MultiIndex> cols,
                                const WeightSpec& w, const RegionSpec& region,
                                const QuadratureRule& rule, const DomainSpec& domain);

/// integral z^alpha conj(z^beta) e^{-w} over the region.
cplx monomial_pairing(const MultiIndex& alpha, const MultiIndex& beta, const WeightSpec& w,
                      const RegionSpec& region, const QuadratureRule& rule,
                      const DomainSpec& domain);

/// Sum in fixed pairwise order.
double pairwise_sum(std::span<const double> values);

}  // namespace l2ext
