#pragma once

#include "l2ext/polynomial.hpp"
#include "l2ext/rational.hpp"
#include "l2ext/resolution.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace l2ext {

/// Polydisc {|z_i| < r_i} in C^n.
struct DomainSpec {
    int dimension = 1;
    std::vector<double> radii{1.0};

    static DomainSpec polydisc(int n, double radius = 1.0);

    void validate() const;
    /// Closed-polydisc membership with a relative slack of 1e-12.
    bool contains(std::span<const cplx> z) const;
    void require_contains(std::span<const cplx> z) const;
};

/// Squared moduli (|z_1|^2, ..., |z_n|^2).
std::vector<double> squared_moduli(std::span<const cplx> z);

enum class BaseKind { zero, radial, toric, pointwise };

/// Smooth base weight phi. Radial profiles are polynomials in |z|^2 (sum over
/// coordinates), toric profiles polynomials in the squared moduli, pointwise
/// profiles polynomials in (Re z_1, Im z_1, Re z_2, ...).
struct BaseWeight {
    BaseKind kind = BaseKind::zero;
    RealPolynomial profile;

    static BaseWeight zero();
    static BaseWeight radial(RealPolynomial g);
    static BaseWeight toric(RealPolynomial g);
    static BaseWeight pointwise(RealPolynomial g);

    bool is_toric() const { return kind != BaseKind::pointwise; }
    double operator()(std::span<const cplx> z) const;
    /// Value from squared moduli; only valid when is_toric().
    double from_moduli(std::span<const double> s) const;
    /// Restriction to the coordinate subspace where the listed coordinates vanish.
    BaseWeight restrict_to_zero(std::span<const int> coordinates) const;
};

/// Green-type data for V = {z_{l+1} = ... = z_n = 0} (V = {0} when l = 0):
/// G(z) = log d^2(z, V) + offset, with continuous bounds A and B given as
/// pointwise polynomials.
struct GreenData {
    int dimension = 1;
    int subvariety_dim = 0;
    double offset = 0.0;
    RealPolynomial A;
    RealPolynomial B;

    static GreenData point(int dimension);
    static GreenData coordinate_subspace(int dimension, int subvariety_dim);

    int codim() const { return dimension - subvariety_dim; }
    std::vector<int> transverse_coordinates() const;

    double log_dist2(std::span<const cplx> z) const;
    double G(std::span<const cplx> z) const;
    double G_from_moduli(std::span<const double> s) const;
    double eval_A(std::span<const cplx> z) const;
    double eval_B(std::span<const cplx> z) const;
};

enum class ModelFamily { principal_monomial, maximal_ideal_power };

/// psi(z) = c log(sum_j |z^{a_j}|^2) + u with u a constant. Built through
/// make(), which detects the model family, attaches the resolution data and
/// lowers u so that psi <= 0 on the closed polydisc.
struct SingularWeight {
    Rational c{1};
    std::vector<MultiIndex> generators;
    double u = 0.0;
    ModelFamily family = ModelFamily::principal_monomial;
    ResolutionData resolution;
    int dimension = 1;

    static SingularWeight make(Rational c, std::vector<MultiIndex> generators,
                               const DomainSpec& domain, double u = 0.0);

    /// Common power d of the generators z_i^d in the maximal-ideal-power family.
    int ideal_power() const;
    double sum_of_squares(std::span<const double> s) const;
    double from_moduli(std::span<const double> s) const;
    double operator()(std::span<const cplx> z) const;
};

/// Which function the max(pole - shift, 0) deformation uses.
enum class PoleKind { green, psi };

struct Deformation {
    PoleKind pole = PoleKind::green;
    double shift = 0.0;  ///< t or s, real and <= 0
    double slope = 0.0;  ///< p or q, >= 0
};

/// base + slope * max(pole - shift, 0) + m * psi.
struct WeightSpec {
    BaseWeight base;
    std::optional<GreenData> green;
    std::optional<SingularWeight> psi;
    std::optional<Deformation> deformation;
    /// Multiplier exponent m; the term m * psi is present when set and psi is set.
    std::optional<Rational> multiplier;

    static WeightSpec plain(BaseWeight base);

    bool is_toric() const;
    bool has_multiplier_term() const;
    double multiplier_value() const;

    /// Copy with deformation (pole, shift, slope) attached.
    WeightSpec deformed(PoleKind pole, double shift, double slope) const;
    WeightSpec with_multiplier(const SingularWeight& psi, Rational m) const;

    void validate(const DomainSpec& domain) const;
    double pole_from_moduli(std::span<const double> s) const;
    double pole(std::span<const cplx> z) const;
};

/// Full weight at z; +infinity only from m * psi at a generator zero.
/// Throws DomainError when z is outside the closed polydisc.
double eval_weight(const WeightSpec& spec, const DomainSpec& domain, std::span<const cplx> z);

/// Same from squared moduli; requires spec.is_toric().
double eval_weight_toric(const WeightSpec& spec, std::span<const double> s);

/// psi(z), -infinity on the common zero locus of the generators.
double eval_singular_weight(const SingularWeight& psi, std::span<const cplx> z);

struct PshWitness {
    std::vector<cplx> point;
    std::vector<cplx> direction;
    double levi_value = 0.0;
};

struct PshReport {
    bool plurisubharmonic = true;
    double min_levi_value = 0.0;
    std::vector<PshWitness> witnesses;
};

/// Sampled Levi-form check by central differences (step 1e-4 * radius) in
/// random unit complex directions at random interior points.
PshReport check_psh(const BaseWeight& base, const DomainSpec& domain, int sample_count,
                    double tolerance = 1e-6, std::uint64_t seed = 0x5eed);

struct SampleGrid {
    int radial = 12;
    int angular = 12;
    double tolerance = 1e-12;
};

struct SandwichReport {
    bool holds = true;
    /// Minimum over the grid of both slacks; negative means a violation.
    double worst_slack = 0.0;
    double max_G = 0.0;
    bool negative = true;
};

/// Checks log d^2 + A >= G >= log d^2 - B on a polar grid avoiding V.
SandwichReport check_green_sandwich(const GreenData& gd, const DomainSpec& domain,
                                    const SampleGrid& grid = {});

}  // namespace l2ext
