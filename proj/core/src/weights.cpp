#include "l2ext/weights.hpp"

#include "l2ext/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace l2ext {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> real_coordinates(std::span<const cplx> z) {
    std::vector<double> xy;
    xy.reserve(2 * z.size());
    for (const auto& zi : z) {
        xy.push_back(zi.real());
        xy.push_back(zi.imag());
    }
    return xy;
}

}  // namespace

void ResolutionData::validate() const {
    if (divisors.empty()) throw ConfigError("resolution data needs at least one divisor");
    if (c <= Rational(0)) throw ConfigError("resolution coefficient c must be positive");
    for (const auto& d : divisors) {
        if (d.a < 1) throw ConfigError("divisor order a must be >= 1");
        if (d.b < 0) throw ConfigError("Jacobian order b must be >= 0");
    }
}

// ---------------------------------------------------------------- domain

DomainSpec DomainSpec::polydisc(int n, double radius) {
    DomainSpec d;
    d.dimension = n;
    d.radii.assign(static_cast<std::size_t>(n), radius);
    return d;
}

void DomainSpec::validate() const {
    if (dimension < 1) throw ConfigError("domain dimension must be >= 1");
    if (static_cast<int>(radii.size()) != dimension)
        throw ConfigError("domain needs exactly one radius per coordinate");
    for (double r : radii)
        if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("polyradii must be positive and finite");
}

bool DomainSpec::contains(std::span<const cplx> z) const {
    if (static_cast<int>(z.size()) != dimension) return false;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (std::abs(z[i]) > radii[i] * (1.0 + 1e-12)) return false;
    return true;
}

void DomainSpec::require_contains(std::span<const cplx> z) const {
    if (!contains(z)) throw DomainError("point lies outside the closed polydisc");
}

std::vector<double> squared_moduli(std::span<const cplx> z) {
    std::vector<double> s(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) s[i] = std::norm(z[i]);
    return s;
}

// ---------------------------------------------------------------- base weight

BaseWeight BaseWeight::zero() { return {}; }

BaseWeight BaseWeight::radial(RealPolynomial g) {
    if (g.variables != 1) throw ConfigError("radial profile must be a polynomial in one variable");
    return {BaseKind::radial, std::move(g)};
}

BaseWeight BaseWeight::toric(RealPolynomial g) { return {BaseKind::toric, std::move(g)}; }

BaseWeight BaseWeight::pointwise(RealPolynomial g) { return {BaseKind::pointwise, std::move(g)}; }

double BaseWeight::from_moduli(std::span<const double> s) const {
    switch (kind) {
    case BaseKind::zero:
        return 0.0;
    case BaseKind::radial: {
        double total = 0.0;
        for (double si : s) total += si;
        const double v[1] = {total};
        return profile(v);
    }
    case BaseKind::toric:
        return profile(s);
    case BaseKind::pointwise:
        break;
    }
    throw ConfigError("pointwise base weight cannot be evaluated from moduli");
}

double BaseWeight::operator()(std::span<const cplx> z) const {
    if (kind == BaseKind::pointwise) {
        const auto xy = real_coordinates(z);
        return profile(xy);
    }
    const auto s = squared_moduli(z);
    return from_moduli(s);
}

BaseWeight BaseWeight::restrict_to_zero(std::span<const int> coordinates) const {
    switch (kind) {
    case BaseKind::zero:
    case BaseKind::radial:
        return *this;
    case BaseKind::toric:
        return toric(profile.restrict_to_zero(coordinates));
    case BaseKind::pointwise: {
        std::vector<int> xy;
        for (int c : coordinates) {
            xy.push_back(2 * c);
            xy.push_back(2 * c + 1);
        }
        return pointwise(profile.restrict_to_zero(xy));
    }
    }
    return *this;
}

// ---------------------------------------------------------------- green data

GreenData GreenData::point(int dimension) { return coordinate_subspace(dimension, 0); }

GreenData GreenData::coordinate_subspace(int dimension, int subvariety_dim) {
    if (subvariety_dim < 0 || subvariety_dim >= dimension)
        throw ConfigError("subvariety dimension must lie in [0, n-1]");
    GreenData g;
    g.dimension = dimension;
    g.subvariety_dim = subvariety_dim;
    g.A = RealPolynomial::constant(2 * dimension, 0.0);
    g.B = RealPolynomial::constant(2 * dimension, 0.0);
    return g;
}

std::vector<int> GreenData::transverse_coordinates() const {
    std::vector<int> out;
    for (int i = subvariety_dim; i < dimension; ++i) out.push_back(i);
    return out;
}

double GreenData::log_dist2(std::span<const cplx> z) const {
    double d2 = 0.0;
    for (int i = subvariety_dim; i < dimension; ++i) d2 += std::norm(z[static_cast<std::size_t>(i)]);
    return std::log(d2);
}

double GreenData::G(std::span<const cplx> z) const { return log_dist2(z) + offset; }

double GreenData::G_from_moduli(std::span<const double> s) const {
    double d2 = 0.0;
    for (int i = subvariety_dim; i < dimension; ++i) d2 += s[static_cast<std::size_t>(i)];
    return std::log(d2) + offset;
}

double GreenData::eval_A(std::span<const cplx> z) const { return A(real_coordinates(z)); }

double GreenData::eval_B(std::span<const cplx> z) const { return B(real_coordinates(z)); }

// ---------------------------------------------------------------- singular weight

SingularWeight SingularWeight::make(Rational c, std::vector<MultiIndex> generators,
                                    const DomainSpec& domain, double u) {
    domain.validate();
    if (generators.empty()) throw ConfigError("singular weight needs at least one generator");
    if (c <= Rational(0)) throw ConfigError("singular weight coefficient c must be positive");
    const int n = domain.dimension;
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != n)
            throw ConfigError("generator exponent length does not match the dimension");
        if (std::any_of(g.begin(), g.end(), [](int e) { return e < 0; }))
            throw ConfigError("generator exponents must be nonnegative");
    }

    SingularWeight psi;
    psi.c = c;
    psi.dimension = n;
    psi.generators = std::move(generators);
    psi.resolution.c = c;

    if (psi.generators.size() == 1) {
        psi.family = ModelFamily::principal_monomial;
        const auto& a = psi.generators.front();
        for (int k = 0; k < n; ++k)
            if (a[static_cast<std::size_t>(k)] > 0)
                psi.resolution.divisors.push_back({a[static_cast<std::size_t>(k)], 0, k});
        if (psi.resolution.divisors.empty())
            throw ConfigError("constant generator: psi has no singularity");
    } else {
        // z_1^d, ..., z_n^d in any order, each axis exactly once.
        const int d = total_degree(psi.generators.front());
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        bool ok = n >= 2 && d >= 1 && static_cast<int>(psi.generators.size()) == n;
        for (const auto& g : psi.generators) {
            if (!ok) break;
            int axis = -1;
            for (int k = 0; k < n; ++k) {
                const int e = g[static_cast<std::size_t>(k)];
                if (e == 0) continue;
                if (e != d || axis != -1) { ok = false; break; }
                axis = k;
            }
            if (axis < 0 || seen[static_cast<std::size_t>(axis)]) ok = false;
            else seen[static_cast<std::size_t>(axis)] = true;
        }
        if (!ok)
            throw UnsupportedModelError(
                "generators are neither a single monomial nor {z_1^d, ..., z_n^d}");
        psi.family = ModelFamily::maximal_ideal_power;
        psi.resolution.divisors.push_back({d, n - 1, -1});
    }
    psi.resolution.validate();

    double sup_sum = 0.0;
    for (const auto& g : psi.generators) {
        double term = 1.0;
        for (int k = 0; k < n; ++k)
            term *= std::pow(domain.radii[static_cast<std::size_t>(k)], 2 * g[static_cast<std::size_t>(k)]);
        sup_sum += term;
    }
    psi.u = std::min(u, -to_double(c) * std::log(sup_sum));
    return psi;
}

int SingularWeight::ideal_power() const {
    return family == ModelFamily::maximal_ideal_power ? total_degree(generators.front()) : 0;
}

double SingularWeight::sum_of_squares(std::span<const double> s) const {
    double total = 0.0;
    for (const auto& g : generators) {
        double term = 1.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (g[k] != 0) term *= std::pow(s[k], g[k]);
        total += term;
    }
    return total;
}

double SingularWeight::from_moduli(std::span<const double> s) const {
    const double sum = sum_of_squares(s);
    if (sum <= 0.0) return -kInf;
    return to_double(c) * std::log(sum) + u;
}

double SingularWeight::operator()(std::span<const cplx> z) const {
    const auto s = squared_moduli(z);
    return from_moduli(s);
}

double eval_singular_weight(const SingularWeight& psi, std::span<const cplx> z) {
    if (psi.generators.empty()) throw ConfigError("singular weight has no generators");
    return psi(z);
}

// ---------------------------------------------------------------- weight spec

WeightSpec WeightSpec::plain(BaseWeight base) {
    WeightSpec w;
    w.base = std::move(base);
    return w;
}

bool WeightSpec::is_toric() const { return base.is_toric(); }

bool WeightSpec::has_multiplier_term() const {
    return multiplier.has_value() && psi.has_value() && *multiplier != Rational(0);
}

double WeightSpec::multiplier_value() const {
    return has_multiplier_term() ? to_double(*multiplier) : 0.0;
}

WeightSpec WeightSpec::deformed(PoleKind pole, double shift, double slope) const {
    WeightSpec w = *this;
    w.deformation = Deformation{pole, shift, slope};
    return w;
}

WeightSpec WeightSpec::with_multiplier(const SingularWeight& p, Rational m) const {
    WeightSpec w = *this;
    w.psi = p;
    w.multiplier = m;
    return w;
}

void WeightSpec::validate(const DomainSpec& domain) const {
    domain.validate();
    if (deformation) {
        if (deformation->slope < 0.0) throw ConfigError("deformation slope must be >= 0");
        if (deformation->shift > 0.0) throw ConfigError("deformation shift must be <= 0");
        if (deformation->pole == PoleKind::green && !green)
            throw ConfigError("deformation uses G but no Green-type data is configured");
        if (deformation->pole == PoleKind::psi && !psi)
            throw ConfigError("deformation uses psi but no singular weight is configured");
    }
    if (multiplier && *multiplier < Rational(0)) throw ConfigError("multiplier m must be >= 0");
    if (multiplier && !psi) throw ConfigError("multiplier term needs a singular weight");
    if (base.kind == BaseKind::toric && base.profile.variables != domain.dimension)
        throw ConfigError("toric profile must have one variable per coordinate");
    if (base.kind == BaseKind::pointwise && base.profile.variables != 2 * domain.dimension)
        throw ConfigError("pointwise profile must have two variables per coordinate");
}

double WeightSpec::pole_from_moduli(std::span<const double> s) const {
    if (!deformation) return -kInf;
    return deformation->pole == PoleKind::green ? green->G_from_moduli(s) : psi->from_moduli(s);
}

double WeightSpec::pole(std::span<const cplx> z) const {
    if (!deformation) return -kInf;
    return deformation->pole == PoleKind::green ? green->G(z) : (*psi)(z);
}

namespace {

double deformation_term(const WeightSpec& spec, double pole) {
    if (!spec.deformation || spec.deformation->slope == 0.0) return 0.0;
    const double excess = pole - spec.deformation->shift;
    return excess > 0.0 ? spec.deformation->slope * excess : 0.0;
}

double multiplier_term(const WeightSpec& spec, double psi) {
    if (!spec.has_multiplier_term()) return 0.0;
    if (psi == -kInf) return kInf;
    return spec.multiplier_value() * psi;
}

}  // namespace

double eval_weight(const WeightSpec& spec, const DomainSpec& domain, std::span<const cplx> z) {
    domain.require_contains(z);
    double value = spec.base(z);
    value += deformation_term(spec, spec.pole(z));
    if (spec.has_multiplier_term()) value += multiplier_term(spec, (*spec.psi)(z));
    return value;
}

double eval_weight_toric(const WeightSpec& spec, std::span<const double> s) {
    double value = spec.base.from_moduli(s);
    value += deformation_term(spec, spec.pole_from_moduli(s));
    if (spec.has_multiplier_term()) value += multiplier_term(spec, spec.psi->from_moduli(s));
    return value;
}

// ---------------------------------------------------------------- diagnostics

PshReport check_psh(const BaseWeight& base, const DomainSpec& domain, int sample_count,
                    double tolerance, std::uint64_t seed) {
    domain.validate();
    const int n = domain.dimension;
    const double r_min = *std::min_element(domain.radii.begin(), domain.radii.end());
    const double h = 1e-4 * r_min;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    PshReport report;
    report.min_levi_value = kInf;
    std::vector<cplx> z(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n)), w(z.size());
    for (int sample = 0; sample < sample_count; ++sample) {
        for (int i = 0; i < n; ++i) {
            const double r = 0.9 * domain.radii[static_cast<std::size_t>(i)] * std::sqrt(unit(rng));
            z[static_cast<std::size_t>(i)] = std::polar(r, 2.0 * std::numbers::pi * unit(rng));
        }
        double norm2 = 0.0;
        for (auto& vi : v) {
            vi = {gauss(rng), gauss(rng)};
            norm2 += std::norm(vi);
        }
        for (auto& vi : v) vi /= std::sqrt(norm2);

        auto f = [&](cplx zeta) {
            for (std::size_t i = 0; i < z.size(); ++i) w[i] = z[i] + zeta * v[i];
            return base(w);
        };
        const double centre = f(0.0);
        const double lap = (f(h) + f(-h) + f(cplx(0.0, h)) + f(cplx(0.0, -h)) - 4.0 * centre) / (h * h);
        const double levi = 0.25 * lap;
        report.min_levi_value = std::min(report.min_levi_value, levi);
        if (levi < -tolerance) {
            report.plurisubharmonic = false;
            report.witnesses.push_back({z, v, levi});
        }
    }
    return report;
}

SandwichReport check_green_sandwich(const GreenData& gd, const DomainSpec& domain,
                                    const SampleGrid& grid) {
    domain.validate();
    const int n = domain.dimension;
    const int per_axis = grid.radial * grid.angular;
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= per_axis;

    SandwichReport report;
    report.worst_slack = kInf;
    report.max_G = -kInf;
    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (long long idx = 0; idx < total; ++idx) {
        long long rest = idx;
        for (int i = 0; i < n; ++i) {
            const int cell = static_cast<int>(rest % per_axis);
            rest /= per_axis;
            const int ir = cell / grid.angular;
            const int ia = cell % grid.angular;
            const double r = domain.radii[static_cast<std::size_t>(i)] * (ir + 0.5) / grid.radial;
            z[static_cast<std::size_t>(i)] = std::polar(r, 2.0 * std::numbers::pi * ia / grid.angular);
        }
        const double ld = gd.log_dist2(z);
        if (!std::isfinite(ld)) continue;
        const double g = gd.G(z);
        const double upper = ld + gd.eval_A(z) - g;
        const double lower = g - (ld - gd.eval_B(z));
        report.worst_slack = std::min({report.worst_slack, upper, lower});
        report.max_G = std::max(report.max_G, g);
    }
    report.holds = report.worst_slack >= -grid.tolerance;
    report.negative = report.max_G < 0.0;
    return report;
}

}  // namespace l2ext
