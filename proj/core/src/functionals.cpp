#include "l2ext/functionals.hpp"

#include "l2ext/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace l2ext {

namespace {

constexpr double kPi = std::numbers::pi;

// --- small real polynomial algebra, used to turn a toric or radial profile
// into a polynomial in (x1, y1, x2, y2, ...).

RealPolynomial normalize(const RealPolynomial& p) {
    std::map<MultiIndex, double> acc;
    for (const auto& t : p.terms) acc[t.exps] += t.coef;
    RealPolynomial out;
    out.variables = p.variables;
    for (auto& [e, c] : acc)
        if (c != 0.0) out.terms.push_back({c, e});
    return out;
}

RealPolynomial multiply(const RealPolynomial& a, const RealPolynomial& b) {
    RealPolynomial out;
    out.variables = a.variables;
    for (const auto& x : a.terms)
        for (const auto& y : b.terms) {
            MultiIndex e(static_cast<std::size_t>(a.variables), 0);
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = x.exps[i] + y.exps[i];
            out.terms.push_back({x.coef * y.coef, std::move(e)});
        }
    return normalize(out);
}

RealPolynomial add(RealPolynomial a, const RealPolynomial& b, double scale = 1.0) {
    for (const auto& t : b.terms) a.terms.push_back({scale * t.coef, t.exps});
    return normalize(a);
}

RealPolynomial power(const RealPolynomial& a, int k) {
    RealPolynomial out = RealPolynomial::constant(a.variables, 1.0);
    for (int i = 0; i < k; ++i) out = multiply(out, a);
    return out;
}

// x_i^2 + y_i^2 in 2n variables
RealPolynomial squared_modulus(int n, int i) {
    RealPolynomial p;
    p.variables = 2 * n;
    MultiIndex ex(static_cast<std::size_t>(2 * n), 0), ey = ex;
    ex[static_cast<std::size_t>(2 * i)] = 2;
    ey[static_cast<std::size_t>(2 * i + 1)] = 2;
    p.terms = {{1.0, ex}, {1.0, ey}};
    return p;
}

RealPolynomial to_pointwise(const BaseWeight& phi, int n) {
    switch (phi.kind) {
    case BaseKind::zero:
        return RealPolynomial::constant(2 * n, 0.0);
    case BaseKind::pointwise:
        return phi.profile;
    case BaseKind::radial: {
        RealPolynomial total = RealPolynomial::constant(2 * n, 0.0);
        for (int i = 0; i < n; ++i) total = add(total, squared_modulus(n, i));
        RealPolynomial out = RealPolynomial::constant(2 * n, 0.0);
        for (const auto& t : phi.profile.terms)
            out = add(out, power(total, t.exps[0]), t.coef);
        return out;
    }
    case BaseKind::toric: {
        RealPolynomial out = RealPolynomial::constant(2 * n, 0.0);
        for (const auto& t : phi.profile.terms) {
            RealPolynomial term = RealPolynomial::constant(2 * n, t.coef);
            for (int i = 0; i < n; ++i)
                term = multiply(term, power(squared_modulus(n, i), t.exps[static_cast<std::size_t>(i)]));
            out = add(out, term);
        }
        return out;
    }
    }
    return RealPolynomial::constant(2 * n, 0.0);
}

std::vector<cplx> zeros(int n) { return std::vector<cplx>(static_cast<std::size_t>(n), cplx(0.0)); }

cplx conj_sum(const HolomorphicPolynomial& g) {
    cplx s = 0.0;
    for (const auto& t : g.terms) s += std::conj(t.coef);
    return s;
}

// Values of xi_g on the ambient monomials z^{alpha}.
std::vector<cplx> subvariety_values(const XiSubvariety& xi, const DomainSpec& domain,
                                    std::span<const MultiIndex> alphas, const QuadratureRule& rule) {
    xi.validate(domain);
    const int n = domain.dimension;
    const int l = xi.green.subvariety_dim;
    const int k = xi.k();
    const auto transverse = xi.green.transverse_coordinates();

    std::vector<cplx> out(alphas.size(), cplx(0.0));
    std::vector<std::size_t> live;
    std::vector<MultiIndex> restricted;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        bool vanishes = false;
        for (int c : transverse)
            if (alphas[j][static_cast<std::size_t>(c)] > 0) vanishes = true;
        if (vanishes) continue;
        live.push_back(j);
        restricted.emplace_back(alphas[j].begin(), alphas[j].begin() + l);
    }
    if (live.empty()) return out;

    const auto z0 = zeros(n);
    if (l == 0) {
        const double factor = sigma(k) * std::exp(-xi.phi(z0) + k * xi.green.eval_B(z0));
        for (auto j : live) out[j] = factor * conj_sum(xi.g);
        return out;
    }

    DomainSpec v_domain;
    v_domain.dimension = l;
    v_domain.radii.assign(domain.radii.begin(), domain.radii.begin() + l);

    std::vector<int> dropped_xy;
    for (int c : transverse) {
        dropped_xy.push_back(2 * c);
        dropped_xy.push_back(2 * c + 1);
    }
    const RealPolynomial b_on_v = xi.green.B.restrict_to_zero(dropped_xy);
    const BaseWeight phi_on_v = xi.phi.restrict_to_zero(transverse);

    WeightSpec w;
    double factor = sigma(k);
    if (b_on_v.is_constant()) {
        w = WeightSpec::plain(phi_on_v);
        factor *= std::exp(k * b_on_v.constant_term());
    } else {
        w = WeightSpec::plain(BaseWeight::pointwise(add(to_pointwise(phi_on_v, l), b_on_v, -k)));
    }

    std::vector<MultiIndex> rows;
    for (const auto& t : xi.g.terms) rows.push_back(t.exps);
    const auto M = pairing_matrix(rows, restricted, w, RegionSpec::full(), rule, v_domain);
    for (std::size_t c = 0; c < live.size(); ++c) {
        cplx acc = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r)
            acc += std::conj(xi.g.terms[r].coef) *
                   M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        out[live[c]] = factor * acc;
    }
    return out;
}

void require_in_previous_ideal(const XiAnnulus& xi, const HolomorphicPolynomial& h) {
    for (const auto& t : h.terms) {
        if (t.coef == cplx(0.0)) continue;
        if (!ideal_membership(t.exps, xi.m_prev, xi.psi)) {
            std::ostringstream os;
            os << "h has a monomial outside I(" << to_string(xi.m_prev) << " psi)";
            throw ConfigError(os.str());
        }
    }
}

}  // namespace

double sigma(int k) {
    return std::pow(kPi, k) / std::tgamma(k + 1.0);
}

// ---------------------------------------------------------------- subvariety

void XiSubvariety::validate(const DomainSpec& domain) const {
    if (green.dimension != domain.dimension) throw ConfigError("subvariety dimension mismatch");
    if (green.subvariety_dim < 0 || green.subvariety_dim >= green.dimension)
        throw ConfigError("subvariety must have positive codimension");
    if (g.variables != green.subvariety_dim)
        throw ConfigError("g must be a polynomial in the coordinates of V");
    for (const auto& t : g.terms)
        if (static_cast<int>(t.exps.size()) != g.variables)
            throw ConfigError("g has a term with the wrong number of exponents");
}

cplx xi_subvariety(const XiSubvariety& xi, const DomainSpec& domain,
                   const HolomorphicPolynomial& h, const QuadratureRule& rule) {
    std::vector<MultiIndex> alphas;
    for (const auto& t : h.terms) alphas.push_back(t.exps);
    const auto values = subvariety_values(xi, domain, alphas, rule);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) acc += h.terms[j].coef * values[j];
    return acc;
}

FunctionalVector xi_subvariety_vector(const XiSubvariety& xi, const TruncatedSpace& space,
                                      const QuadratureRule& rule) {
    const auto values = subvariety_values(xi, space.domain, space.basis, rule);
    FunctionalVector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t j = 0; j < values.size(); ++j) v(static_cast<Eigen::Index>(j)) = values[j];
    return v;
}

// ---------------------------------------------------------------- annulus

XiAnnulus XiAnnulus::make(const SingularWeight& psi, const BaseWeight& phi, const DomainSpec& domain,
                          std::size_t p, HolomorphicPolynomial g, int divisor) {
    if (p == 0) throw ConfigError("jump index p must be >= 1");
    const auto& res = psi.resolution;
    res.validate();
    if (g.variables != psi.dimension - 1)
        throw ConfigError("g must be a polynomial in the n - 1 slice variables");

    Rational m_max(0);
    for (std::size_t k = 0; k < res.divisors.size(); ++k) {
        const auto& d = res.divisors[k];
        const Rational bound = Rational(d.b + static_cast<std::int64_t>(p)) / (res.c * Rational(d.a));
        if (k == 0 || bound < m_max) m_max = bound;
    }
    const auto spectrum = jumping_numbers(res, m_max);

    XiAnnulus xi;
    xi.psi = psi;
    xi.phi = phi;
    xi.domain = domain;
    xi.p = p;
    xi.m_p = spectrum.at(p);
    xi.m_prev = spectrum.at(p - 1);
    xi.g = std::move(g);

    const auto& realizing = spectrum.jumps[p - 1].divisors;
    if (divisor < 0) {
        xi.divisor = realizing.front();
    } else {
        if (std::find(realizing.begin(), realizing.end(), divisor) == realizing.end())
            throw ConfigError("the chosen divisor does not realize this jumping number");
        xi.divisor = divisor;
    }
    const auto& d = res.divisors[static_cast<std::size_t>(xi.divisor)];
    xi.s_p = staircase_orders(res, xi.m_p).orders[static_cast<std::size_t>(xi.divisor)];
    xi.s_prev = staircase_orders(res, xi.m_prev).orders[static_cast<std::size_t>(xi.divisor)];

    // the weight along the divisor must be exactly |w_k|^{-2}
    const Rational exponent = Rational(xi.s_p - 1) - (xi.m_p * res.c * Rational(d.a) - Rational(d.b));
    if (exponent != Rational(-1)) throw ConfigError("annulus exponent identity fails");
    return xi;
}

std::vector<HolomorphicPolynomial::Term> XiAnnulus::lifted_terms() const {
    const auto& d = psi.resolution.divisors[static_cast<std::size_t>(divisor)];
    const int n = psi.dimension;
    std::vector<HolomorphicPolynomial::Term> out;
    for (const auto& t : g.terms) {
        MultiIndex rho(static_cast<std::size_t>(n), 0);
        if (d.axis >= 0) {
            std::size_t j = 0;
            for (int i = 0; i < n; ++i) {
                if (i == d.axis) rho[static_cast<std::size_t>(i)] = static_cast<int>(s_p - 1);
                else rho[static_cast<std::size_t>(i)] = t.exps[j++];
            }
        } else {
            // chart z_1 = w_1, z_j = w_1 w_j
            rho[0] = static_cast<int>(s_p - 1) - total_degree(t.exps);
            for (int i = 1; i < n; ++i) rho[static_cast<std::size_t>(i)] = t.exps[static_cast<std::size_t>(i - 1)];
            if (rho[0] < 0)
                throw ConfigError("g has degree above s_k - 1; g~ would be singular off the origin");
        }
        out.push_back({t.coef, std::move(rho)});
    }
    return out;
}

double XiAnnulus::t_max() const {
    const int n = psi.dimension;
    if (psi.family == ModelFamily::principal_monomial) {
        std::vector<double> s(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = domain.radii[static_cast<std::size_t>(i)] * domain.radii[static_cast<std::size_t>(i)];
        return psi.from_moduli(s);
    }
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> s(static_cast<std::size_t>(n), 0.0);
        s[static_cast<std::size_t>(i)] = domain.radii[static_cast<std::size_t>(i)] * domain.radii[static_cast<std::size_t>(i)];
        best = i == 0 ? psi.from_moduli(s) : std::min(best, psi.from_moduli(s));
    }
    return best;
}

WeightSpec XiAnnulus::weight() const {
    return WeightSpec::plain(phi).with_multiplier(psi, m_p);
}

cplx xi_annulus_value(const XiAnnulus& xi, const HolomorphicPolynomial& h, double t,
                      const QuadratureRule& rule) {
    require_in_previous_ideal(xi, h);
    if (t + 1.0 > xi.t_max() + 1e-12) {
        std::ostringstream os;
        os << "annulus {" << t << " < psi < " << t + 1.0 << "} reaches the domain boundary";
        throw RangeError(os.str());
    }
    const auto lifted = xi.lifted_terms();
    std::vector<MultiIndex> rows, cols;
    for (const auto& tr : lifted) rows.push_back(tr.exps);
    for (const auto& tc : h.terms) cols.push_back(tc.exps);
    const auto M = pairing_matrix(rows, cols, xi.weight(), RegionSpec::annulus(xi.psi, t), rule, xi.domain);
    cplx acc = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            acc += std::conj(lifted[r].coef) * h.terms[c].coef *
                   M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return acc;
}

cplx xi_limit_closed_form(const XiAnnulus& xi, const HolomorphicPolynomial& h,
                          const QuadratureRule& rule) {
    require_in_previous_ideal(xi, h);
    const int n = xi.psi.dimension;
    const auto& d = xi.psi.resolution.divisors[static_cast<std::size_t>(xi.divisor)];
    const double c = to_double(xi.psi.c);
    const double mp = to_double(xi.m_p);
    const auto z0 = zeros(n);
    const std::int64_t order = xi.s_p - 1;

    if (xi.psi.family == ModelFamily::principal_monomial) {
        const auto& a = xi.psi.generators.front();
        for (int i = 0; i < n; ++i)
            if (i != d.axis && a[static_cast<std::size_t>(i)] != 0)
                throw UnsupportedModelError("closed form needs psi to depend on the divisor coordinate only");
        const double factor = kPi / (c * static_cast<double>(d.a)) * std::exp(-mp * xi.psi.u);

        // k(w', 0): the part of h with exponent exactly s_k - 1 along the divisor
        std::vector<cplx> coefs;
        std::vector<MultiIndex> slice_exps;
        for (const auto& t : h.terms) {
            if (t.exps[static_cast<std::size_t>(d.axis)] != order) continue;
            MultiIndex rest;
            for (int i = 0; i < n; ++i)
                if (i != d.axis) rest.push_back(t.exps[static_cast<std::size_t>(i)]);
            coefs.push_back(t.coef);
            slice_exps.push_back(std::move(rest));
        }
        if (coefs.empty()) return 0.0;
        if (n == 1) {
            cplx acc = 0.0;
            for (auto co : coefs) acc += co;
            return factor * std::exp(-xi.phi(z0)) * acc * conj_sum(xi.g);
        }
        DomainSpec slice;
        slice.dimension = n - 1;
        slice.radii.clear();
        for (int i = 0; i < n; ++i)
            if (i != d.axis) slice.radii.push_back(xi.domain.radii[static_cast<std::size_t>(i)]);
        const std::vector<int> axis{d.axis};
        const auto w = WeightSpec::plain(xi.phi.restrict_to_zero(axis));
        std::vector<MultiIndex> rows;
        for (const auto& t : xi.g.terms) rows.push_back(t.exps);
        const auto M = pairing_matrix(rows, slice_exps, w, RegionSpec::full(), rule, slice);
        cplx acc = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t col = 0; col < coefs.size(); ++col)
                acc += std::conj(xi.g.terms[r].coef) * coefs[col] *
                       M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col));
        return factor * acc;
    }

    // blow-up of the origin, generators z_i^dd; L(w', 0) = e^{-phi(0) - m u} gamma^{-m c}
    const int dd = xi.psi.ideal_power();
    const double kappa = mp * c;
    const double factor = kPi / (c * dd) * std::exp(-xi.phi(z0) - mp * xi.psi.u);
    cplx acc = 0.0;
    for (const auto& t : h.terms) {
        if (total_degree(t.exps) != order) continue;
        const MultiIndex rest(t.exps.begin() + 1, t.exps.end());
        for (const auto& gt : xi.g.terms) {
            if (gt.exps != rest) continue;
            // pi^{n-1} int_{[0,inf)^{n-1}} prod s_j^{b_j} (1 + sum s_j^dd)^{-kappa} ds
            double log_val = (n - 1) * (std::log(kPi) - std::log(static_cast<double>(dd)));
            double spent = 0.0;
            for (int e : rest) {
                const double x = (e + 1.0) / dd;
                log_val += std::lgamma(x);
                spent += x;
            }
            if (!(kappa > spent)) throw ConfigError("slice integral diverges for this g");
            log_val += std::lgamma(kappa - spent) - std::lgamma(kappa);
            acc += t.coef * std::conj(gt.coef) * std::exp(log_val);
        }
    }
    return factor * acc;
}

FunctionalVector xi_limit_vector(const XiAnnulus& xi, const TruncatedSpace& space,
                                 const QuadratureRule& rule) {
    FunctionalVector v(static_cast<Eigen::Index>(space.dim()));
    for (std::size_t j = 0; j < space.dim(); ++j)
        v(static_cast<Eigen::Index>(j)) =
            xi_limit_closed_form(xi, HolomorphicPolynomial::monomial(space.basis[j]), rule);
    return v;
}

SweepResult xi_boundedness_sweep(const XiAnnulus& xi, std::span<const double> s_grid, double q,
                                 int degree, const QuadratureRule& rule, double tol) {
    const double gap = to_double(xi.m_p - xi.m_prev);
    if (q != 0.0 && !(q > gap)) throw ConfigError("q must exceed m_p - m_{p-1}");
    for (std::size_t i = 1; i < s_grid.size(); ++i)
        if (!(s_grid[i] < s_grid[i - 1])) throw ConfigError("s grid must be strictly descending");

    SweepResult result;
    const auto base = WeightSpec::plain(xi.phi).with_multiplier(xi.psi, xi.m_prev);
    for (double s : s_grid) {
        const auto space = build_space(xi.domain, base.deformed(PoleKind::psi, s, q), degree, rule);
        const double nrm = dual_norm(space, xi_limit_vector(xi, space, rule));
        const double n2 = nrm * nrm;
        result.rows.push_back({s, n2, std::exp(gap * s) * n2});
    }
    if (result.rows.empty()) return result;
    for (const auto& r : result.rows) result.max_scaled = std::max(result.max_scaled, r.scaled);
    result.bounded = result.max_scaled <= result.rows.front().scaled * (1.0 + tol);
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const double prev = result.rows[i - 1].scaled, cur = result.rows[i].scaled;
        if (cur == 0.0) continue;
        if (prev == 0.0 || std::log(cur) > std::log(prev) + tol) result.nondecreasing = false;
    }
    return result;
}

}  // namespace l2ext
