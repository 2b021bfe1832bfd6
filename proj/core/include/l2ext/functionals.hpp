#pragma once

#include "l2ext/bergman.hpp"
#include "l2ext/multiplier.hpp"
#include "l2ext/quadrature.hpp"
#include "l2ext/weights.hpp"

#include <cstdint>
#include <vector>

namespace l2ext {

/// pi^k / k!, the volume of the unit ball in C^k.
double sigma(int k);

/// <xi_g, h> = sigma_k * integral over V of h conj(g) e^{-phi + k B}, k = codim V.
/// g is a polynomial in the coordinates of V (no variables when V is a point).
struct XiSubvariety {
    GreenData green;
    BaseWeight phi;
    HolomorphicPolynomial g;

    int k() const { return green.codim(); }
    void validate(const DomainSpec& domain) const;
};

cplx xi_subvariety(const XiSubvariety& xi, const DomainSpec& domain,
                   const HolomorphicPolynomial& h, const QuadratureRule& rule);

/// Same functional as a vector over the basis of a space.
FunctionalVector xi_subvariety_vector(const XiSubvariety& xi, const TruncatedSpace& space,
                                      const QuadratureRule& rule);

/// Annulus functional attached to the p-th jumping number of psi along divisor k:
/// h -> integral over {t < psi < t + 1} of h conj(g~) e^{-phi - m_p psi},
/// g~ = g(w') w_k^{s_k - 1} read back in ambient coordinates.
struct XiAnnulus {
    SingularWeight psi;
    BaseWeight phi;
    DomainSpec domain;
    std::size_t p = 1;
    int divisor = 0;
    Rational m_p{1};
    Rational m_prev{0};
    std::int64_t s_p = 0;
    std::int64_t s_prev = 0;
    /// Polynomial in the n - 1 slice variables.
    HolomorphicPolynomial g;

    /// Computes m_p, m_{p-1} and the staircase orders; when `divisor` is negative
    /// the first divisor realizing m_p is used. ConfigError if the divisor does
    /// not realize the jump or the exponent identity fails.
    static XiAnnulus make(const SingularWeight& psi, const BaseWeight& phi, const DomainSpec& domain,
                          std::size_t p, HolomorphicPolynomial g, int divisor = -1);

    /// Terms of g~ as (coefficient, ambient exponent).
    std::vector<HolomorphicPolynomial::Term> lifted_terms() const;
    /// Largest t for which the annulus stays off the boundary face of the divisor.
    double t_max() const;
    WeightSpec weight() const;
};

cplx xi_annulus_value(const XiAnnulus& xi, const HolomorphicPolynomial& h, double t,
                      const QuadratureRule& rule);

/// lim_{t -> -inf} of xi_annulus_value in closed form.
cplx xi_limit_closed_form(const XiAnnulus& xi, const HolomorphicPolynomial& h,
                          const QuadratureRule& rule);

FunctionalVector xi_limit_vector(const XiAnnulus& xi, const TruncatedSpace& space,
                                 const QuadratureRule& rule);

struct SweepRow {
    double s = 0.0;
    double norm2 = 0.0;
    double scaled = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double max_scaled = 0.0;
    bool bounded = true;
    bool nondecreasing = true;
};

/// e^{(m_p - m_{p-1}) s} ||xi||^2 in A^2(phi_{s,q} + m_{p-1} psi) over a descending
/// s grid. bounded: max <= first * (1 + tol); nondecreasing in s on logs within tol.
SweepResult xi_boundedness_sweep(const XiAnnulus& xi, std::span<const double> s_grid, double q,
                                 int degree, const QuadratureRule& rule, double tol = 1e-6);

}  // namespace l2ext
