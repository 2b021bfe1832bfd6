#pragma once

#include <complex>
#include <span>
#include <vector>

namespace l2ext {

using cplx = std::complex<double>;
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& alpha);

/// All multi-indices in `n` variables with total degree <= `degree`, in
/// graded lexicographic order: by total degree, then lexicographically
/// descending in the leading exponent (so z1 precedes z2 within a degree).
std::vector<MultiIndex> graded_lex_basis(int n, int degree);

/// Real polynomial sum_k coef_k * v^{exps_k} in a fixed number of variables.
/// Used for toric profiles (variables = squared moduli) and for pointwise
/// profiles (variables = x1, y1, x2, y2, ...).
struct RealPolynomial {
    struct Term {
        double coef = 0.0;
        MultiIndex exps;
    };

    int variables = 0;
    std::vector<Term> terms;

    static RealPolynomial constant(int variables, double value);

    double operator()(std::span<const double> v) const;
    bool is_constant() const;
    /// Value at the origin of the variable space.
    double constant_term() const;
    /// Sets the listed variables to zero and removes them from the variable list.
    RealPolynomial restrict_to_zero(std::span<const int> dropped) const;
};

/// Holomorphic polynomial sum_k coef_k z^{exps_k}.
struct HolomorphicPolynomial {
    struct Term {
        cplx coef;
        MultiIndex exps;
    };

    int variables = 0;
    std::vector<Term> terms;

    static HolomorphicPolynomial monomial(const MultiIndex& alpha, cplx coef = 1.0);

    cplx operator()(std::span<const cplx> z) const;
    int degree() const;
};

/// z^alpha; negative exponents are allowed (meromorphic factors).
cplx monomial_value(std::span<const cplx> z, const MultiIndex& alpha);

}  // namespace l2ext
