#pragma once

#include "l2ext/polynomial.hpp"
#include "l2ext/rational.hpp"
#include "l2ext/resolution.hpp"
#include "l2ext/weights.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace l2ext {

class QuadratureRule;

/// A jumping number together with the divisors along which it occurs.
struct Jump {
    Rational m;
    std::vector<int> divisors;
};

/// Jumping numbers m_1 < m_2 < ... <= m_max; m_0 = 0 is implicit.
struct JumpSpectrum {
    std::vector<Jump> jumps;

    /// m_p for p >= 0 (m_0 = 0). Throws ConfigError when p exceeds the spectrum.
    Rational at(std::size_t p) const;
    std::size_t size() const { return jumps.size(); }
};

/// Vanishing orders s_k(m) = floor(m c a_k - b_k)_+ per divisor.
struct Staircase {
    Rational m;
    std::vector<std::int64_t> orders;
};

/// Jumping numbers (b_k + M) / (c a_k), M = 1, 2, ..., merged across divisors,
/// up to and including m_max. Exact rational arithmetic.
JumpSpectrum jumping_numbers(const ResolutionData& res, const Rational& m_max);

Staircase staircase_orders(const ResolutionData& res, const Rational& m);

/// Whether z^beta belongs to the multiplier ideal I(m psi), i.e. whether
/// |z^beta|^2 e^{-m psi} is locally integrable at the origin.
/// Strict inequality at the threshold: the ideal is right-closed in m.
bool ideal_membership(const MultiIndex& beta, const Rational& m, const SingularWeight& psi);

/// Resolution-side form of the same test: the pulled-back monomial vanishes
/// to order >= s_k(m) along every divisor.
bool staircase_membership(const MultiIndex& beta, const Rational& m, const SingularWeight& psi);

/// Order of vanishing of the pulled-back monomial z^beta along a divisor.
std::int64_t pullback_order(const MultiIndex& beta, const Divisor& divisor);

enum class OracleVerdict { finite, infinite, indeterminate };

struct OracleResult {
    OracleVerdict verdict = OracleVerdict::indeterminate;
    /// Fitted geometric decay rate per unit shell; positive means summable.
    double decay_rate = 0.0;
    std::vector<double> log_shell_integrals;
};

struct OracleOptions {
    int shells = 60;
    int fit_from = 30;
    double rate_tolerance = 1e-3;
};

/// Brute-force integrability check: integrates |z^beta|^2 e^{-m psi} over the
/// shells {t_j < psi < t_j + 1}, t_j = -1 - j, and fits the decay of the shell
/// integrals. Independent of the resolution formulas.
OracleResult membership_oracle(const MultiIndex& beta, const Rational& m,
                               const SingularWeight& psi, const DomainSpec& domain,
                               const QuadratureRule& rule, const OracleOptions& options = {});

using OracleInstance = std::pair<MultiIndex, Rational>;

/// Oracle for many (beta, m) pairs sharing one set of shell grids.
std::vector<OracleResult> membership_oracle_batch(std::span<const OracleInstance> instances,
                                                  const SingularWeight& psi, const DomainSpec& domain,
                                                  const QuadratureRule& rule,
                                                  const OracleOptions& options = {});

/// Distance of (m, beta) from the nearest integrability threshold,
/// min_k |m c a_k - b_k - ord_k(beta) - 1|, over divisors.
double threshold_distance(const MultiIndex& beta, const Rational& m, const SingularWeight& psi);

}  // namespace l2ext
