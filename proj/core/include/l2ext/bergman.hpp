#pragma once

#include "l2ext/polynomial.hpp"
#include "l2ext/quadrature.hpp"
#include "l2ext/weights.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <vector>

namespace l2ext {

/// Cholesky factorization of a Hermitian matrix after symmetric diagonal
/// equilibration. No regularization: a non-positive or tiny pivot is a
/// ConditioningError carrying the smallest pivot.
class HermitianCholesky {
public:
    explicit HermitianCholesky(const Eigen::MatrixXcd& a, double pivot_floor = 1e-13);

    Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
    /// u^H A^{-1} u.
    double inverse_quadratic_form(const Eigen::VectorXcd& u) const;
    /// Smallest pivot of the equilibrated factorization.
    double smallest_pivot() const { return smallest_pivot_; }

private:
    Eigen::VectorXd scale_;
    Eigen::MatrixXcd lower_;
    double smallest_pivot_ = 1.0;
};

/// Monomials of total degree <= D that are square integrable for the weight,
/// with the Gram matrix G_ij = <e_j, e_i> = integral conj(z^{a_i}) z^{a_j} e^{-w}.
struct TruncatedSpace {
    DomainSpec domain;
    WeightSpec weight;
    int degree = 0;
    std::vector<MultiIndex> basis;
    Eigen::MatrixXcd gram;
    std::shared_ptr<const HermitianCholesky> factor;

    std::size_t dim() const { return basis.size(); }
    std::optional<std::size_t> index_of(const MultiIndex& alpha) const;
    /// Coefficients in the basis; DegreeError for monomials outside it.
    Eigen::VectorXcd coefficients(const HolomorphicPolynomial& f) const;
    double norm2(const Eigen::VectorXcd& coeffs) const;
    /// Squared norm of the same coefficients with the integral restricted to `region`.
    double region_norm2(const Eigen::VectorXcd& coeffs, const RegionSpec& region,
                        const QuadratureRule& rule) const;
};

/// Basis filtered for integrability against the multiplier term (if any),
/// Gram assembled on the full polydisc and factorized.
TruncatedSpace build_space(const DomainSpec& domain, const WeightSpec& weight, int degree,
                           const QuadratureRule& rule);

/// Basis monomials belonging to an ideal.
struct IdealSubspace {
    std::vector<bool> member;

    /// Monomials vanishing on V: some transverse exponent is positive.
    static IdealSubspace vanishing_on(const TruncatedSpace& space, const GreenData& v);
    /// Monomials in the multiplier ideal I(m psi).
    static IdealSubspace multiplier_ideal(const TruncatedSpace& space, const SingularWeight& psi,
                                          const Rational& m);

    std::vector<std::size_t> indices() const;
    bool contains(const Eigen::VectorXcd& coeffs, double tol = 0.0) const;
};

struct ExtensionResult {
    Eigen::VectorXcd coefficients;
    double norm2 = 0.0;
    /// max over ideal members of |<F0, z^b>| / (||F0|| ||z^b||).
    double orthogonality_defect = 0.0;
};

/// F0 = F - P F, P the orthogonal projection onto the ideal subspace.
ExtensionResult minimal_extension(const TruncatedSpace& space, const IdealSubspace& ideal,
                                  const Eigen::VectorXcd& representative);

/// Values xi(e_j) of a linear functional on the basis; xi(h) = v^T h.
using FunctionalVector = Eigen::VectorXcd;

/// sup |xi(h)| / ||h|| in the truncated space.
double dual_norm(const TruncatedSpace& space, const FunctionalVector& v);

struct DualityResult {
    /// Supremum of |xi(F)| / ||xi|| over the span of the accepted family.
    double value = 0.0;
    /// Member with the largest individual ratio, as an index into the input family.
    std::size_t best_index = 0;
    double best_single = 0.0;
    std::size_t accepted = 0;
};

/// Quotient norm of F modulo the ideal, computed from the dual side. Members
/// that do not annihilate the ideal subspace (relative 1e-10) are dropped;
/// ConfigError if nothing is left.
DualityResult quotient_norm_via_duality(const TruncatedSpace& space, const IdealSubspace& ideal,
                                        const Eigen::VectorXcd& representative,
                                        const std::vector<FunctionalVector>& family);

/// Functional h -> h(z0) as a vector over the basis.
FunctionalVector point_evaluation(const TruncatedSpace& space, std::span<const cplx> z0);

/// Functional picking the coefficient of basis element `index`.
FunctionalVector coefficient_functional(const TruncatedSpace& space, std::size_t index);

}  // namespace l2ext
