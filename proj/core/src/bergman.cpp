#include "l2ext/bergman.hpp"

#include "l2ext/error.hpp"
#include "l2ext/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace l2ext {

// ---------------------------------------------------------------- factorization

HermitianCholesky::HermitianCholesky(const Eigen::MatrixXcd& a, double pivot_floor) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw ConfigError("Gram matrix must be square");
    scale_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = a(i, i).real();
        if (!(d > 0.0) || !std::isfinite(d)) {
            smallest_pivot_ = d;
            std::ostringstream os;
            os << "Gram matrix is not positive definite: diagonal entry " << i << " is " << d;
            throw ConditioningError(os.str(), d);
        }
        scale_(i) = 1.0 / std::sqrt(d);
    }
    lower_ = Eigen::MatrixXcd::Zero(n, n);
    smallest_pivot_ = n > 0 ? std::numeric_limits<double>::infinity() : 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = 1.0;  // equilibrated diagonal
        for (Eigen::Index k = 0; k < j; ++k) pivot -= std::norm(lower_(j, k));
        smallest_pivot_ = std::min(smallest_pivot_, pivot);
        if (!(pivot > pivot_floor)) {
            std::ostringstream os;
            os << "Gram matrix is numerically singular: pivot " << pivot << " at column " << j;
            throw ConditioningError(os.str(), pivot);
        }
        const double root = std::sqrt(pivot);
        lower_(j, j) = root;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            std::complex<double> sum = a(i, j) * scale_(i) * scale_(j);
            for (Eigen::Index k = 0; k < j; ++k) sum -= lower_(i, k) * std::conj(lower_(j, k));
            lower_(i, j) = sum / root;
        }
    }
}

Eigen::VectorXcd HermitianCholesky::solve(const Eigen::VectorXcd& b) const {
    Eigen::VectorXcd y = scale_.cwiseProduct(b);
    lower_.triangularView<Eigen::Lower>().solveInPlace(y);
    lower_.adjoint().triangularView<Eigen::Upper>().solveInPlace(y);
    return scale_.cwiseProduct(y);
}

double HermitianCholesky::inverse_quadratic_form(const Eigen::VectorXcd& u) const {
    Eigen::VectorXcd y = scale_.cwiseProduct(u);
    lower_.triangularView<Eigen::Lower>().solveInPlace(y);
    return y.squaredNorm();
}

// ---------------------------------------------------------------- space

std::optional<std::size_t> TruncatedSpace::index_of(const MultiIndex& alpha) const {
    const auto it = std::find(basis.begin(), basis.end(), alpha);
    if (it == basis.end()) return std::nullopt;
    return static_cast<std::size_t>(it - basis.begin());
}

Eigen::VectorXcd TruncatedSpace::coefficients(const HolomorphicPolynomial& f) const {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim()));
    for (const auto& term : f.terms) {
        if (term.coef == cplx(0.0)) continue;
        const auto idx = index_of(term.exps);
        if (!idx) {
            std::ostringstream os;
            os << "monomial (";
            for (std::size_t i = 0; i < term.exps.size(); ++i) os << (i ? "," : "") << term.exps[i];
            os << ") is not in the truncated basis of degree " << degree;
            throw DegreeError(os.str());
        }
        c(static_cast<Eigen::Index>(*idx)) += term.coef;
    }
    return c;
}

double TruncatedSpace::norm2(const Eigen::VectorXcd& coeffs) const {
    return std::max(0.0, coeffs.dot(gram * coeffs).real());
}

double TruncatedSpace::region_norm2(const Eigen::VectorXcd& coeffs, const RegionSpec& region,
                                    const QuadratureRule& rule) const {
    const auto g = pairing_matrix(basis, basis, weight, region, rule, domain);
    return std::max(0.0, coeffs.dot(g * coeffs).real());
}

TruncatedSpace build_space(const DomainSpec& domain, const WeightSpec& weight, int degree,
                           const QuadratureRule& rule) {
    weight.validate(domain);
    if (degree < 0) throw ConfigError("basis degree must be >= 0");
    TruncatedSpace space;
    space.domain = domain;
    space.weight = weight;
    space.degree = degree;
    for (auto& alpha : graded_lex_basis(domain.dimension, degree)) {
        if (weight.has_multiplier_term() && !ideal_membership(alpha, *weight.multiplier, *weight.psi))
            continue;
        space.basis.push_back(std::move(alpha));
    }
    if (space.basis.empty()) throw ConfigError("no square-integrable monomial up to the given degree");
    space.gram = pairing_matrix(space.basis, space.basis, weight, RegionSpec::full(), rule, domain);
    // exact Hermitian symmetry
    const Eigen::MatrixXcd herm = 0.5 * (space.gram + space.gram.adjoint());
    space.gram = herm;
    space.factor = std::make_shared<const HermitianCholesky>(space.gram);
    return space;
}

// ---------------------------------------------------------------- ideals

IdealSubspace IdealSubspace::vanishing_on(const TruncatedSpace& space, const GreenData& v) {
    IdealSubspace ideal;
    for (const auto& alpha : space.basis) {
        bool member = false;
        for (int i = v.subvariety_dim; i < v.dimension; ++i)
            if (alpha[static_cast<std::size_t>(i)] > 0) member = true;
        ideal.member.push_back(member);
    }
    return ideal;
}

IdealSubspace IdealSubspace::multiplier_ideal(const TruncatedSpace& space, const SingularWeight& psi,
                                              const Rational& m) {
    IdealSubspace ideal;
    for (const auto& alpha : space.basis) ideal.member.push_back(ideal_membership(alpha, m, psi));
    return ideal;
}

std::vector<std::size_t> IdealSubspace::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < member.size(); ++i)
        if (member[i]) out.push_back(i);
    return out;
}

bool IdealSubspace::contains(const Eigen::VectorXcd& coeffs, double tol) const {
    for (std::size_t i = 0; i < member.size(); ++i)
        if (!member[i] && std::abs(coeffs(static_cast<Eigen::Index>(i))) > tol) return false;
    return true;
}

// ---------------------------------------------------------------- projection

ExtensionResult minimal_extension(const TruncatedSpace& space, const IdealSubspace& ideal,
                                  const Eigen::VectorXcd& representative) {
    if (representative.size() != static_cast<Eigen::Index>(space.dim()))
        throw DegreeError("representative has the wrong number of coefficients");
    const auto idx = ideal.indices();
    ExtensionResult result;
    result.coefficients = representative;
    if (!idx.empty()) {
        const auto k = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXcd sub(k, k);
        Eigen::VectorXcd rhs(k);
        const Eigen::VectorXcd g_rep = space.gram * representative;
        for (Eigen::Index a = 0; a < k; ++a) {
            rhs(a) = g_rep(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(a)]));
            for (Eigen::Index b = 0; b < k; ++b)
                sub(a, b) = space.gram(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(a)]),
                                       static_cast<Eigen::Index>(idx[static_cast<std::size_t>(b)]));
        }
        const HermitianCholesky chol(sub);
        const Eigen::VectorXcd proj = chol.solve(rhs);
        for (Eigen::Index a = 0; a < k; ++a)
            result.coefficients(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(a)])) -= proj(a);
    }
    result.norm2 = space.norm2(result.coefficients);
    const double norm = std::sqrt(result.norm2);
    if (norm > 0.0) {
        const Eigen::VectorXcd g_f0 = space.gram * result.coefficients;
        for (auto i : idx) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double d = std::abs(g_f0(ii)) / (norm * std::sqrt(space.gram(ii, ii).real()));
            result.orthogonality_defect = std::max(result.orthogonality_defect, d);
        }
    }
    return result;
}

// ---------------------------------------------------------------- duals

double dual_norm(const TruncatedSpace& space, const FunctionalVector& v) {
    if (v.size() != static_cast<Eigen::Index>(space.dim()))
        throw ConfigError("functional vector has the wrong length");
    if (v.isZero(0.0)) return 0.0;
    return std::sqrt(space.factor->inverse_quadratic_form(v.conjugate()));
}

DualityResult quotient_norm_via_duality(const TruncatedSpace& space, const IdealSubspace& ideal,
                                        const Eigen::VectorXcd& representative,
                                        const std::vector<FunctionalVector>& family) {
    const auto idx = ideal.indices();
    std::vector<std::size_t> accepted;
    for (std::size_t f = 0; f < family.size(); ++f) {
        const double nrm = dual_norm(space, family[f]);
        if (nrm == 0.0) continue;
        bool annihilates = true;
        for (auto i : idx) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double rel = std::abs(family[f](ii)) / (nrm * std::sqrt(space.gram(ii, ii).real()));
            if (rel > 1e-10) annihilates = false;
        }
        if (annihilates) accepted.push_back(f);
    }
    if (accepted.empty()) throw ConfigError("no functional in the family annihilates the ideal subspace");

    const auto m = static_cast<Eigen::Index>(accepted.size());
    const auto n = static_cast<Eigen::Index>(space.dim());
    // Columns conj(v_i); metric M = U^H G^{-1} U, pairing a_i = xi_i(F).
    Eigen::MatrixXcd U(n, m);
    Eigen::VectorXcd a(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& v = family[accepted[static_cast<std::size_t>(i)]];
        U.col(i) = v.conjugate();
        a(i) = v.transpose() * representative;
    }
    Eigen::MatrixXcd GiU(n, m);
    for (Eigen::Index i = 0; i < m; ++i) GiU.col(i) = space.factor->solve(U.col(i));
    Eigen::MatrixXcd M = U.adjoint() * GiU;
    M = 0.5 * (M + M.adjoint()).eval();

    DualityResult result;
    result.accepted = accepted.size();
    for (Eigen::Index i = 0; i < m; ++i) {
        const double ratio = std::abs(a(i)) / std::sqrt(M(i, i).real());
        if (ratio > result.best_single) {
            result.best_single = ratio;
            result.best_index = accepted[static_cast<std::size_t>(i)];
        }
    }
    // a^H M^+ a with a relative eigenvalue cutoff; scale rows by diag to equilibrate.
    Eigen::VectorXd d(m);
    for (Eigen::Index i = 0; i < m; ++i) d(i) = 1.0 / std::sqrt(M(i, i).real());
    const Eigen::MatrixXcd Ms = d.asDiagonal() * M * d.asDiagonal();
    const Eigen::VectorXcd as = d.asDiagonal() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(Ms);
    const double top = eig.eigenvalues().maxCoeff();
    double value2 = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        const double lambda = eig.eigenvalues()(k);
        if (lambda <= 1e-12 * top) continue;
        const cplx proj = eig.eigenvectors().col(k).dot(as);
        value2 += std::norm(proj) / lambda;
    }
    result.value = std::sqrt(value2);
    return result;
}

FunctionalVector point_evaluation(const TruncatedSpace& space, std::span<const cplx> z0) {
    FunctionalVector v(static_cast<Eigen::Index>(space.dim()));
    for (std::size_t j = 0; j < space.dim(); ++j)
        v(static_cast<Eigen::Index>(j)) = monomial_value(z0, space.basis[j]);
    return v;
}

FunctionalVector coefficient_functional(const TruncatedSpace& space, std::size_t index) {
    FunctionalVector v = FunctionalVector::Zero(static_cast<Eigen::Index>(space.dim()));
    if (index >= space.dim()) throw ConfigError("coefficient index out of range");
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

}  // namespace l2ext
