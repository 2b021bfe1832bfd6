#include "l2ext/bergman.hpp"
#include "l2ext/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace l2ext;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kPi = std::numbers::pi;

RealPolynomial poly(int vars, std::vector<RealPolynomial::Term> terms) {
    RealPolynomial p;
    p.variables = vars;
    p.terms = std::move(terms);
    return p;
}

// Independent reference for radial weights: pi * integral_0^1 s^a e^{-g(s)} ds.
template <class G>
double radial_reference(int a, G g) {
    return kPi * gauss_kronrod<double, 61>::integrate([&](double s) { return std::pow(s, a) * std::exp(-g(s)); }, 0.0,
                                                      1.0, 15, 1e-15);
}

Eigen::VectorXcd unit_vector(const TruncatedSpace& space, const MultiIndex& alpha, cplx coef = 1.0) {
    return space.coefficients(HolomorphicPolynomial::monomial(alpha, coef));
}

Eigen::VectorXcd random_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
    return v;
}

std::vector<FunctionalVector> coefficient_family(const TruncatedSpace& space, const IdealSubspace& ideal) {
    std::vector<FunctionalVector> family;
    for (std::size_t i = 0; i < space.dim(); ++i)
        if (!ideal.member[i]) family.push_back(coefficient_functional(space, i));
    return family;
}

WeightSpec shifted_gaussian() {
    // |z - 1/2|^2 = x^2 - x + 1/4 + y^2
    return WeightSpec::plain(BaseWeight::pointwise(poly(2, {{1.0, {2, 0}}, {-1.0, {1, 0}}, {0.25, {0, 0}}, {1.0, {0, 2}}})));
}

}  // namespace

TEST(HermitianCholeskyTest, SolvesAgainstEigen) {
    std::mt19937_64 rng(3);
    Eigen::MatrixXcd a(6, 6);
    for (int i = 0; i < 6; ++i) a.col(i) = random_vector(6, rng);
    const Eigen::MatrixXcd h = a.adjoint() * a + Eigen::MatrixXcd::Identity(6, 6);
    const HermitianCholesky chol(h);
    const auto b = random_vector(6, rng);
    const Eigen::VectorXcd ref = h.llt().solve(b);
    EXPECT_LT((chol.solve(b) - ref).norm() / ref.norm(), 1e-13);
    const double q = b.dot(ref).real();
    EXPECT_NEAR(chol.inverse_quadratic_form(b), q, 1e-12 * q);
    EXPECT_GT(chol.smallest_pivot(), 0.0);
}

TEST(HermitianCholeskyTest, EquilibrationHandlesScaledDiagonal) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
    h(0, 0) = 1e-30;
    h(1, 1) = 1.0;
    h(2, 2) = 1e30;
    const HermitianCholesky chol(h);
    EXPECT_NEAR(chol.smallest_pivot(), 1.0, 1e-15);
    Eigen::VectorXcd b(3);
    b << 1e-30, 1.0, 1e30;
    const auto x = chol.solve(b);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(x(i).real(), 1.0, 1e-14);
}

TEST(HermitianCholeskyTest, SingularRaisesWithPivot) {
    Eigen::MatrixXcd h(2, 2);
    h << 1.0, 1.0, 1.0, 1.0;
    try {
        HermitianCholesky chol(h);
        FAIL() << "expected ConditioningError";
    } catch (const ConditioningError& e) {
        EXPECT_LT(e.smallest_pivot(), 1e-13);
    }
}

TEST(BuildSpace, FlatDiscGram) {
    const auto dom = DomainSpec::polydisc(1);
    const auto space = build_space(dom, WeightSpec::plain(BaseWeight::zero()), 1, QuadratureRule::defaults_for(1));
    ASSERT_EQ(space.dim(), 2u);
    EXPECT_NEAR(space.gram(0, 0).real(), kPi, 1e-14);
    EXPECT_NEAR(space.gram(1, 1).real(), kPi / 2, 1e-14);
    EXPECT_EQ(space.gram(0, 1), cplx(0.0));
    EXPECT_EQ(space.gram(1, 0), cplx(0.0));
}

TEST(BuildSpace, ToricGramDiagonal) {
    const auto dom = DomainSpec::polydisc(1);
    const auto w = WeightSpec::plain(BaseWeight::radial(poly(1, {{1.0, {1}}, {0.5, {2}}})));
    const auto space = build_space(dom, w, 5, QuadratureRule::defaults_for(1));
    for (Eigen::Index i = 0; i < 6; ++i) {
        for (Eigen::Index j = 0; j < 6; ++j)
            if (i != j) EXPECT_EQ(space.gram(i, j), cplx(0.0));
        const double ref = radial_reference(static_cast<int>(i), [](double s) { return s + 0.5 * s * s; });
        EXPECT_NEAR(space.gram(i, i).real(), ref, 1e-13 * ref);
    }
}

TEST(BuildSpace, NonToricOffDiagonal) {
    const auto dom = DomainSpec::polydisc(1);
    const auto w = WeightSpec::plain(BaseWeight::pointwise(poly(2, {{1.0, {1, 0}}})));
    const auto space = build_space(dom, w, 1, QuadratureRule::defaults_for(1));
    // <z, 1> = integral of x e^{-x}: imaginary parts cancel by symmetry.
    const double ref = gauss_kronrod<double, 61>::integrate(
        [](double x) { return 2.0 * std::sqrt(1.0 - x * x) * x * std::exp(-x); }, -1.0, 1.0, 15, 1e-15);
    EXPECT_LT(ref, 0.0);
    EXPECT_NEAR(space.gram(0, 1).real(), ref, 1e-12 * std::abs(ref));
    EXPECT_NEAR(space.gram(0, 1).imag(), 0.0, 1e-14);
    const auto fine = build_space(dom, w, 1, QuadratureRule::defaults_for(1).refined());
    EXPECT_NEAR(space.gram(0, 1).real(), fine.gram(0, 1).real(), 1e-13);
}

TEST(BuildSpace, GramHermitianPositiveAndGradedLex) {
    const auto dom = DomainSpec::polydisc(2);
    const auto w = WeightSpec::plain(BaseWeight::pointwise(poly(4, {{1.0, {2, 0, 0, 0}}, {0.5, {0, 0, 1, 0}}})));
    const auto space = build_space(dom, w, 4, QuadratureRule(24, 16));
    EXPECT_LT((space.gram - space.gram.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(space.factor->smallest_pivot(), 0.0);
    EXPECT_EQ(space.basis, graded_lex_basis(2, 4));
    EXPECT_EQ(space.basis[1], (MultiIndex{1, 0}));
    EXPECT_EQ(space.basis[2], (MultiIndex{0, 1}));
}

TEST(BuildSpace, MultiplierFiltersNonIntegrable) {
    const auto dom = DomainSpec::polydisc(1);
    const auto psi = SingularWeight::make(Rational(1), {{1}}, dom);
    const auto w = WeightSpec::plain(BaseWeight::zero()).with_multiplier(psi, Rational(2));
    const auto space = build_space(dom, w, 5, QuadratureRule::defaults_for(1));
    ASSERT_EQ(space.dim(), 4u);
    EXPECT_EQ(space.basis.front(), MultiIndex{2});
    // |z|^{2a} |z|^{-4}: pi / (a - 1).
    for (std::size_t i = 0; i < 4; ++i) {
        const double ref = kPi / (static_cast<double>(space.basis[i][0]) - 1.0);
        EXPECT_NEAR(space.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(), ref, 1e-10 * ref);
    }
}

TEST(BuildSpace, CoefficientsOutsideBasis) {
    const auto space = build_space(DomainSpec::polydisc(1), WeightSpec::plain(BaseWeight::zero()), 3,
                                   QuadratureRule::defaults_for(1));
    EXPECT_THROW(space.coefficients(HolomorphicPolynomial::monomial({4})), DegreeError);
}

TEST(Ideal, VanishingOnCoordinateSubspace) {
    const auto space = build_space(DomainSpec::polydisc(2), WeightSpec::plain(BaseWeight::zero()), 5,
                                   QuadratureRule(12, 8));
    const auto ideal = IdealSubspace::vanishing_on(space, GreenData::coordinate_subspace(2, 1));
    for (std::size_t i = 0; i < space.dim(); ++i) EXPECT_EQ(ideal.member[i], space.basis[i][1] > 0);
    const auto origin = IdealSubspace::vanishing_on(space, GreenData::point(2));
    for (std::size_t i = 0; i < space.dim(); ++i) EXPECT_EQ(origin.member[i], total_degree(space.basis[i]) > 0);
}

TEST(Ideal, MonotoneUnderCoordinateMultiplication) {
    const auto dom = DomainSpec::polydisc(2);
    const auto space = build_space(dom, WeightSpec::plain(BaseWeight::zero()), 8, QuadratureRule(12, 8));
    for (auto gens : {std::vector<MultiIndex>{{4, 2}}, std::vector<MultiIndex>{{1, 0}, {0, 1}}}) {
        const auto psi = SingularWeight::make(Rational(1), gens, dom);
        for (int j = 1; j <= 12; ++j) {
            const auto ideal = IdealSubspace::multiplier_ideal(space, psi, Rational(j, 4));
            for (std::size_t i = 0; i < space.dim(); ++i) {
                if (!ideal.member[i]) continue;
                for (int axis = 0; axis < 2; ++axis) {
                    auto up = space.basis[i];
                    ++up[static_cast<std::size_t>(axis)];
                    if (const auto k = space.index_of(up)) EXPECT_TRUE(ideal.member[*k]);
                }
            }
        }
    }
}

TEST(MinimalExtension, FlatDisc) {
    const auto space = build_space(DomainSpec::polydisc(1), WeightSpec::plain(BaseWeight::zero()), 16,
                                   QuadratureRule::defaults_for(1));
    const auto ideal = IdealSubspace::vanishing_on(space, GreenData::point(1));
    const auto r = minimal_extension(space, ideal, unit_vector(space, {0}));
    EXPECT_NEAR(r.norm2, kPi, 1e-13);
    EXPECT_NEAR(std::abs(r.coefficients(0) - 1.0), 0.0, 1e-15);
    EXPECT_LT(r.coefficients.tail(r.coefficients.size() - 1).norm(), 1e-15);
}

TEST(MinimalExtension, RadialWeightNeedsNoCorrection) {
    const auto w = WeightSpec::plain(BaseWeight::radial(poly(1, {{1.0, {1}}, {-0.3, {2}}, {0.1, {3}}})));
    const auto space = build_space(DomainSpec::polydisc(1), w, 12, QuadratureRule::defaults_for(1));
    const auto ideal = IdealSubspace::vanishing_on(space, GreenData::point(1));
    const auto rep = space.coefficients([] {
        HolomorphicPolynomial f;
        f.variables = 1;
        f.terms = {{1.0, {0}}, {cplx(0.5, 2.0), {1}}, {-3.0, {4}}};
        return f;
    }());
    const auto r = minimal_extension(space, ideal, rep);
    const double ref = radial_reference(0, [](double s) { return s - 0.3 * s * s + 0.1 * s * s * s; });
    EXPECT_NEAR(r.norm2, ref, 1e-13 * ref);
    EXPECT_LT(r.coefficients.tail(r.coefficients.size() - 1).norm(), 1e-14);
}

TEST(MinimalExtension, IdealRepresentativeGivesZero) {
    const auto space = build_space(DomainSpec::polydisc(1), shifted_gaussian(), 10, QuadratureRule::defaults_for(1));
    const auto ideal = IdealSubspace::vanishing_on(space, GreenData::point(1));
    const auto r = minimal_extension(space, ideal, unit_vector(space, {3}, cplx(2.0, -1.0)));
    EXPECT_LT(r.norm2, 1e-24);
}

TEST(MinimalExtension, OrthogonalAndSameClass) {
    const auto space = build_space(DomainSpec::polydisc(1), shifted_gaussian(), 14, QuadratureRule::defaults_for(1));
    const auto ideal = IdealSubspace::vanishing_on(space, GreenData::point(1));
    std::mt19937_64 rng(5);
    const auto rep = random_vector(space.dim(), rng);
    const auto r = minimal_extension(space, ideal, rep);
    EXPECT_LT(r.orthogonality_defect, 1e-8);
    EXPECT_TRUE(ideal.contains(r.coefficients - rep, 1e-12 * rep.norm()));
    EXPECT_LE(r.norm2, space.norm2(rep));
    const Eigen::VectorXcd proj = rep - r.coefficients;
    EXPECT_NEAR(space.norm2(rep), r.norm2 + space.norm2(proj), 1e-10 * space.norm2(rep));
}

TEST(MinimalExtension, ScaleInvariance) {
    const auto space = build_space(DomainSpec::polydisc(1), shifted_gaussian(), 10, QuadratureRule::defaults_for(1));
    const auto ideal = IdealSubspace::vanishing_on(space, GreenData::point(1));
    std::mt19937_64 rng(9);
    const auto rep = random_vector(space.dim(), rng);
    const cplx lambda(-2.5, 1.5);
    const auto a = minimal_extension(space, ideal, rep);
    const auto b = minimal_extension(space, ideal, lambda * rep);
    EXPECT_NEAR(b.norm2, std::norm(lambda) * a.norm2, 1e-12 * b.norm2);
    EXPECT_LT((b.coefficients - lambda * a.coefficients).norm(), 1e-12 * b.coefficients.norm());
}

TEST(MinimalExtension, NonincreasingInDegree) {
    const auto ideal_for = [](const TruncatedSpace& s) { return IdealSubspace::vanishing_on(s, GreenData::point(1)); };
    double prev = std::numeric_limits<double>::infinity();
    for (int d = 2; d <= 16; d += 2) {
        const auto space = build_space(DomainSpec::polydisc(1), shifted_gaussian(), d, QuadratureRule::defaults_for(1));
        const double v = minimal_extension(space, ideal_for(space), unit_vector(space, {0})).norm2;
        EXPECT_LE(v, prev * (1 + 1e-12));
        prev = v;
    }
}

TEST(DualNorm, Examples) {
    const auto space = build_space(DomainSpec::polydisc(1), WeightSpec::plain(BaseWeight::zero()), 9,
                                   QuadratureRule::defaults_for(1));
    const cplx origin[] = {cplx(0.0)};
    EXPECT_NEAR(dual_norm(space, point_evaluation(space, origin)), 1.0 / std::sqrt(kPi), 1e-15);
    EXPECT_EQ(dual_norm(space, FunctionalVector::Zero(10)), 0.0);

    std::mt19937_64 rng(1);
    const auto v = random_vector(space.dim(), rng);
    double diag = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) diag += std::norm(v(j)) / space.gram(j, j).real();
    EXPECT_NEAR(dual_norm(space, v), std::sqrt(diag), 1e-13 * std::sqrt(diag));
}

TEST(DualNorm, IsANorm) {
    const auto space = build_space(DomainSpec::polydisc(1), shifted_gaussian(), 10, QuadratureRule::defaults_for(1));
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_vector(space.dim(), rng);
        const auto v = random_vector(space.dim(), rng);
        const cplx lambda(std::normal_distribution<double>(0, 2)(rng), 0.7);
        const double nu = dual_norm(space, u);
        EXPECT_NEAR(dual_norm(space, lambda * u), std::abs(lambda) * nu, 1e-10 * std::abs(lambda) * nu);
        EXPECT_LE(dual_norm(space, u + v), (nu + dual_norm(space, v)) * (1 + 1e-10));
    }
}

TEST(Duality, Examples) {
    const auto space = build_space(DomainSpec::polydisc(1), WeightSpec::plain(BaseWeight::zero()), 8,
                                   QuadratureRule::defaults_for(1));
    const auto ideal = IdealSubspace::vanishing_on(space, GreenData::point(1));
    const auto rep = unit_vector(space, {0});
    const cplx origin[] = {cplx(0.0)};
    const auto ev = point_evaluation(space, origin);
    EXPECT_NEAR(quotient_norm_via_duality(space, ideal, rep, {ev}).value, std::sqrt(kPi), 1e-14);
    EXPECT_NEAR(quotient_norm_via_duality(space, ideal, rep, {FunctionalVector(7.0 * ev)}).value, std::sqrt(kPi), 1e-14);

    // The evaluation at 1/2 does not annihilate the ideal and is dropped.
    const cplx half[] = {cplx(0.5)};
    const auto r = quotient_norm_via_duality(space, ideal, rep, {point_evaluation(space, half), ev});
    EXPECT_EQ(r.accepted, 1u);
    EXPECT_EQ(r.best_index, 1u);
    EXPECT_THROW(quotient_norm_via_duality(space, ideal, rep, {point_evaluation(space, half)}), ConfigError);

    // A functional vanishing on F only.
    const auto z_coef = coefficient_functional(space, 1);
    IdealSubspace none{std::vector<bool>(space.dim(), false)};
    EXPECT_EQ(quotient_norm_via_duality(space, none, rep, {z_coef}).value, 0.0);
}

TEST(Duality, SpanningFamilyMatchesProjection) {
    const auto dom = DomainSpec::polydisc(2);
    const auto w = WeightSpec::plain(BaseWeight::pointwise(poly(4, {{1.0, {2, 0, 0, 0}}, {0.5, {0, 1, 1, 0}}, {0.3, {0, 0, 0, 2}}})));
    const auto space = build_space(dom, w, 6, QuadratureRule(24, 16));
    const auto ideal = IdealSubspace::vanishing_on(space, GreenData::coordinate_subspace(2, 1));
    std::mt19937_64 rng(17);
    const auto rep = random_vector(space.dim(), rng);
    const double proj = std::sqrt(minimal_extension(space, ideal, rep).norm2);
    const auto d = quotient_norm_via_duality(space, ideal, rep, coefficient_family(space, ideal));
    EXPECT_NEAR(d.value, proj, 1e-8 * proj);
    EXPECT_LE(d.best_single, d.value * (1 + 1e-12));
}

TEST(WeightMonotonicity, NormNonincreasingInSlope) {
    const auto dom = DomainSpec::polydisc(1);
    auto base = WeightSpec::plain(BaseWeight::zero());
    base.green = GreenData::point(1);
    std::mt19937_64 rng(33);
    std::vector<Eigen::VectorXcd> vectors;
    for (int i = 0; i < 5; ++i) vectors.push_back(random_vector(9, rng));
    std::vector<double> prev(vectors.size(), std::numeric_limits<double>::infinity());
    for (double p : {0.0, 1.0, 2.0, 4.0, 8.0}) {
        const auto space = build_space(dom, base.deformed(PoleKind::green, -2.0, p), 8, QuadratureRule::defaults_for(1));
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            const double v = space.norm2(vectors[i]);
            EXPECT_LE(v, prev[i] * (1 + 1e-13));
            prev[i] = v;
        }
    }
}

TEST(RegionNorm, SublevelOfConstant) {
    const auto dom = DomainSpec::polydisc(1);
    const auto space = build_space(dom, WeightSpec::plain(BaseWeight::zero()), 4, QuadratureRule::defaults_for(1));
    const auto psi = SingularWeight::make(Rational(1), {{1}}, dom);
    const double v = space.region_norm2(unit_vector(space, {0}), RegionSpec::sublevel(psi, -2.0), QuadratureRule::defaults_for(1));
    EXPECT_NEAR(v, kPi * std::exp(-2.0), 1e-13 * v);
}
