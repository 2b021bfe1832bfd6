#include "l2ext/error.hpp"
#include "l2ext/multiplier.hpp"
#include "l2ext/polynomial.hpp"
#include "l2ext/quadrature.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace l2ext;

namespace {

ResolutionData res(std::vector<Divisor> divisors, Rational c) {
    ResolutionData r;
    r.divisors = std::move(divisors);
    r.c = c;
    return r;
}

std::vector<Rational> values(const JumpSpectrum& s) {
    std::vector<Rational> out;
    for (const auto& j : s.jumps) out.push_back(j.m);
    return out;
}

std::vector<Rational> quarter_grid(int top) {
    std::vector<Rational> out;
    for (int j = 0; j <= top; ++j) out.emplace_back(j, 4);
    return out;
}

struct ModelCase {
    const char* name;
    int n;
    std::vector<MultiIndex> generators;
};

const std::vector<ModelCase>& model_cases() {
    static const std::vector<ModelCase> cases = {
        {"log|z|^2", 1, {{1}}},
        {"log|z1^4 z2^2|^2", 2, {{4, 2}}},
        {"log(|z1|^2+|z2|^2)", 2, {{1, 0}, {0, 1}}},
    };
    return cases;
}

}  // namespace

TEST(Rationals, FloorPlus) {
    EXPECT_EQ(floor_plus(Rational(9, 10)), 0);
    EXPECT_EQ(floor_plus(Rational(1)), 1);
    EXPECT_EQ(floor_plus(Rational(-7, 2)), 0);
    EXPECT_EQ(floor_of(Rational(-7, 2)), -4);
    EXPECT_EQ(parse_rational("7/4"), Rational(7, 4));
    EXPECT_EQ(parse_rational("-2"), Rational(-2));
    EXPECT_THROW(parse_rational("1.5"), ConfigError);
    EXPECT_THROW(parse_rational("3/0"), ConfigError);
}

TEST(JumpingNumbers, Examples) {
    EXPECT_EQ(values(jumping_numbers(res({{1, 0, 0}}, Rational(1)), Rational(3))),
              (std::vector<Rational>{1, 2, 3}));
    EXPECT_EQ(values(jumping_numbers(res({{2, 1, 0}}, Rational(1)), Rational(2))),
              (std::vector<Rational>{1, Rational(3, 2), 2}));
    const auto merged = jumping_numbers(res({{1, 0, 0}, {2, 0, 1}}, Rational(1)), Rational(2));
    EXPECT_EQ(values(merged), (std::vector<Rational>{Rational(1, 2), 1, Rational(3, 2), 2}));
    EXPECT_EQ(merged.jumps[1].divisors, (std::vector<int>{0, 1}));
    EXPECT_EQ(merged.jumps[0].divisors, (std::vector<int>{1}));
}

TEST(JumpingNumbers, ModelFamilies) {
    const auto bidisc = DomainSpec::polydisc(2);
    const auto blowup = SingularWeight::make(Rational(1), {{1, 0}, {0, 1}}, bidisc);
    EXPECT_EQ(values(jumping_numbers(blowup.resolution, Rational(4))), (std::vector<Rational>{2, 3, 4}));
    const auto mono = SingularWeight::make(Rational(1), {{4, 2}}, bidisc);
    std::vector<Rational> expected;
    for (int j = 1; j <= 16; ++j) expected.emplace_back(j, 4);
    EXPECT_EQ(values(jumping_numbers(mono.resolution, Rational(4))), expected);
    EXPECT_EQ(mono.resolution.divisors.size(), 2u);
    EXPECT_EQ(blowup.resolution.divisors.front().a, 1);
    EXPECT_EQ(blowup.resolution.divisors.front().b, 1);
}

TEST(JumpingNumbers, AtIndex) {
    const auto s = jumping_numbers(res({{1, 0, 0}}, Rational(1)), Rational(3));
    EXPECT_EQ(s.at(0), Rational(0));
    EXPECT_EQ(s.at(2), Rational(2));
    EXPECT_THROW(s.at(4), ConfigError);
}

TEST(Staircase, Examples) {
    const auto r = res({{1, 0, 0}}, Rational(1));
    EXPECT_EQ(staircase_orders(r, Rational(9, 10)).orders, (std::vector<std::int64_t>{0}));
    EXPECT_EQ(staircase_orders(r, Rational(1)).orders, (std::vector<std::int64_t>{1}));
    const auto big_b = res({{1, 3, -1}}, Rational(1));
    EXPECT_EQ(staircase_orders(big_b, Rational(2)).orders, (std::vector<std::int64_t>{0}));
}

TEST(Staircase, IncrementsByOneAtEveryJump) {
    const std::vector<ResolutionData> cases = {
        res({{1, 0, 0}}, Rational(1)),
        res({{2, 1, 0}}, Rational(1)),
        res({{4, 0, 0}, {2, 0, 1}}, Rational(1)),
        res({{1, 1, -1}}, Rational(1)),
        res({{3, 2, -1}}, Rational(2, 3)),
        res({{1, 0, 0}}, Rational(2)),
    };
    for (const auto& r : cases) {
        const auto spectrum = jumping_numbers(r, Rational(5));
        for (std::size_t p = 1; p <= spectrum.size(); ++p) {
            const auto& jump = spectrum.jumps[p - 1];
            const auto now = staircase_orders(r, jump.m);
            const auto before = staircase_orders(r, spectrum.at(p - 1));
            for (int k : jump.divisors) {
                const auto& d = r.divisors[static_cast<std::size_t>(k)];
                const Rational exact = jump.m * r.c * Rational(d.a) - Rational(d.b);
                EXPECT_EQ(exact.denominator(), 1);
                EXPECT_EQ(now.orders[static_cast<std::size_t>(k)], exact.numerator());
                EXPECT_EQ(now.orders[static_cast<std::size_t>(k)], before.orders[static_cast<std::size_t>(k)] + 1);
            }
        }
    }
}

TEST(Staircase, NondecreasingAndZeroAtOrigin) {
    const auto r = res({{4, 0, 0}, {2, 0, 1}, {3, 5, -1}}, Rational(3, 2));
    EXPECT_EQ(staircase_orders(r, Rational(0)).orders, (std::vector<std::int64_t>{0, 0, 0}));
    auto prev = staircase_orders(r, Rational(0)).orders;
    for (int j = 1; j <= 60; ++j) {
        const auto cur = staircase_orders(r, Rational(j, 7)).orders;
        for (std::size_t k = 0; k < cur.size(); ++k) EXPECT_GE(cur[k], prev[k]);
        prev = cur;
    }
}

TEST(Spectrum, JumpIffStaircaseIncrements) {
    for (const auto& mc : model_cases()) {
        const auto psi = SingularWeight::make(Rational(1), mc.generators, DomainSpec::polydisc(mc.n));
        const auto spectrum = jumping_numbers(psi.resolution, Rational(4));
        for (int j = 1; j <= 48; ++j) {
            const Rational m(j, 12);
            const Rational eps(1, 1000);
            const auto at = staircase_orders(psi.resolution, m).orders;
            const auto below = staircase_orders(psi.resolution, m - eps).orders;
            const bool increments = at != below;
            const bool listed = std::any_of(spectrum.jumps.begin(), spectrum.jumps.end(),
                                            [&](const Jump& jp) { return jp.m == m; });
            EXPECT_EQ(increments, listed) << mc.name << " m=" << to_string(m);
        }
    }
}

TEST(Membership, Examples) {
    const auto disc = DomainSpec::polydisc(1);
    const auto psi = SingularWeight::make(Rational(1), {{1}}, disc);
    EXPECT_TRUE(ideal_membership({0}, Rational(1, 2), psi));
    EXPECT_FALSE(ideal_membership({0}, Rational(1), psi));
    const auto blowup = SingularWeight::make(Rational(1), {{1, 0}, {0, 1}}, DomainSpec::polydisc(2));
    EXPECT_TRUE(ideal_membership({0, 0}, Rational(3, 2), blowup));
    EXPECT_FALSE(ideal_membership({0, 0}, Rational(2), blowup));
}

TEST(Membership, AgreesWithStaircase) {
    for (const auto& mc : model_cases()) {
        const auto psi = SingularWeight::make(Rational(1), mc.generators, DomainSpec::polydisc(mc.n));
        for (const auto& beta : graded_lex_basis(mc.n, 8))
            for (const auto& m : quarter_grid(16))
                EXPECT_EQ(ideal_membership(beta, m, psi), staircase_membership(beta, m, psi))
                    << mc.name << " m=" << to_string(m);
    }
}

TEST(Membership, ClosedFormCriteria) {
    const auto bidisc = DomainSpec::polydisc(2);
    const auto mono = SingularWeight::make(Rational(3, 2), {{4, 2}}, bidisc);
    const auto blowup = SingularWeight::make(Rational(1, 2), {{2, 0}, {0, 2}}, bidisc);
    for (const auto& beta : graded_lex_basis(2, 8)) {
        for (const auto& m : quarter_grid(16)) {
            const double mc = to_double(m) * 1.5;
            EXPECT_EQ(ideal_membership(beta, m, mono), beta[0] > mc * 4 - 1 && beta[1] > mc * 2 - 1);
            // c = 1/2, d = 2: |beta| > m c d - n.
            EXPECT_EQ(ideal_membership(beta, m, blowup), total_degree(beta) > to_double(m) - 2);
        }
    }
}

TEST(Membership, ConstantOnIntervalsAndDropsAtJumps) {
    for (const auto& mc : model_cases()) {
        const auto psi = SingularWeight::make(Rational(1), mc.generators, DomainSpec::polydisc(mc.n));
        const auto spectrum = jumping_numbers(psi.resolution, Rational(4));
        const auto basis = graded_lex_basis(mc.n, 8);
        auto ideal_at = [&](const Rational& m) {
            std::vector<bool> out;
            for (const auto& b : basis) out.push_back(ideal_membership(b, m, psi));
            return out;
        };
        for (std::size_t p = 1; p <= spectrum.size(); ++p) {
            const Rational lo = spectrum.at(p - 1), hi = spectrum.at(p);
            const auto base = ideal_at(lo);
            for (int j = 1; j < 8; ++j) EXPECT_EQ(ideal_at(lo + (hi - lo) * Rational(j, 8)), base) << mc.name;
            const auto dropped = ideal_at(hi);
            // Within degree 8 the drop is visible whenever the ideal is not already empty.
            if (std::find(base.begin(), base.end(), true) != base.end())
                EXPECT_NE(dropped, base) << mc.name << " p=" << p;
            for (std::size_t i = 0; i < basis.size(); ++i)
                if (dropped[i]) EXPECT_TRUE(base[i]);
        }
    }
}

TEST(Oracle, MatchesFormulasOnDiscSweep) {
    const auto disc = DomainSpec::polydisc(1);
    const auto psi = SingularWeight::make(Rational(1), {{1}}, disc);
    const QuadratureRule rule(20, 4);
    std::vector<OracleInstance> batch;
    for (int b = 0; b <= 6; ++b)
        for (const auto& m : quarter_grid(12)) batch.emplace_back(MultiIndex{b}, m);
    const auto results = membership_oracle_batch(batch, psi, disc, rule);
    int decided = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& [beta, m] = batch[i];
        if (threshold_distance(beta, m, psi) < 1e-3) continue;
        ASSERT_NE(results[i].verdict, OracleVerdict::indeterminate) << beta[0] << " " << to_string(m);
        EXPECT_EQ(results[i].verdict == OracleVerdict::finite, ideal_membership(beta, m, psi));
        ++decided;
    }
    EXPECT_GT(decided, 40);
}

TEST(Oracle, ExactThresholdIsNotFinite) {
    const auto bidisc = DomainSpec::polydisc(2);
    const auto blowup = SingularWeight::make(Rational(1), {{1, 0}, {0, 1}}, bidisc);
    const auto r = membership_oracle({0, 0}, Rational(2), blowup, bidisc, QuadratureRule(20, 4));
    EXPECT_NE(r.verdict, OracleVerdict::finite);
    EXPECT_FALSE(ideal_membership({0, 0}, Rational(2), blowup));
    EXPECT_NEAR(r.decay_rate, 0.0, 1e-3);
}

TEST(Oracle, ZeroMultiplierAlwaysFinite) {
    const auto bidisc = DomainSpec::polydisc(2);
    const auto mono = SingularWeight::make(Rational(1), {{4, 2}}, bidisc);
    for (const MultiIndex beta : {MultiIndex{0, 0}, MultiIndex{3, 1}}) {
        const auto r = membership_oracle(beta, Rational(0), mono, bidisc, QuadratureRule(20, 4));
        EXPECT_EQ(r.verdict, OracleVerdict::finite);
    }
}

TEST(Oracle, BatchEqualsSingle) {
    const auto bidisc = DomainSpec::polydisc(2);
    const auto mono = SingularWeight::make(Rational(1), {{4, 2}}, bidisc);
    const QuadratureRule rule(20, 4);
    const std::vector<OracleInstance> batch = {{{1, 0}, Rational(1, 2)}, {{4, 3}, Rational(3, 2)}};
    const auto many = membership_oracle_batch(batch, mono, bidisc, rule);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto one = membership_oracle(batch[i].first, batch[i].second, mono, bidisc, rule);
        EXPECT_EQ(one.verdict, many[i].verdict);
        EXPECT_EQ(one.decay_rate, many[i].decay_rate);
    }
}

TEST(Resolution, Validation) {
    EXPECT_THROW(res({}, Rational(1)).validate(), ConfigError);
    EXPECT_THROW(res({{0, 0, 0}}, Rational(1)).validate(), ConfigError);
    EXPECT_THROW(res({{1, -1, 0}}, Rational(1)).validate(), ConfigError);
    EXPECT_THROW(res({{1, 0, 0}}, Rational(0)).validate(), ConfigError);
}
