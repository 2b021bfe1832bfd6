#include "l2ext/multiplier.hpp"

#include "l2ext/error.hpp"
#include "l2ext/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Dense>

namespace l2ext {

Rational JumpSpectrum::at(std::size_t p) const {
    if (p == 0) return Rational(0);
    if (p > jumps.size()) throw ConfigError("jump index exceeds the computed spectrum");
    return jumps[p - 1].m;
}

JumpSpectrum jumping_numbers(const ResolutionData& res, const Rational& m_max) {
    res.validate();
    std::map<Rational, std::vector<int>> merged;
    for (std::size_t k = 0; k < res.divisors.size(); ++k) {
        const auto& d = res.divisors[k];
        const Rational step = res.c * Rational(d.a);
        for (std::int64_t M = 1;; ++M) {
            const Rational m = Rational(d.b + M) / step;
            if (m > m_max) break;
            merged[m].push_back(static_cast<int>(k));
        }
    }
    JumpSpectrum spec;
    for (auto& [m, ks] : merged) spec.jumps.push_back({m, std::move(ks)});
    return spec;
}

Staircase staircase_orders(const ResolutionData& res, const Rational& m) {
    Staircase st;
    st.m = m;
    for (const auto& d : res.divisors) st.orders.push_back(floor_plus(m * res.c * Rational(d.a) - Rational(d.b)));
    return st;
}

std::int64_t pullback_order(const MultiIndex& beta, const Divisor& divisor) {
    if (divisor.axis >= 0) return beta[static_cast<std::size_t>(divisor.axis)];
    return total_degree(beta);
}

bool ideal_membership(const MultiIndex& beta, const Rational& m, const SingularWeight& psi) {
    if (static_cast<int>(beta.size()) != psi.dimension)
        throw ConfigError("exponent length does not match the dimension");
    switch (psi.family) {
    case ModelFamily::principal_monomial: {
        const auto& a = psi.generators.front();
        for (std::size_t k = 0; k < beta.size(); ++k)
            if (!(Rational(beta[k]) > m * psi.c * Rational(a[k]) - Rational(1))) return false;
        return true;
    }
    case ModelFamily::maximal_ideal_power:
        return Rational(total_degree(beta)) >
               m * psi.c * Rational(psi.ideal_power()) - Rational(psi.dimension);
    }
    throw UnsupportedModelError("unsupported model family");
}

bool staircase_membership(const MultiIndex& beta, const Rational& m, const SingularWeight& psi) {
    const auto st = staircase_orders(psi.resolution, m);
    for (std::size_t k = 0; k < psi.resolution.divisors.size(); ++k)
        if (pullback_order(beta, psi.resolution.divisors[k]) < st.orders[k]) return false;
    return true;
}

double threshold_distance(const MultiIndex& beta, const Rational& m, const SingularWeight& psi) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : psi.resolution.divisors) {
        const Rational gap = m * psi.c * Rational(d.a) - Rational(d.b) -
                             Rational(pullback_order(beta, d)) - Rational(1);
        best = std::min(best, std::abs(to_double(gap)));
    }
    return best;
}

namespace {

OracleResult fit_shells(std::vector<double> log_integrals, const OracleOptions& options) {
    OracleResult result;
    result.log_shell_integrals = std::move(log_integrals);
    // log I_j ~ A - rate * j + r log j
    const int first = std::clamp(options.fit_from, 1, options.shells - 3);
    const int count = options.shells - first;
    Eigen::MatrixXd X(count, 3);
    Eigen::VectorXd y(count);
    for (int i = 0; i < count; ++i) {
        const int j = first + i;
        X(i, 0) = 1.0;
        X(i, 1) = j;
        X(i, 2) = std::log(static_cast<double>(j));
        y(i) = result.log_shell_integrals[static_cast<std::size_t>(j)];
    }
    if (!y.allFinite()) return result;
    const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(y);
    result.decay_rate = -coef(1);
    if (result.decay_rate > options.rate_tolerance) result.verdict = OracleVerdict::finite;
    else if (result.decay_rate < -options.rate_tolerance) result.verdict = OracleVerdict::infinite;
    return result;
}

}  // namespace

std::vector<OracleResult> membership_oracle_batch(std::span<const OracleInstance> instances,
                                                  const SingularWeight& psi, const DomainSpec& domain,
                                                  const QuadratureRule& rule, const OracleOptions& options) {
    const auto n = static_cast<std::size_t>(psi.dimension);
    std::vector<std::vector<double>> logs(instances.size());
    for (int j = 0; j < options.shells; ++j) {
        const double t = -1.0 - j;
        const auto grid = build_radial_grid(domain, RegionSpec::annulus(psi, t), {}, rule, true);
        std::vector<double> psi_at(grid.size()), log_s(grid.size() * n), log_w(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto s = grid.node(i);
            psi_at[i] = psi.from_moduli(s);
            log_w[i] = std::log(grid.weights[i]);
            for (std::size_t k = 0; k < n; ++k) log_s[i * n + k] = std::log(s[k]);
        }
        const double log_angular = static_cast<double>(n) * std::log(std::numbers::pi);
        std::vector<double> terms(grid.size());
        for (std::size_t q = 0; q < instances.size(); ++q) {
            const auto& [beta, m] = instances[q];
            const double mv = to_double(m);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                double e = log_w[i] - mv * psi_at[i];
                for (std::size_t k = 0; k < n; ++k)
                    if (beta[k] != 0) e += beta[k] * log_s[i * n + k];
                terms[i] = std::exp(e);
            }
            logs[q].push_back(log_angular + std::log(pairwise_sum(terms)));
        }
    }
    std::vector<OracleResult> out;
    for (std::size_t q = 0; q < instances.size(); ++q) {
        if (instances[q].second == Rational(0)) {
            OracleResult r;
            r.verdict = OracleVerdict::finite;
            out.push_back(r);
            continue;
        }
        out.push_back(fit_shells(std::move(logs[q]), options));
    }
    return out;
}

OracleResult membership_oracle(const MultiIndex& beta, const Rational& m,
                               const SingularWeight& psi, const DomainSpec& domain,
                               const QuadratureRule& rule, const OracleOptions& options) {
    const OracleInstance one{beta, m};
    return membership_oracle_batch(std::span<const OracleInstance>(&one, 1), psi, domain, rule, options).front();
}

}  // namespace l2ext
