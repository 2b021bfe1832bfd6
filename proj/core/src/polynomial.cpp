#include "l2ext/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace l2ext {

int total_degree(const MultiIndex& alpha) {
    return std::accumulate(alpha.begin(), alpha.end(), 0);
}

namespace {

void compositions(int n, int remaining, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
        cur[pos] = remaining;
        out.push_back(cur);
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        cur[pos] = k;
        compositions(n, remaining - k, pos + 1, cur, out);
    }
}

}  // namespace

std::vector<MultiIndex> graded_lex_basis(int n, int degree) {
    std::vector<MultiIndex> out;
    if (n == 0) return {MultiIndex{}};  // only the constant
    MultiIndex cur(static_cast<std::size_t>(n), 0);
    for (int d = 0; d <= degree; ++d) compositions(n, d, 0, cur, out);
    return out;
}

RealPolynomial RealPolynomial::constant(int variables, double value) {
    RealPolynomial p;
    p.variables = variables;
    if (value != 0.0) p.terms.push_back({value, MultiIndex(static_cast<std::size_t>(variables), 0)});
    return p;
}

double RealPolynomial::operator()(std::span<const double> v) const {
    double acc = 0.0;
    for (const auto& t : terms) {
        double m = t.coef;
        for (std::size_t i = 0; i < t.exps.size(); ++i)
            if (t.exps[i] != 0) m *= std::pow(v[i], t.exps[i]);
        acc += m;
    }
    return acc;
}

bool RealPolynomial::is_constant() const {
    return std::all_of(terms.begin(), terms.end(), [](const Term& t) {
        return std::all_of(t.exps.begin(), t.exps.end(), [](int e) { return e == 0; });
    });
}

double RealPolynomial::constant_term() const {
    double acc = 0.0;
    for (const auto& t : terms)
        if (std::all_of(t.exps.begin(), t.exps.end(), [](int e) { return e == 0; })) acc += t.coef;
    return acc;
}

RealPolynomial RealPolynomial::restrict_to_zero(std::span<const int> dropped) const {
    RealPolynomial out;
    out.variables = variables - static_cast<int>(dropped.size());
    auto is_dropped = [&](int i) {
        return std::find(dropped.begin(), dropped.end(), i) != dropped.end();
    };
    for (const auto& t : terms) {
        bool vanishes = false;
        MultiIndex kept;
        for (int i = 0; i < variables; ++i) {
            if (is_dropped(i)) {
                if (t.exps[static_cast<std::size_t>(i)] != 0) vanishes = true;
            } else {
                kept.push_back(t.exps[static_cast<std::size_t>(i)]);
            }
        }
        if (!vanishes) out.terms.push_back({t.coef, std::move(kept)});
    }
    return out;
}

HolomorphicPolynomial HolomorphicPolynomial::monomial(const MultiIndex& alpha, cplx coef) {
    HolomorphicPolynomial p;
    p.variables = static_cast<int>(alpha.size());
    p.terms.push_back({coef, alpha});
    return p;
}

cplx monomial_value(std::span<const cplx> z, const MultiIndex& alpha) {
    cplx v = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const int e = alpha[i];
        if (e > 0) {
            for (int k = 0; k < e; ++k) v *= z[i];
        } else if (e < 0) {
            for (int k = 0; k < -e; ++k) v /= z[i];
        }
    }
    return v;
}

cplx HolomorphicPolynomial::operator()(std::span<const cplx> z) const {
    cplx acc = 0.0;
    for (const auto& t : terms) acc += t.coef * monomial_value(z, t.exps);
    return acc;
}

int HolomorphicPolynomial::degree() const {
    int d = 0;
    for (const auto& t : terms) d = std::max(d, total_degree(t.exps));
    return d;
}

}  // namespace l2ext
