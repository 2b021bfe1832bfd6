#include "l2ext/experiments.hpp"

#include "l2ext/bergman.hpp"
#include "l2ext/error.hpp"
#include "l2ext/functionals.hpp"
#include "l2ext/multiplier.hpp"
#include "l2ext/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace l2ext {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string str(const MultiIndex& a) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ")";
}

HolomorphicPolynomial lift(const HolomorphicPolynomial& f, int n) {
    HolomorphicPolynomial out;
    out.variables = n;
    for (const auto& t : f.terms) {
        MultiIndex e = t.exps;
        e.resize(static_cast<std::size_t>(n), 0);
        out.terms.push_back({t.coef, std::move(e)});
    }
    return out;
}

/// integral of |f|^2 e^{-w} over a region, from the monomial pairings of f's terms.
double norm2_poly(const HolomorphicPolynomial& f, const WeightSpec& w, const RegionSpec& region,
                  const QuadratureRule& rule, const DomainSpec& domain) {
    std::vector<MultiIndex> exps;
    for (const auto& t : f.terms) exps.push_back(t.exps);
    if (exps.empty()) return 0.0;
    const auto M = pairing_matrix(exps, exps, w, region, rule, domain);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < exps.size(); ++i)
        for (std::size_t j = 0; j < exps.size(); ++j)
            acc += std::conj(f.terms[i].coef) * f.terms[j].coef *
                   M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return std::max(0.0, acc.real());
}

WeightSpec green_deformed(const ExperimentConfig& cfg, double t, double p) {
    WeightSpec w = WeightSpec::plain(cfg.phi);
    w.green = *cfg.green;
    return w.deformed(PoleKind::green, t, p);
}

/// Worst value of (next - current) along a series that should not increase.
double worst_increase(const std::vector<double>& v) {
    double worst = -kInf;
    for (std::size_t i = 1; i < v.size(); ++i) worst = std::max(worst, v[i] - v[i - 1]);
    return v.size() < 2 ? 0.0 : worst;
}

std::vector<double> logs(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(std::log(x));
    return out;
}

std::vector<double> p_values(const ExperimentConfig& cfg) {
    if (!cfg.p_grid.empty()) return cfg.p_grid;
    return {*cfg.p};
}

struct Solved {
    TruncatedSpace space;
    IdealSubspace ideal;
    Eigen::VectorXcd rep;
    ExtensionResult ext;
};

Solved solve_vanishing(const ExperimentConfig& cfg, const WeightSpec& w, int degree,
                       const HolomorphicPolynomial& rep, const QuadratureRule& rule) {
    Solved s{build_space(cfg.domain, w, degree, rule), {}, {}, {}};
    s.ideal = IdealSubspace::vanishing_on(s.space, *cfg.green);
    s.rep = s.space.coefficients(rep);
    s.ext = minimal_extension(s.space, s.ideal, s.rep);
    return s;
}

Table degree_table(const std::string& name, const std::vector<std::pair<int, double>>& rows) {
    Table t{name, {"degree", "value"}, {}};
    for (const auto& [d, v] : rows) t.rows.push_back({std::to_string(d), format_number(v)});
    return t;
}

}  // namespace

// ---------------------------------------------------------------- extrapolation

Extrapolation extrapolate_limit(std::span<const double> x, std::span<const double> values) {
    if (x.size() != values.size()) throw ConfigError("extrapolation needs as many values as grid points");
    if (x.size() < 4) throw ConfigError("extrapolation needs at least 4 points");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] < x[i - 1])) throw ConfigError("extrapolation grid must be strictly decreasing");

    const std::size_t n0 = x.size() - 4;
    const double xs[4] = {x[n0], x[n0 + 1], x[n0 + 2], x[n0 + 3]};
    const double ys[4] = {values[n0], values[n0 + 1], values[n0 + 2], values[n0 + 3]};

    Extrapolation out;
    out.limit = ys[3];
    double spread = 0.0, scale = 0.0;
    for (double y : ys) {
        spread = std::max(spread, std::abs(y - ys[3]));
        scale = std::max(scale, std::abs(y));
    }
    if (spread <= 1e-14 * scale || spread == 0.0) {
        out.error = spread;
        return out;
    }

    double diff[3], slope[3], mid[3];
    for (int i = 0; i < 3; ++i) {
        diff[i] = ys[i + 1] - ys[i];
        slope[i] = diff[i] / (xs[i + 1] - xs[i]);
        mid[i] = 0.5 * (xs[i] + xs[i + 1]);
    }
    const bool up = diff[0] > 0.0;
    for (double d : diff) {
        if (d == 0.0 || (d > 0.0) != up) {
            out.indeterminate = true;
            out.reason = "tail is not monotone";
            return out;
        }
    }
    // slope ~ c1 kappa e^{kappa x}
    double ksum = 0.0;
    for (int i = 0; i < 2; ++i) ksum += std::log(slope[i] / slope[i + 1]) / (mid[i] - mid[i + 1]);
    out.kappa = 0.5 * ksum;
    if (!(out.kappa > 0.0) || !std::isfinite(out.kappa)) {
        out.indeterminate = true;
        out.reason = "fitted rate is not positive";
        return out;
    }
    // least squares for (c0, c1) with kappa fixed
    double s1 = 0, se = 0, see = 0, sy = 0, sey = 0;
    for (int i = 0; i < 4; ++i) {
        const double e = std::exp(out.kappa * (xs[i] - xs[3]));
        s1 += 1;
        se += e;
        see += e * e;
        sy += ys[i];
        sey += e * ys[i];
    }
    const double det = s1 * see - se * se;
    const double c1 = (s1 * sey - se * sy) / det;  // coefficient of e^{kappa (x - x_last)}
    out.limit = (sy - c1 * se) / s1;
    out.error = std::abs(c1);
    return out;
}

// ---------------------------------------------------------------- ot-optimal

VerificationReport run_ot_optimal(const ExperimentConfig& cfg) {
    VerificationReport rep;
    rep.experiment = to_string(cfg.kind);
    rep.id = cfg.id;
    const auto& gd = *cfg.green;
    const auto rule = cfg.rule();
    const int n = cfg.domain.dimension;
    const int l = gd.subvariety_dim;

    const auto sandwich = check_green_sandwich(gd, cfg.domain);
    rep.checks.push_back(check_le_abs("green-sandwich", "log d^2 - B <= G <= log d^2 + A on the sample grid",
                                      -sandwich.worst_slack, 0.0, 1e-12));
    rep.checks.push_back(check_le_abs("green-negative", "G <= 0 on the sample grid", sandwich.max_G, 0.0, 1e-12));
    const auto psh = check_psh(cfg.phi, cfg.domain, 64);
    rep.checks.push_back(check_le_abs("phi-psh", "sampled Levi form of phi is nonnegative",
                                      -psh.min_levi_value, 0.0, 1e-6));

    const auto F = lift(*cfg.f, n);
    const auto weight = WeightSpec::plain(cfg.phi);
    const auto main = solve_vanishing(cfg, weight, cfg.degree, F, rule);
    const double lhs = main.ext.norm2;

    const XiSubvariety xi{gd, cfg.phi, *cfg.f};
    const double rhs = xi_subvariety(xi, cfg.domain, F, rule).real();

    rep.checks.push_back(check_le("extension-inequality",
                                  "||F0||^2 <= sigma_k * integral over V of |f|^2 e^{-phi + kB}", lhs, rhs,
                                  cfg.tol.inequality));
    const bool equal = std::abs(lhs - rhs) <= cfg.tol.equality * std::abs(rhs);
    rep.checks.push_back(info("ratio", "LHS / RHS", rhs > 0 ? lhs / rhs : 0.0, 1.0,
                              equal ? "equality within tolerance" : "strict"));
    rep.checks.push_back(check_le_abs("orthogonality", "F0 is orthogonal to every ideal monomial",
                                      main.ext.orthogonality_defect, 0.0, cfg.tol.orthogonality));

    std::vector<FunctionalVector> family;
    for (const auto& gamma : graded_lex_basis(l, cfg.degree)) {
        const XiSubvariety member{gd, cfg.phi, HolomorphicPolynomial::monomial(gamma)};
        family.push_back(xi_subvariety_vector(member, main.space, rule));
    }
    const auto dual = quotient_norm_via_duality(main.space, main.ideal, main.rep, family);
    rep.checks.push_back(check_eq("duality", "sup over V-functionals of |xi(F)| / ||xi|| equals ||F0||",
                                  dual.value, std::sqrt(lhs), cfg.tol.duality));

    std::vector<std::pair<int, double>> by_degree;
    if (cfg.degree - 2 >= F.degree()) {
        const auto coarse = solve_vanishing(cfg, weight, cfg.degree - 2, F, rule);
        by_degree.push_back({cfg.degree - 2, coarse.ext.norm2});
        rep.checks.push_back(check_eq("degree-convergence", "||F0||^2 at degree D-2 vs D", coarse.ext.norm2, lhs,
                                      10 * cfg.tol.inequality));
    }
    by_degree.push_back({cfg.degree, lhs});
    rep.tables.push_back(degree_table("convergence_degree", by_degree));
    if (cfg.phi.is_toric() || n == 1) {
        const QuadratureRule half(std::max(2, cfg.radial_order / 2), std::max(1, cfg.angular_order / 2));
        const auto coarse = solve_vanishing(cfg, weight, cfg.degree, F, half);
        rep.tables.push_back(Table{"convergence_quadrature",
                                   {"radial", "angular", "value"},
                                   {{std::to_string(half.radial_order()), std::to_string(half.angular_order()),
                                     format_number(coarse.ext.norm2)},
                                    {std::to_string(cfg.radial_order), std::to_string(cfg.angular_order),
                                     format_number(lhs)}}});
    }

    Series s{"ot_optimal", "degree", "norm2_F0", "sigma_k_integral_V", "ratio", {}};
    s.rows.push_back({static_cast<double>(cfg.degree), lhs, rhs, rhs > 0 ? lhs / rhs : 0.0,
                      rep.find("extension-inequality")->status == CheckStatus::pass ? "pass" : "fail"});
    rep.series.push_back(s);
    return rep;
}

// ---------------------------------------------------------------- monotone-t

VerificationReport run_monotone_t(const ExperimentConfig& cfg) {
    VerificationReport rep;
    rep.experiment = to_string(cfg.kind);
    rep.id = cfg.id;
    const auto& gd = *cfg.green;
    const auto rule = cfg.rule();
    const int n = cfg.domain.dimension;
    const int k = gd.codim();
    const auto F = lift(*cfg.f, n);

    const auto base = solve_vanishing(cfg, WeightSpec::plain(cfg.phi), cfg.degree, F, rule);
    const double lhs0 = base.ext.norm2;
    const XiSubvariety xi{gd, cfg.phi, cfg.g ? *cfg.g : *cfg.f};

    for (double p : p_values(cfg)) {
        const std::string tag = "[p=" + fmt(p) + "]";
        std::vector<double> norm2, chain, xi_norm2, xi_q;
        for (double t : cfg.t_grid) {
            const auto s = solve_vanishing(cfg, green_deformed(cfg, t, p), cfg.degree, F, rule);
            norm2.push_back(s.ext.norm2);
            chain.push_back(std::exp(-k * t) * s.ext.norm2);
            const double dn = dual_norm(s.space, xi_subvariety_vector(xi, s.space, rule));
            xi_norm2.push_back(dn * dn);
            xi_q.push_back(k * t + std::log(dn * dn));
        }
        // t descends along the grid: the chain must not decrease, k t + log ||xi||^2 must not increase
        std::vector<double> neg_log_chain;
        for (double c : chain) neg_log_chain.push_back(-std::log(c));
        rep.checks.push_back(check_le_abs("chain-monotone" + tag,
                                          "e^{-kt} ||F_{t,p}||^2 is nonincreasing in t (max log increase)",
                                          worst_increase(neg_log_chain), 0.0, cfg.tol.monotone));
        rep.checks.push_back(check_le("chain-endpoint" + tag, "||F0||^2 <= e^{-kt} ||F_{t,p}||^2 for every t",
                                      lhs0, *std::min_element(chain.begin(), chain.end()), cfg.tol.inequality));
        rep.checks.push_back(check_le_abs("xi-monotone" + tag,
                                          "k t + log ||xi_g||^2_{t,p} is nondecreasing in t (max log decrease)",
                                          worst_increase(xi_q), 0.0, cfg.tol.monotone));

        Series sc{"chain_p" + fmt(p), "t", "norm2_F_tp", "norm2_F0", "scaled_chain", {}};
        Series sx{"xi_p" + fmt(p), "t", "dual_norm2", "", "kt_plus_log_dual_norm2", {}};
        for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
            const bool ok_c = i == 0 || -std::log(chain[i]) + std::log(chain[i - 1]) <= cfg.tol.monotone;
            const bool ok_x = i == 0 || xi_q[i] - xi_q[i - 1] <= cfg.tol.monotone;
            sc.rows.push_back({cfg.t_grid[i], norm2[i], lhs0, chain[i], ok_c ? "pass" : "fail"});
            sx.rows.push_back({cfg.t_grid[i], xi_norm2[i], 0.0, xi_q[i], ok_x ? "pass" : "fail"});
        }
        rep.series.push_back(sc);
        rep.series.push_back(sx);
    }

    std::vector<std::pair<int, double>> by_degree;
    if (cfg.degree - 2 >= F.degree()) {
        const auto coarse = solve_vanishing(cfg, WeightSpec::plain(cfg.phi), cfg.degree - 2, F, rule);
        by_degree.push_back({cfg.degree - 2, coarse.ext.norm2});
        rep.checks.push_back(check_eq("degree-convergence", "||F0||^2 at degree D-2 vs D", coarse.ext.norm2, lhs0,
                                      10 * cfg.tol.inequality));
    }
    by_degree.push_back({cfg.degree, lhs0});
    rep.tables.push_back(degree_table("convergence_degree", by_degree));
    return rep;
}

// ---------------------------------------------------------------- p-limit

VerificationReport run_p_limit(const ExperimentConfig& cfg) {
    VerificationReport rep;
    rep.experiment = to_string(cfg.kind);
    rep.id = cfg.id;
    const auto& gd = *cfg.green;
    const auto rule = cfg.rule();
    const double t = *cfg.t;
    const auto F = cfg.representative ? *cfg.representative : lift(*cfg.f, cfg.domain.dimension);

    const ToricFunction G = [gd](std::span<const double> s) { return gd.G_from_moduli(s); };
    const double target = norm2_poly(F, WeightSpec::plain(cfg.phi), RegionSpec::sublevel(G, t), rule, cfg.domain);

    std::vector<double> values;
    for (double p : cfg.p_grid) values.push_back(norm2_poly(F, green_deformed(cfg, t, p), RegionSpec::full(), rule, cfg.domain));

    rep.checks.push_back(check_le_abs("p-monotone", "||F||^2_{t,p} is nonincreasing in p (max log increase)",
                                      worst_increase(logs(values)), 0.0, cfg.tol.monotone));
    rep.checks.push_back(check_le("p-above-target", "sublevel integral <= ||F||^2_{t,p} for every p", target,
                                  *std::min_element(values.begin(), values.end()), cfg.tol.inequality));
    rep.checks.push_back(check_eq("p-limit", "||F||^2_{t,p} at the largest p matches the sublevel integral",
                                  values.back(), target, cfg.tol.limit));

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (cfg.p_grid[i] > 0.0) {
            xs.push_back(-std::log(cfg.p_grid[i]));
            ys.push_back(values[i]);
        }
    if (xs.size() >= 4) {
        const auto ex = extrapolate_limit(xs, ys);
        std::ostringstream note;
        note << "exp-tail fit in -log p; error bar " << format_number(ex.error)
             << (ex.indeterminate ? "; indeterminate: " + ex.reason : std::string());
        rep.checks.push_back(info("p-limit-extrapolated", "extrapolated p -> infinity value vs sublevel integral",
                                  ex.limit, target, note.str()));
    }

    Series s{"p_limit", "p", "norm2_tp", "sublevel_norm2", "ratio_to_target", {}};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool ok = i == 0 || std::log(values[i]) - std::log(values[i - 1]) <= cfg.tol.monotone;
        s.rows.push_back({cfg.p_grid[i], values[i], target, values[i] / target, ok ? "pass" : "fail"});
    }
    rep.series.push_back(s);
    return rep;
}

// ---------------------------------------------------------------- convexity

VerificationReport run_convexity(const ExperimentConfig& cfg) {
    VerificationReport rep;
    rep.experiment = to_string(cfg.kind);
    rep.id = cfg.id;
    const auto rule = cfg.rule();
    const int n = cfg.domain.dimension;

    auto functionals = cfg.functionals;
    if (functionals.empty()) {
        FunctionalChoice ev;
        ev.point.assign(static_cast<std::size_t>(n), cplx(0.0));
        FunctionalChoice co;
        co.kind = FunctionalChoice::Kind::coefficient;
        co.exps.assign(static_cast<std::size_t>(n), 0);
        co.exps[0] = 1;
        functionals = {ev, co};
    }

    std::vector<std::vector<double>> log_norms(functionals.size());
    for (double t : cfg.t_grid) {
        const auto space = build_space(cfg.domain, green_deformed(cfg, t, *cfg.p), cfg.degree, rule);
        for (std::size_t f = 0; f < functionals.size(); ++f) {
            const auto& choice = functionals[f];
            FunctionalVector v;
            if (choice.kind == FunctionalChoice::Kind::evaluation) {
                cfg.domain.require_contains(choice.point);
                v = point_evaluation(space, choice.point);
            } else {
                const auto idx = space.index_of(choice.exps);
                if (!idx) throw DegreeError("coefficient functional " + str(choice.exps) + " is outside the basis");
                v = coefficient_functional(space, *idx);
            }
            log_norms[f].push_back(std::log(dual_norm(space, v)));
        }
    }

    for (std::size_t f = 0; f < functionals.size(); ++f) {
        const auto& L = log_norms[f];
        double worst = kInf;
        std::vector<double> d2(L.size(), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t i = 1; i + 1 < L.size(); ++i) {
            d2[i] = L[i - 1] - 2 * L[i] + L[i + 1];
            worst = std::min(worst, d2[i]);
        }
        const std::string label = functionals[f].label();
        rep.checks.push_back(check_le_abs("convexity[" + label + "]",
                                          "second differences of log ||xi||_{t,p} are >= 0 (negated minimum)",
                                          -worst, 0.0, cfg.tol.monotone));
        Series s{"convexity_" + std::to_string(f), "t", "dual_norm", "second_difference", "log_dual_norm", {}};
        for (std::size_t i = 0; i < L.size(); ++i) {
            const bool ok = !(d2[i] < -cfg.tol.monotone);
            s.rows.push_back({cfg.t_grid[i], std::exp(L[i]), d2[i], L[i], ok ? "pass" : "fail"});
        }
        rep.series.push_back(s);
    }
    return rep;
}

// ---------------------------------------------------------------- nonreduced

namespace {

HolomorphicPolynomial canonical_representative(const XiAnnulus& xi) {
    const int n = xi.psi.dimension;
    MultiIndex e(static_cast<std::size_t>(n), 0);
    const auto& d = xi.psi.resolution.divisors[static_cast<std::size_t>(xi.divisor)];
    e[static_cast<std::size_t>(d.axis >= 0 ? d.axis : 0)] = static_cast<int>(xi.s_p - 1);
    return HolomorphicPolynomial::monomial(e);
}

HolomorphicPolynomial shift_into_next_ideal(const XiAnnulus& xi, const HolomorphicPolynomial& h) {
    const auto& d = xi.psi.resolution.divisors[static_cast<std::size_t>(xi.divisor)];
    const auto axis = static_cast<std::size_t>(d.axis >= 0 ? d.axis : 0);
    HolomorphicPolynomial out = h;
    for (auto& t : out.terms) t.exps[axis] += 1;
    return out;
}

}  // namespace

VerificationReport run_nonreduced(const ExperimentConfig& cfg) {
    VerificationReport rep;
    rep.experiment = to_string(cfg.kind);
    rep.id = cfg.id;
    const auto rule = cfg.rule();
    const auto& psi = *cfg.psi;
    const int n = cfg.domain.dimension;

    HolomorphicPolynomial g = cfg.g ? *cfg.g : HolomorphicPolynomial::monomial(MultiIndex(static_cast<std::size_t>(n - 1), 0));
    const auto xi = XiAnnulus::make(psi, cfg.phi, cfg.domain, *cfg.jump_index, g);
    const double gap = to_double(xi.m_p - xi.m_prev);
    const auto F = cfg.representative ? *cfg.representative : canonical_representative(xi);
    for (const auto& t : F.terms)
        if (t.coef != cplx(0.0) && !ideal_membership(t.exps, xi.m_prev, psi))
            throw ConfigError("representative has a monomial outside I(m_{p-1} psi)");

    rep.tables.push_back(Table{"jump",
                               {"p", "m_p", "m_prev", "divisor", "s_p", "s_prev"},
                               {{std::to_string(xi.p), to_string(xi.m_p), to_string(xi.m_prev),
                                 std::to_string(xi.divisor), std::to_string(xi.s_p), std::to_string(xi.s_prev)}}});

    const auto base = WeightSpec::plain(cfg.phi).with_multiplier(psi, xi.m_prev);
    auto solve = [&](const WeightSpec& w, int degree, const HolomorphicPolynomial& rep_poly) {
        Solved s{build_space(cfg.domain, w, degree, rule), {}, {}, {}};
        s.ideal = IdealSubspace::multiplier_ideal(s.space, psi, xi.m_p);
        s.rep = s.space.coefficients(rep_poly);
        s.ext = minimal_extension(s.space, s.ideal, s.rep);
        return s;
    };
    const auto main = solve(base, cfg.degree, F);
    const double lhs = main.ext.norm2;
    rep.checks.push_back(check_le_abs("orthogonality", "F0 is orthogonal to every monomial of I(m_p psi)",
                                      main.ext.orthogonality_defect, 0.0, cfg.tol.orthogonality));

    // finite-s bounds e^{-gap s} * integral over {psi < s} of |F|^2 e^{-phi - m_{p-1} psi}
    std::vector<double> bounds;
    for (double s : cfg.s_grid)
        bounds.push_back(std::exp(-gap * s) * norm2_poly(F, base, RegionSpec::sublevel(psi, s), rule, cfg.domain));
    rep.checks.push_back(check_le("finite-s-bound", "||F0||^2 <= e^{-(m_p - m_{p-1}) s} * sublevel integral, every s",
                                  lhs, *std::min_element(bounds.begin(), bounds.end()), cfg.tol.inequality));
    if (bounds.size() >= 4) {
        const auto ex = extrapolate_limit(cfg.s_grid, bounds);
        Check c = check_le("limsup-bound", "||F0||^2 <= limsup estimate of the finite-s bounds", lhs, ex.limit,
                           cfg.tol.inequality);
        c.note = "limsup estimate, error bar " + format_number(ex.error);
        if (ex.indeterminate) {
            c.status = CheckStatus::indeterminate;
            c.note += "; indeterminate: " + ex.reason;
        }
        rep.checks.push_back(c);
        rep.tables.push_back(Table{"limsup_estimate",
                                   {"limit", "error", "kappa", "indeterminate"},
                                   {{format_number(ex.limit), format_number(ex.error), format_number(ex.kappa),
                                     ex.indeterminate ? "true" : "false"}}});
    }
    Series sb{"nonreduced_bounds", "s", "norm2_F0", "finite_s_bound", "bound_minus_lhs", {}};
    for (std::size_t i = 0; i < bounds.size(); ++i)
        sb.rows.push_back({cfg.s_grid[i], lhs, bounds[i], bounds[i] - lhs,
                           lhs <= bounds[i] + cfg.tol.inequality * std::abs(bounds[i]) ? "pass" : "fail"});
    rep.series.push_back(sb);

    // q -> infinity chain at every s
    if (!cfg.q_grid.empty()) {
        double worst_lower = -kInf, worst_middle = -kInf, worst_q = -kInf;
        Series sq{"nonreduced_q_chain", "q", "scaled_norm2_F_sq", "scaled_norm2_F_rep_sq", "sublevel_bound", {}};
        for (std::size_t i = 0; i < cfg.s_grid.size(); ++i) {
            const double s = cfg.s_grid[i];
            std::vector<double> upper;
            for (double q : cfg.q_grid) {
                const auto w = base.deformed(PoleKind::psi, s, q);
                const auto sol = solve(w, cfg.degree, F);
                const double a = std::exp(-gap * s) * sol.ext.norm2;
                const double b = std::exp(-gap * s) * sol.space.norm2(sol.rep);
                worst_lower = std::max(worst_lower, (lhs - a) / a);
                worst_middle = std::max(worst_middle, (a - b) / b);
                upper.push_back(b);
                sq.rows.push_back({q, a, b, bounds[i], lhs <= a * (1 + cfg.tol.inequality) && a <= b * (1 + cfg.tol.inequality) ? "pass" : "fail"});
            }
            worst_q = std::max(worst_q, worst_increase(logs(upper)));
        }
        rep.series.push_back(sq);
        rep.checks.push_back(check_le_abs("q-chain-lower", "||F0||^2 <= e^{-gap s} ||F_{s,q}||^2 (max relative excess)",
                                          worst_lower, 0.0, cfg.tol.inequality));
        rep.checks.push_back(check_le_abs("q-chain-middle",
                                          "e^{-gap s} ||F_{s,q}||^2 <= e^{-gap s} ||F||^2_{s,q} (max relative excess)",
                                          worst_middle, 0.0, cfg.tol.inequality));
        rep.checks.push_back(check_le_abs("q-monotone", "e^{-gap s} ||F||^2_{s,q} is nonincreasing in q (max log increase)",
                                          worst_q, 0.0, cfg.tol.monotone));
    }

    // class invariance: add ideal members to the representative
    {
        HolomorphicPolynomial shifted = F;
        const cplx coefs[] = {{0.7, 0.0}, {0.0, -1.3}, {2.0, 0.5}};
        std::size_t used = 0;
        for (std::size_t j = 0; j < main.space.dim() && used < 3; ++j)
            if (main.ideal.member[j]) shifted.terms.push_back({coefs[used++], main.space.basis[j]});
        const auto other = solve(base, cfg.degree, shifted);
        rep.checks.push_back(check_eq("class-invariance", "||F0||^2 is unchanged when ideal members are added",
                                      other.ext.norm2, lhs, cfg.tol.class_invariance));
    }

    std::vector<std::pair<int, double>> by_degree;
    if (cfg.degree - 2 >= F.degree()) {
        const auto coarse = solve(base, cfg.degree - 2, F);
        by_degree.push_back({cfg.degree - 2, coarse.ext.norm2});
        rep.checks.push_back(check_eq("degree-convergence", "||F0||^2 at degree D-2 vs D", coarse.ext.norm2, lhs,
                                      10 * cfg.tol.inequality));
    }
    by_degree.push_back({cfg.degree, lhs});
    rep.tables.push_back(degree_table("convergence_degree", by_degree));

    // functionals attached to the jump
    try {
        const auto& d = psi.resolution.divisors[static_cast<std::size_t>(xi.divisor)];
        const int g_degree = d.axis >= 0 ? cfg.degree : static_cast<int>(xi.s_p - 1);
        std::vector<FunctionalVector> family;
        for (const auto& gamma : graded_lex_basis(n - 1, g_degree)) {
            auto member = xi;
            member.g = HolomorphicPolynomial::monomial(gamma);
            family.push_back(xi_limit_vector(member, main.space, rule));
        }
        const auto dual = quotient_norm_via_duality(main.space, main.ideal, main.rep, family);
        rep.checks.push_back(check_eq("duality", "sup over limit functionals of |xi_g(F)| / ||xi_g|| equals ||F0||",
                                      dual.value, std::sqrt(lhs), cfg.tol.duality));

        const std::vector<double> t_grid = cfg.t_grid.empty() ? std::vector<double>{-6, -8, -10} : cfg.t_grid;
        const cplx limit = xi_limit_closed_form(xi, F, rule);
        std::vector<double> errs;
        Series sa{"annulus", "t", "annulus_value", "closed_form_limit", "abs_error", {}};
        for (double t : t_grid) {
            const cplx v = xi_annulus_value(xi, F, t, rule);
            errs.push_back(std::abs(v - limit));
            sa.rows.push_back({t, v.real(), limit.real(), errs.back(), errs.back() <= cfg.tol.annulus ? "pass" : "fail"});
        }
        rep.series.push_back(sa);
        rep.checks.push_back(check_le_abs("annulus-limit", "|annulus value - closed form| at the lowest t", errs.back(),
                                          0.0, cfg.tol.annulus));
        rep.checks.push_back(check_le_abs("annulus-error-decreasing",
                                          "annulus error does not grow as t decreases (max increase)",
                                          worst_increase(errs), 0.0, 1e-12));
        const double t_decay = cfg.t_decay.value_or(-12.0);
        const auto inside = shift_into_next_ideal(xi, F);
        const double decayed = std::abs(xi_annulus_value(xi, inside, t_decay, rule));
        rep.checks.push_back(check_le_abs("annulus-ideal-decay", "|annulus value| for a member of I(m_p psi)",
                                          decayed, 0.0, cfg.tol.decay));

        const double q_sweep = cfg.q.value_or(4.0 * gap);
        const auto sweep = xi_boundedness_sweep(xi, cfg.s_grid, q_sweep, cfg.degree, rule, cfg.tol.monotone);
        Series sw{"xi_sweep", "s", "dual_norm2", "max_scaled", "scaled", {}};
        for (const auto& r : sweep.rows) sw.rows.push_back({r.s, r.norm2, sweep.max_scaled, r.scaled, ""});
        rep.series.push_back(sw);
        const double first = sweep.rows.empty() ? 0.0 : sweep.rows.front().scaled;
        rep.checks.push_back(check_le("xi-bounded", "e^{gap s} ||xi_g||^2 stays below its value at the first s",
                                      sweep.max_scaled, first, cfg.tol.monotone));
        std::vector<double> scaled_logs;
        for (const auto& r : sweep.rows) scaled_logs.push_back(r.scaled > 0 ? std::log(r.scaled) : -kInf);
        double worst = worst_increase(scaled_logs);
        if (std::isnan(worst)) worst = 0.0;
        rep.checks.push_back(check_le_abs("xi-nondecreasing", "e^{gap s} ||xi_g||^2 is nondecreasing in s (max log increase as s falls)",
                                          worst, 0.0, cfg.tol.monotone));
    } catch (const UnsupportedModelError& e) {
        Check c = info("xi-functionals", "closed-form limit functionals", 0.0, 0.0, e.what());
        c.status = CheckStatus::indeterminate;
        rep.checks.push_back(c);
    }
    return rep;
}

// ---------------------------------------------------------------- jump-spectrum

VerificationReport run_jump_spectrum(const ExperimentConfig& cfg) {
    VerificationReport rep;
    rep.experiment = to_string(cfg.kind);
    rep.id = cfg.id;
    const auto& psi = *cfg.psi;
    const auto& res = psi.resolution;
    const int n = psi.dimension;
    const auto spectrum = jumping_numbers(res, cfg.m_max);

    Table spec_table{"spectrum", {"p", "m_p", "divisors", "staircase"}, {}};
    std::size_t staircase_failures = 0;
    for (std::size_t p = 1; p <= spectrum.size(); ++p) {
        const auto now = staircase_orders(res, spectrum.at(p));
        const auto before = staircase_orders(res, spectrum.at(p - 1));
        std::string divs, orders;
        for (int k : spectrum.jumps[p - 1].divisors) {
            divs += (divs.empty() ? "" : " ") + std::to_string(k);
            if (now.orders[static_cast<std::size_t>(k)] != before.orders[static_cast<std::size_t>(k)] + 1)
                ++staircase_failures;
        }
        for (auto o : now.orders) orders += (orders.empty() ? "" : " ") + std::to_string(o);
        spec_table.rows.push_back({std::to_string(p), to_string(spectrum.at(p)), divs, orders});
    }
    rep.tables.push_back(spec_table);
    rep.checks.push_back(check_le_abs("staircase-identity",
                                      "s_k(m_p) = s_k(m_{p-1}) + 1 along every realizing divisor (violations)",
                                      static_cast<double>(staircase_failures), 0.0, 0.0));

    // rational grid: multiples of 1/8 up to m_max, the jumps, and midpoints between jumps
    std::set<Rational> grid;
    for (std::int64_t j = 0; Rational(j, 8) <= cfg.m_max; ++j) grid.insert(Rational(j, 8));
    std::vector<Rational> jumps{Rational(0)};
    for (const auto& j : spectrum.jumps) jumps.push_back(j.m);
    std::vector<Rational> mids;
    for (std::size_t i = 1; i < jumps.size(); ++i) mids.push_back((jumps[i - 1] + jumps[i]) / Rational(2));
    if (jumps.size() >= 2) mids.push_back(jumps.back() + (jumps.back() - jumps[jumps.size() - 2]) / Rational(2));
    else mids.push_back(cfg.m_max);
    grid.insert(jumps.begin(), jumps.end());
    grid.insert(mids.begin(), mids.end());

    // the staircase moves exactly at the jumping numbers
    std::size_t consistency_failures = 0;
    Rational prev(-1);
    for (const auto& m : grid) {
        if (prev >= Rational(0)) {
            const bool moved = staircase_orders(res, prev).orders != staircase_orders(res, m).orders;
            bool jump_between = false;
            for (const auto& j : spectrum.jumps)
                if (j.m > prev && j.m <= m) jump_between = true;
            if (m <= cfg.m_max && moved != jump_between) ++consistency_failures;
        }
        prev = m;
    }
    rep.checks.push_back(check_le_abs("spectrum-staircase", "staircase increments exactly at jumping numbers (violations)",
                                      static_cast<double>(consistency_failures), 0.0, 0.0));

    std::size_t membership_failures = 0;
    for (const auto& beta : graded_lex_basis(n, 8))
        for (const auto& m : grid)
            if (ideal_membership(beta, m, psi) != staircase_membership(beta, m, psi)) ++membership_failures;
    rep.checks.push_back(check_le_abs("membership-staircase",
                                      "direct membership test agrees with the staircase test, |beta| <= 8 (violations)",
                                      static_cast<double>(membership_failures), 0.0, 0.0));

    // brute-force oracle
    std::vector<Rational> oracle_m;
    for (std::int64_t j = 0; Rational(j, 4) <= cfg.m_max; ++j) oracle_m.push_back(Rational(j, 4));
    oracle_m.insert(oracle_m.end(), mids.begin(), mids.end());
    std::sort(oracle_m.begin(), oracle_m.end());
    oracle_m.erase(std::unique(oracle_m.begin(), oracle_m.end()), oracle_m.end());

    std::vector<OracleInstance> instances;
    for (const auto& beta : graded_lex_basis(n, cfg.oracle_degree))
        for (const auto& m : oracle_m)
            if (threshold_distance(beta, m, psi) >= 1e-3) instances.push_back({beta, m});
    const QuadratureRule oracle_rule(cfg.oracle.radial_order, 4);
    const auto verdicts = membership_oracle_batch(instances, psi, cfg.domain, oracle_rule, cfg.oracle.options);

    std::size_t decided = 0, agree = 0, undecided = 0;
    Table disagreements{"oracle_disagreements", {"beta", "m", "exact", "oracle", "decay_rate"}, {}};
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& [beta, m] = instances[i];
        if (verdicts[i].verdict == OracleVerdict::indeterminate) {
            ++undecided;
            continue;
        }
        ++decided;
        const bool exact = ideal_membership(beta, m, psi);
        const bool oracle = verdicts[i].verdict == OracleVerdict::finite;
        if (exact == oracle) ++agree;
        else disagreements.rows.push_back({str(beta), to_string(m), exact ? "member" : "not member",
                                           oracle ? "finite" : "infinite", format_number(verdicts[i].decay_rate)});
    }
    rep.tables.push_back(disagreements);
    {
        Check c = check_le_abs("oracle-agreement", "exact membership vs brute-force integrability (disagreements)",
                               static_cast<double>(decided - agree), 0.0, 0.0);
        std::ostringstream note;
        note << decided << " decided, " << agree << " agree, " << undecided << " indeterminate";
        c.note = note.str();
        if (decided == 0) c.status = CheckStatus::fail;
        rep.checks.push_back(c);
    }

    // every jump must be visible to the oracle whenever some |beta| <= oracle_degree crosses it
    auto lookup = [&](const MultiIndex& beta, const Rational& m) -> const OracleResult* {
        for (std::size_t i = 0; i < instances.size(); ++i)
            if (instances[i].first == beta && instances[i].second == m) return &verdicts[i];
        return nullptr;
    };
    std::size_t missed = 0;
    Table witness{"jump_witness", {"m_p", "witnessed_by", "oracle_detected"}, {}};
    for (std::size_t p = 1; p < jumps.size(); ++p) {
        const Rational below = mids[p - 1];
        const Rational above = mids[p];
        std::vector<MultiIndex> crossing;
        for (const auto& beta : graded_lex_basis(n, cfg.oracle_degree))
            if (ideal_membership(beta, below, psi) && !ideal_membership(beta, above, psi)) crossing.push_back(beta);
        bool detected = false;
        for (const auto& beta : crossing) {
            const auto* a = lookup(beta, below);
            const auto* b = lookup(beta, above);
            if (a && b && a->verdict == OracleVerdict::finite && b->verdict == OracleVerdict::infinite) detected = true;
        }
        if (!crossing.empty() && !detected) ++missed;
        witness.rows.push_back({to_string(jumps[p]), crossing.empty() ? "-" : str(crossing.front()),
                                crossing.empty() ? "n/a" : (detected ? "yes" : "no")});
    }
    rep.tables.push_back(witness);
    rep.checks.push_back(check_le_abs("oracle-jumps", "jumps crossed by some |beta| <= degree are seen by the oracle (missed)",
                                      static_cast<double>(missed), 0.0, 0.0));

    Series s{"jump_spectrum", "p", "m_p", "divisor_count", "m_p_times_c", {}};
    for (std::size_t p = 1; p <= spectrum.size(); ++p)
        s.rows.push_back({static_cast<double>(p), to_double(spectrum.at(p)),
                          static_cast<double>(spectrum.jumps[p - 1].divisors.size()),
                          to_double(spectrum.at(p) * psi.c), ""});
    rep.series.push_back(s);
    return rep;
}

// ---------------------------------------------------------------- dispatch

VerificationReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    VerificationReport rep;
    switch (cfg.kind) {
    case ExperimentKind::ot_optimal: rep = run_ot_optimal(cfg); break;
    case ExperimentKind::monotone_t: rep = run_monotone_t(cfg); break;
    case ExperimentKind::p_limit: rep = run_p_limit(cfg); break;
    case ExperimentKind::convexity: rep = run_convexity(cfg); break;
    case ExperimentKind::nonreduced: rep = run_nonreduced(cfg); break;
    case ExperimentKind::jump_spectrum: rep = run_jump_spectrum(cfg); break;
    }
    rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.config_echo = cfg.echo;
    return rep;
}

}  // namespace l2ext
