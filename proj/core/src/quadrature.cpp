#include "l2ext/quadrature.hpp"

#include "l2ext/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace l2ext {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe_node(std::span<const double> s) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? ", " : "") << "|z" << i + 1 << "|^2=" << s[i];
    os << ")";
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------- Gauss-Legendre

GaussLegendre GaussLegendre::make(int order) {
    if (order < 1) throw ConfigError("quadrature order must be >= 1");
    GaussLegendre gl;
    const auto n = static_cast<std::size_t>(order);
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) p0 = 1.0;
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= order; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (order == 1) p0 = 1.0;
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    if (order % 2 == 1) gl.nodes[n / 2] = 0.0;
    return gl;
}

// ---------------------------------------------------------------- rule

QuadratureRule::QuadratureRule(int radial_order, int angular_order)
    : radial_order_(radial_order),
      angular_order_(angular_order),
      radial_(GaussLegendre::make(radial_order)),
      graded_(GaussLegendre::make(std::min(radial_order, 16))) {
    if (angular_order < 1) throw ConfigError("angular order must be >= 1");
}

QuadratureRule QuadratureRule::defaults_for(int dimension) {
    return dimension == 1 ? QuadratureRule(120, 64) : QuadratureRule(60, 32);
}

QuadratureRule QuadratureRule::refined() const {
    QuadratureRule r(2 * radial_order_, 2 * angular_order_);
    r.log_panel_width = log_panel_width;
    r.graded_depth = graded_depth;
    return r;
}

// ---------------------------------------------------------------- regions

RegionSpec RegionSpec::full() { return {}; }

RegionSpec RegionSpec::sublevel(ToricFunction f, double t) {
    return {RegionKind::sublevel, std::move(f), t};
}

RegionSpec RegionSpec::annulus(ToricFunction f, double t) {
    return {RegionKind::annulus, std::move(f), t};
}

RegionSpec RegionSpec::sublevel(const SingularWeight& psi, double t) {
    return sublevel([psi](std::span<const double> s) { return psi.from_moduli(s); }, t);
}

RegionSpec RegionSpec::annulus(const SingularWeight& psi, double t) {
    return annulus([psi](std::span<const double> s) { return psi.from_moduli(s); }, t);
}

bool RegionSpec::contains_moduli(std::span<const double> s) const {
    switch (kind) {
    case RegionKind::full:
        return true;
    case RegionKind::sublevel:
        return level(s) < t;
    case RegionKind::annulus: {
        const double v = level(s);
        return t < v && v < t + 1.0;
    }
    }
    return false;
}

// ---------------------------------------------------------------- radial grid

namespace {

/// Root of g(x) = f(x) - level on (0, hi) for nondecreasing f with
/// g(0) < 0 < g(hi); found by bisection in log x. Returns 0 when the root
/// lies below the smallest normal number.
double locate_root(const std::function<double(double)>& g, double hi) {
    const double log_hi = std::log(hi);
    double step = 1.0;
    double log_lo = log_hi - step;
    while (g(std::exp(log_lo)) >= 0.0) {
        step *= 2.0;
        log_lo = log_hi - step;
        if (log_lo < -700.0) return 0.0;
    }
    double a = log_lo;
    double b = log_hi;
    for (int iter = 0; iter < 200 && b - a > 1e-13; ++iter) {
        const double mid = 0.5 * (a + b);
        if (g(std::exp(mid)) < 0.0) a = mid;
        else b = mid;
    }
    return std::exp(0.5 * (a + b));
}

struct GridBuilder {
    const DomainSpec& domain;
    const RegionSpec& region;
    std::span<const LevelSet> kinks;
    const QuadratureRule& rule;
    bool graded;
    RadialGrid& out;
    int n;
    std::vector<double> point;

    double r2(int axis) const {
        const double r = domain.radii[static_cast<std::size_t>(axis)];
        return r * r;
    }

    // Evaluates f with axes > axis pinned to 0 or r^2 according to `corner`.
    double eval_corner(const ToricFunction& f, int axis, double x, unsigned corner) {
        point[static_cast<std::size_t>(axis)] = x;
        for (int k = axis + 1; k < n; ++k)
            point[static_cast<std::size_t>(k)] = ((corner >> (k - axis - 1)) & 1u) ? r2(k) : 0.0;
        return f(point);
    }

    void add_roots(const ToricFunction& f, double level, int axis, std::vector<double>& breaks) {
        const unsigned corners = 1u << (n - axis - 1);
        const double hi = r2(axis);
        for (unsigned corner = 0; corner < corners; ++corner) {
            auto g = [&](double x) { return eval_corner(f, axis, x, corner) - level; };
            const double g0 = g(0.0);
            const double g1 = g(hi);
            if (g0 < 0.0 && g1 > 0.0) {
                const double root = locate_root(g, hi);
                if (root > 0.0 && root < hi) breaks.push_back(root);
            }
        }
    }

    // Whether some completion of the prefix with the current x on `axis` lies in the region.
    bool may_intersect(int axis, double x) {
        if (region.kind == RegionKind::full) return true;
        const unsigned all_max = (1u << (n - axis - 1)) - 1u;
        const double low = eval_corner(region.level, axis, x, 0u);
        const double high = eval_corner(region.level, axis, x, all_max);
        if (region.kind == RegionKind::sublevel) return low < region.t;
        return low < region.t + 1.0 && high > region.t;
    }

    void emit_interval(int axis, double lo, double hi, double weight) {
        auto visit = [&](double x, double w) {
            point[static_cast<std::size_t>(axis)] = x;
            if (axis + 1 == n) {
                out.moduli.insert(out.moduli.end(), point.begin(), point.end());
                out.weights.push_back(weight * w);
            } else {
                recurse(axis + 1, weight * w);
            }
        };
        auto linear_panel = [&](const GaussLegendre& gl, double a, double b) {
            const double half = 0.5 * (b - a);
            const double mid = 0.5 * (b + a);
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) visit(mid + half * gl.nodes[i], half * gl.weights[i]);
        };
        auto log_panels = [&](const GaussLegendre& gl, double a, double b) {
            const double la = std::log(a);
            const double lb = std::log(b);
            const int panels = std::max(1, static_cast<int>(std::ceil((lb - la) / rule.log_panel_width - 1e-12)));
            const double width = (lb - la) / panels;
            for (int p = 0; p < panels; ++p) {
                const double pa = la + p * width;
                const double half = 0.5 * width;
                const double mid = pa + half;
                for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                    const double u = mid + half * gl.nodes[i];
                    const double x = std::exp(u);
                    visit(x, half * gl.weights[i] * x);
                }
            }
        };

        if (lo > 0.0) {
            log_panels(rule.radial(), lo, hi);
        } else if (graded) {
            const double cut = hi * std::exp(-rule.graded_depth);
            linear_panel(rule.graded(), 0.0, cut);
            log_panels(rule.graded(), cut, hi);
        } else {
            linear_panel(rule.radial(), 0.0, hi);
        }
    }

    void recurse(int axis, double weight) {
        const double hi = r2(axis);
        std::vector<double> breaks{0.0, hi};
        if (region.kind != RegionKind::full) {
            add_roots(region.level, region.t, axis, breaks);
            if (region.kind == RegionKind::annulus) add_roots(region.level, region.t + 1.0, axis, breaks);
        }
        for (const auto& k : kinks) add_roots(k.f, k.level, axis, breaks);
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const double a = breaks[i];
            const double b = breaks[i + 1];
            if (!(b > a)) continue;
            const double mid = a > 0.0 ? std::sqrt(a * b) : 0.5 * b;
            if (axis + 1 == n) {
                point[static_cast<std::size_t>(axis)] = mid;
                if (!region.contains_moduli(point)) continue;
            } else if (!may_intersect(axis, mid)) {
                continue;
            }
            emit_interval(axis, a, b, weight);
        }
    }
};

}  // namespace

RadialGrid build_radial_grid(const DomainSpec& domain, const RegionSpec& region,
                             std::span<const LevelSet> kinks, const QuadratureRule& rule,
                             bool graded) {
    domain.validate();
    RadialGrid grid;
    grid.dimension = domain.dimension;
    GridBuilder b{domain, region, kinks, rule, graded, grid, domain.dimension,
                  std::vector<double>(static_cast<std::size_t>(domain.dimension), 0.0)};
    b.recurse(0, 1.0);
    return grid;
}

// ---------------------------------------------------------------- summation

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

cplx pairwise_sum_complex(std::span<const cplx> values) {
    if (values.size() <= 8) {
        cplx acc = 0.0;
        for (const auto& v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum_complex(values.first(half)) + pairwise_sum_complex(values.subspan(half));
}

/// Calls visit(z, s_index, angular_weight) for every angular node above each radial node.
template <typename Visit>
void for_each_full_node(const RadialGrid& grid, int angular_order, Visit&& visit) {
    const int n = grid.dimension;
    long long per_radial = 1;
    for (int i = 0; i < n; ++i) per_radial *= angular_order;
    std::vector<cplx> phases(static_cast<std::size_t>(angular_order));
    for (int j = 0; j < angular_order; ++j) phases[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * kPi * j / angular_order);
    const double angular_weight = std::pow(kPi / angular_order, n);

    std::vector<cplx> z(static_cast<std::size_t>(n));
    std::vector<double> radius(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto s = grid.node(i);
        for (int k = 0; k < n; ++k) radius[static_cast<std::size_t>(k)] = std::sqrt(s[static_cast<std::size_t>(k)]);
        for (long long a = 0; a < per_radial; ++a) {
            long long rest = a;
            for (int k = 0; k < n; ++k) {
                z[static_cast<std::size_t>(k)] = radius[static_cast<std::size_t>(k)] * phases[static_cast<std::size_t>(rest % angular_order)];
                rest /= angular_order;
            }
            visit(std::span<const cplx>(z), i, grid.weights[i] * angular_weight);
        }
    }
}

}  // namespace

double integrate(const Integrand& f, const RegionSpec& region, const QuadratureRule& rule,
                 const DomainSpec& domain) {
    const auto grid = build_radial_grid(domain, region, f.kinks, rule, f.singular_at_origin);
    std::vector<double> terms;
    if (f.toric) {
        terms.reserve(grid.size());
        const double factor = std::pow(kPi, domain.dimension);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = f.toric(grid.node(i));
            if (!std::isfinite(v))
                throw SingularIntegrandError("integrand is not finite at node " + describe_node(grid.node(i)));
            terms.push_back(factor * grid.weights[i] * v);
        }
    } else if (f.pointwise) {
        for_each_full_node(grid, rule.angular_order(), [&](std::span<const cplx> z, std::size_t i, double w) {
            const double v = f.pointwise(z);
            if (!std::isfinite(v))
                throw SingularIntegrandError("integrand is not finite at node " + describe_node(grid.node(i)));
            terms.push_back(w * v);
        });
    } else {
        throw ConfigError("integrand has neither a toric nor a pointwise form");
    }
    return pairwise_sum(terms);
}

std::vector<LevelSet> weight_kinks(const WeightSpec& w) {
    std::vector<LevelSet> kinks;
    if (w.deformation && w.deformation->slope != 0.0) {
        WeightSpec copy = w;
        kinks.push_back({[copy](std::span<const double> s) { return copy.pole_from_moduli(s); },
                         w.deformation->shift});
    }
    return kinks;
}

Eigen::MatrixXcd pairing_matrix(std::span<const MultiIndex> rows, std::span<const MultiIndex> cols,
                                const WeightSpec& w, const RegionSpec& region,
                                const QuadratureRule& rule, const DomainSpec& domain) {
    w.validate(domain);
    const int n = domain.dimension;
    const auto kinks = weight_kinks(w);
    const auto grid = build_radial_grid(domain, region, kinks, rule, w.has_multiplier_term());
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()),
                                                static_cast<Eigen::Index>(cols.size()));
    if (grid.size() == 0) return M;

    if (w.is_toric()) {
        // log(node weight) - W(s) per node, shared by every diagonal entry.
        std::vector<double> log_base(grid.size());
        std::vector<double> log_s(grid.size() * static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto s = grid.node(i);
            log_base[i] = std::log(grid.weights[i]) - eval_weight_toric(w, s);
            for (int k = 0; k < n; ++k) log_s[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] = std::log(s[static_cast<std::size_t>(k)]);
        }
        const double factor = std::pow(kPi, n);
        std::vector<double> terms(grid.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                if (rows[r] != cols[c]) continue;
                const auto& alpha = rows[r];
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    double e = log_base[i];
                    for (int k = 0; k < n; ++k)
                        if (alpha[static_cast<std::size_t>(k)] != 0)
                            e += alpha[static_cast<std::size_t>(k)] * log_s[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)];
                    const double v = std::exp(e);
                    if (std::isnan(v) || std::isinf(v))
                        throw SingularIntegrandError("pairing integrand is not finite at node " + describe_node(grid.node(i)));
                    terms[i] = v;
                }
                M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = factor * pairwise_sum(terms);
            }
        }
        return M;
    }

    // Non-toric weight: chunked accumulation of A^H B over the full tensor grid.
    constexpr Eigen::Index kChunk = 4096;
    Eigen::MatrixXcd A(kChunk, static_cast<Eigen::Index>(rows.size()));
    Eigen::MatrixXcd B(kChunk, static_cast<Eigen::Index>(cols.size()));
    Eigen::Index filled = 0;
    auto flush = [&]() {
        if (filled == 0) return;
        M.noalias() += A.topRows(filled).adjoint() * B.topRows(filled);
        filled = 0;
    };
    for_each_full_node(grid, rule.angular_order(), [&](std::span<const cplx> z, std::size_t i, double aw) {
        const double W = eval_weight(w, domain, z);
        const double omega = aw * std::exp(-W);
        if (!std::isfinite(omega))
            throw SingularIntegrandError("pairing weight is not finite at node " + describe_node(grid.node(i)));
        const double root = std::sqrt(omega);
        for (std::size_t r = 0; r < rows.size(); ++r) A(filled, static_cast<Eigen::Index>(r)) = root * monomial_value(z, rows[r]);
        for (std::size_t c = 0; c < cols.size(); ++c) B(filled, static_cast<Eigen::Index>(c)) = root * monomial_value(z, cols[c]);
        if (++filled == kChunk) flush();
    });
    flush();
    return M;
}

cplx monomial_pairing(const MultiIndex& alpha, const MultiIndex& beta, const WeightSpec& w,
                      const RegionSpec& region, const QuadratureRule& rule,
                      const DomainSpec& domain) {
    const MultiIndex rows[1] = {beta};
    const MultiIndex cols[1] = {alpha};
    return pairing_matrix(rows, cols, w, region, rule, domain)(0, 0);
}

}  // namespace l2ext
