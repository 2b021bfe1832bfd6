#include "l2ext/config.hpp"

#include "l2ext/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace l2ext {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : obj.items()) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                    [&](const char* k) { return item.key() == k; });
        if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

double number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ConfigError(what + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(what + " must be finite");
    return x;
}

int integer(const json& v, const std::string& what) {
    if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
    return v.get<int>();
}

Rational rational(const json& v, const std::string& what) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw ConfigError(what + " must be an integer or a string like \"7/4\"");
}

std::vector<double> grid(const json& v, const std::string& what) {
    if (!v.is_array() || v.empty()) throw ConfigError(what + " must be a non-empty array");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, what));
    return out;
}

MultiIndex exponents(const json& v, int length, const std::string& what) {
    if (!v.is_array()) throw ConfigError(what + " exponents must be an array");
    MultiIndex out;
    for (const auto& e : v) {
        const int k = integer(e, what + " exponent");
        if (k < 0) throw ConfigError(what + " exponents must be nonnegative");
        out.push_back(k);
    }
    if (static_cast<int>(out.size()) != length) {
        std::ostringstream os;
        os << what << " exponents must have length " << length;
        throw ConfigError(os.str());
    }
    return out;
}

RealPolynomial real_polynomial(const json& v, int variables, const std::string& what) {
    if (!v.is_array()) throw ConfigError(what + " must be an array of terms");
    RealPolynomial p;
    p.variables = variables;
    for (const auto& t : v) {
        only_keys(t, what + " term", {"coef", "exps"});
        if (!t.contains("coef") || !t.contains("exps")) throw ConfigError(what + " term needs coef and exps");
        p.terms.push_back({number(t["coef"], what + " coef"), exponents(t["exps"], variables, what)});
    }
    return p;
}

cplx complex_number(const json& v, const std::string& what) {
    if (v.is_number()) return {number(v, what), 0.0};
    if (v.is_array() && v.size() == 2) return {number(v[0], what), number(v[1], what)};
    throw ConfigError(what + " must be a number or [re, im]");
}

HolomorphicPolynomial holomorphic_polynomial(const json& v, int variables, const std::string& what) {
    if (!v.is_array()) throw ConfigError(what + " must be an array of terms");
    HolomorphicPolynomial p;
    p.variables = variables;
    for (const auto& t : v) {
        only_keys(t, what + " term", {"coef", "exps"});
        if (!t.contains("coef") || !t.contains("exps")) throw ConfigError(what + " term needs coef and exps");
        p.terms.push_back({complex_number(t["coef"], what + " coef"), exponents(t["exps"], variables, what)});
    }
    return p;
}

BaseWeight base_weight(const json& v, int n) {
    only_keys(v, "phi", {"kind", "terms"});
    const std::string kind = v.value("kind", std::string("zero"));
    if (kind == "zero") {
        if (v.contains("terms")) throw ConfigError("phi of kind zero takes no terms");
        return BaseWeight::zero();
    }
    if (!v.contains("terms")) throw ConfigError("phi needs terms");
    if (kind == "radial") return BaseWeight::radial(real_polynomial(v["terms"], 1, "phi"));
    if (kind == "toric") return BaseWeight::toric(real_polynomial(v["terms"], n, "phi"));
    if (kind == "pointwise") return BaseWeight::pointwise(real_polynomial(v["terms"], 2 * n, "phi"));
    throw ConfigError("phi kind must be zero, radial, toric or pointwise");
}

GreenData green_data(const json& v, int n) {
    only_keys(v, "green", {"subvariety_dim", "offset", "A", "B"});
    GreenData g = GreenData::coordinate_subspace(n, v.contains("subvariety_dim")
                                                        ? integer(v["subvariety_dim"], "subvariety_dim")
                                                        : 0);
    if (v.contains("offset")) g.offset = number(v["offset"], "green offset");
    g.A = v.contains("A") ? real_polynomial(v["A"], 2 * n, "green A")
                          : RealPolynomial::constant(2 * n, std::max(g.offset, 0.0));
    g.B = v.contains("B") ? real_polynomial(v["B"], 2 * n, "green B")
                          : RealPolynomial::constant(2 * n, std::max(-g.offset, 0.0));
    return g;
}

SingularWeight singular_weight(const json& v, const DomainSpec& domain) {
    only_keys(v, "psi", {"c", "generators", "u"});
    if (!v.contains("generators") || !v["generators"].is_array())
        throw ConfigError("psi needs an array of generators");
    std::vector<MultiIndex> gens;
    for (const auto& g : v["generators"]) gens.push_back(exponents(g, domain.dimension, "psi generator"));
    const Rational c = v.contains("c") ? rational(v["c"], "psi c") : Rational(1);
    const double u = v.contains("u") ? number(v["u"], "psi u") : 0.0;
    return SingularWeight::make(c, std::move(gens), domain, u);
}

FunctionalChoice functional_choice(const json& v, int n) {
    only_keys(v, "functional", {"kind", "point", "exps"});
    FunctionalChoice f;
    const std::string kind = v.value("kind", std::string("evaluation"));
    if (kind == "evaluation") {
        f.kind = FunctionalChoice::Kind::evaluation;
        if (v.contains("exps")) throw ConfigError("evaluation functional takes a point, not exps");
        if (v.contains("point")) {
            if (!v["point"].is_array()) throw ConfigError("functional point must be an array");
            for (const auto& z : v["point"]) f.point.push_back(complex_number(z, "functional point"));
        } else {
            f.point.assign(static_cast<std::size_t>(n), cplx(0.0));
        }
        if (static_cast<int>(f.point.size()) != n) throw ConfigError("functional point has the wrong length");
    } else if (kind == "coefficient") {
        f.kind = FunctionalChoice::Kind::coefficient;
        if (v.contains("point")) throw ConfigError("coefficient functional takes exps, not a point");
        if (!v.contains("exps")) throw ConfigError("coefficient functional needs exps");
        f.exps = exponents(v["exps"], n, "functional");
    } else {
        throw ConfigError("functional kind must be evaluation or coefficient");
    }
    return f;
}

bool strictly_decreasing(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] < x[i - 1])) return false;
    return true;
}

bool strictly_increasing(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) return false;
    return true;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::ot_optimal: return "ot-optimal";
    case ExperimentKind::monotone_t: return "monotone-t";
    case ExperimentKind::p_limit: return "p-limit";
    case ExperimentKind::convexity: return "convexity";
    case ExperimentKind::nonreduced: return "nonreduced";
    case ExperimentKind::jump_spectrum: return "jump-spectrum";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
    for (auto k : {ExperimentKind::ot_optimal, ExperimentKind::monotone_t, ExperimentKind::p_limit,
                   ExperimentKind::convexity, ExperimentKind::nonreduced, ExperimentKind::jump_spectrum})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string FunctionalChoice::label() const {
    std::ostringstream os;
    if (kind == Kind::evaluation) {
        os << "eval(";
        for (std::size_t i = 0; i < point.size(); ++i)
            os << (i ? "," : "") << point[i].real() << (point[i].imag() < 0 ? "" : "+") << point[i].imag() << "i";
        os << ")";
    } else {
        os << "coef(";
        for (std::size_t i = 0; i < exps.size(); ++i) os << (i ? "," : "") << exps[i];
        os << ")";
    }
    return os.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(doc, "config",
              {"experiment", "id", "domain", "phi", "green", "psi", "f", "g", "representative",
               "jump_index", "t_grid", "p_grid", "s_grid", "q_grid", "t", "p", "q", "t_decay", "degree",
               "quadrature", "tolerances", "functionals", "m_max", "oracle_degree", "oracle", "output"});

    ExperimentConfig cfg;
    try {
        if (!doc.contains("experiment") || !doc["experiment"].is_string())
            throw ConfigError("config needs an 'experiment' string");
        cfg.kind = parse_experiment_kind(doc["experiment"].get<std::string>());
        cfg.id = doc.value("id", to_string(cfg.kind));

        if (doc.contains("domain")) {
            const auto& d = doc["domain"];
            only_keys(d, "domain", {"dimension", "radii"});
            cfg.domain.dimension = d.contains("dimension") ? integer(d["dimension"], "dimension") : 1;
            if (d.contains("radii")) cfg.domain.radii = grid(d["radii"], "radii");
            else cfg.domain.radii.assign(static_cast<std::size_t>(std::max(cfg.domain.dimension, 0)), 1.0);
        }
        cfg.domain.validate();
        const int n = cfg.domain.dimension;

        cfg.phi = doc.contains("phi") ? base_weight(doc["phi"], n) : BaseWeight::zero();
        if (doc.contains("green")) cfg.green = green_data(doc["green"], n);
        if (doc.contains("psi")) cfg.psi = singular_weight(doc["psi"], cfg.domain);

        if (doc.contains("f")) {
            if (!cfg.green) throw ConfigError("f lives on V; a green block is required");
            cfg.f = holomorphic_polynomial(doc["f"], cfg.green->subvariety_dim, "f");
        }
        if (doc.contains("g")) {
            int vars = n - 1;
            if (cfg.kind == ExperimentKind::ot_optimal || cfg.kind == ExperimentKind::monotone_t) {
                if (!cfg.green) throw ConfigError("g for this experiment lives on V; a green block is required");
                vars = cfg.green->subvariety_dim;
            }
            cfg.g = holomorphic_polynomial(doc["g"], vars, "g");
        }
        if (doc.contains("representative"))
            cfg.representative = holomorphic_polynomial(doc["representative"], n, "representative");
        if (doc.contains("jump_index")) {
            const int p = integer(doc["jump_index"], "jump_index");
            if (p < 1) throw ConfigError("jump_index must be >= 1");
            cfg.jump_index = static_cast<std::size_t>(p);
        }

        if (doc.contains("t_grid")) cfg.t_grid = grid(doc["t_grid"], "t_grid");
        if (doc.contains("p_grid")) cfg.p_grid = grid(doc["p_grid"], "p_grid");
        if (doc.contains("s_grid")) cfg.s_grid = grid(doc["s_grid"], "s_grid");
        if (doc.contains("q_grid")) cfg.q_grid = grid(doc["q_grid"], "q_grid");
        if (doc.contains("t")) cfg.t = number(doc["t"], "t");
        if (doc.contains("p")) cfg.p = number(doc["p"], "p");
        if (doc.contains("q")) cfg.q = number(doc["q"], "q");
        if (doc.contains("t_decay")) cfg.t_decay = number(doc["t_decay"], "t_decay");

        cfg.degree = doc.contains("degree") ? integer(doc["degree"], "degree") : (n == 1 ? 16 : 8);
        const auto defaults = QuadratureRule::defaults_for(n);
        cfg.radial_order = defaults.radial_order();
        cfg.angular_order = defaults.angular_order();
        if (doc.contains("quadrature")) {
            const auto& q = doc["quadrature"];
            only_keys(q, "quadrature", {"radial", "angular"});
            if (q.contains("radial")) cfg.radial_order = integer(q["radial"], "radial order");
            if (q.contains("angular")) cfg.angular_order = integer(q["angular"], "angular order");
        }

        if (doc.contains("tolerances")) {
            const auto& t = doc["tolerances"];
            only_keys(t, "tolerances",
                      {"inequality", "monotone", "equality", "limit", "duality", "orthogonality", "annulus",
                       "decay", "class_invariance"});
            auto set = [&](const char* key, double& slot) {
                if (!t.contains(key)) return;
                slot = number(t[key], key);
                if (!(slot > 0.0)) throw ConfigError(std::string("tolerance ") + key + " must be positive");
            };
            set("inequality", cfg.tol.inequality);
            set("monotone", cfg.tol.monotone);
            set("equality", cfg.tol.equality);
            set("limit", cfg.tol.limit);
            set("duality", cfg.tol.duality);
            set("orthogonality", cfg.tol.orthogonality);
            set("annulus", cfg.tol.annulus);
            set("decay", cfg.tol.decay);
            set("class_invariance", cfg.tol.class_invariance);
        }

        if (doc.contains("functionals")) {
            if (!doc["functionals"].is_array()) throw ConfigError("functionals must be an array");
            for (const auto& f : doc["functionals"]) cfg.functionals.push_back(functional_choice(f, n));
        }

        if (doc.contains("m_max")) cfg.m_max = rational(doc["m_max"], "m_max");
        if (doc.contains("oracle_degree")) cfg.oracle_degree = integer(doc["oracle_degree"], "oracle_degree");
        if (doc.contains("oracle")) {
            const auto& o = doc["oracle"];
            only_keys(o, "oracle", {"shells", "fit_from", "rate_tolerance", "radial"});
            if (o.contains("shells")) cfg.oracle.options.shells = integer(o["shells"], "oracle shells");
            if (o.contains("fit_from")) cfg.oracle.options.fit_from = integer(o["fit_from"], "oracle fit_from");
            if (o.contains("rate_tolerance"))
                cfg.oracle.options.rate_tolerance = number(o["rate_tolerance"], "oracle rate_tolerance");
            if (o.contains("radial")) cfg.oracle.radial_order = integer(o["radial"], "oracle radial");
        }

        if (doc.contains("output")) {
            const auto& o = doc["output"];
            only_keys(o, "output", {"dir", "format"});
            if (o.contains("dir")) {
                if (!o["dir"].is_string()) throw ConfigError("output dir must be a string");
                cfg.out_dir = o["dir"].get<std::string>();
            }
            if (o.contains("format")) {
                const auto fmt = o["format"].is_string() ? o["format"].get<std::string>() : std::string();
                if (fmt == "json") cfg.format = OutputFormat::json;
                else if (fmt == "csv") cfg.format = OutputFormat::csv;
                else throw ConfigError("output format must be json or csv");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
    }
    cfg.echo = doc.dump();
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void ExperimentConfig::validate() const {
    domain.validate();
    if (degree < 0) throw ConfigError("degree must be >= 0");
    if (radial_order < 2 || angular_order < 1) throw ConfigError("quadrature orders are too small");
    if (green && green->dimension != domain.dimension) throw ConfigError("green data dimension mismatch");

    auto need = [&](bool present, const char* what) {
        if (!present) throw ConfigError(to_string(kind) + " needs '" + what + "'");
    };
    auto descending = [&](const std::vector<double>& x, const char* what) {
        if (!strictly_decreasing(x)) throw ConfigError(std::string(what) + " must be strictly descending");
    };
    auto ascending = [&](const std::vector<double>& x, const char* what) {
        if (!strictly_increasing(x)) throw ConfigError(std::string(what) + " must be strictly increasing");
    };
    auto nonpositive = [&](const std::vector<double>& x, const char* what) {
        for (double v : x)
            if (v > 0.0) throw ConfigError(std::string(what) + " values must be <= 0");
    };
    auto nonnegative = [&](const std::vector<double>& x, const char* what) {
        for (double v : x)
            if (v < 0.0) throw ConfigError(std::string(what) + " values must be >= 0");
    };

    switch (kind) {
    case ExperimentKind::ot_optimal:
        need(green.has_value(), "green");
        need(f.has_value(), "f");
        break;
    case ExperimentKind::monotone_t:
        need(green.has_value(), "green");
        need(f.has_value(), "f");
        need(!t_grid.empty(), "t_grid");
        need(p.has_value() || !p_grid.empty(), "p or p_grid");
        descending(t_grid, "t_grid");
        nonpositive(t_grid, "t_grid");
        nonnegative(p_grid, "p_grid");
        break;
    case ExperimentKind::p_limit:
        need(green.has_value(), "green");
        need(t.has_value(), "t");
        need(!p_grid.empty(), "p_grid");
        need(representative.has_value() || f.has_value(), "representative or f");
        ascending(p_grid, "p_grid");
        nonnegative(p_grid, "p_grid");
        break;
    case ExperimentKind::convexity: {
        need(green.has_value(), "green");
        need(p.has_value(), "p");
        need(t_grid.size() >= 3, "t_grid with at least 3 points");
        nonpositive(t_grid, "t_grid");
        const double h = t_grid[1] - t_grid[0];
        if (h == 0.0) throw ConfigError("t_grid must not repeat points");
        for (std::size_t i = 1; i < t_grid.size(); ++i)
            if (std::abs((t_grid[i] - t_grid[i - 1]) - h) > 1e-12 * std::max(1.0, std::abs(h)))
                throw ConfigError("t_grid must be uniform");
        break;
    }
    case ExperimentKind::nonreduced:
        need(psi.has_value(), "psi");
        need(jump_index.has_value(), "jump_index");
        need(!s_grid.empty(), "s_grid");
        descending(s_grid, "s_grid");
        nonpositive(s_grid, "s_grid");
        if (!q_grid.empty()) {
            ascending(q_grid, "q_grid");
            nonnegative(q_grid, "q_grid");
        }
        if (!t_grid.empty()) descending(t_grid, "t_grid");
        break;
    case ExperimentKind::jump_spectrum:
        need(psi.has_value(), "psi");
        if (m_max <= Rational(0)) throw ConfigError("m_max must be positive");
        if (oracle_degree < 0) throw ConfigError("oracle_degree must be >= 0");
        break;
    }
}

}  // namespace l2ext
