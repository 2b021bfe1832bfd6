#pragma once

#include "l2ext/multiplier.hpp"
#include "l2ext/polynomial.hpp"
#include "l2ext/quadrature.hpp"
#include "l2ext/rational.hpp"
#include "l2ext/weights.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace l2ext {

enum class ExperimentKind { ot_optimal, monotone_t, p_limit, convexity, nonreduced, jump_spectrum };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

enum class OutputFormat { json, csv };

struct Tolerances {
    double inequality = 1e-7;   // relative
    double monotone = 1e-6;     // absolute, on logs
    double equality = 1e-6;     // relative
    double limit = 1e-6;        // relative, p-limit target
    double duality = 1e-8;      // relative
    double orthogonality = 1e-8;
    double annulus = 1e-4;      // absolute, annulus value vs closed form
    double decay = 1e-6;        // absolute, annulus value of ideal members
    double class_invariance = 1e-9;
};

/// Linear functional for the convexity suite.
struct FunctionalChoice {
    enum class Kind { evaluation, coefficient };
    Kind kind = Kind::evaluation;
    std::vector<cplx> point;  // evaluation
    MultiIndex exps;          // coefficient
    std::string label() const;
};

struct OracleSettings {
    OracleOptions options;
    int radial_order = 20;
};

/// One experiment, parsed from a single JSON document. Unknown keys are rejected.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::ot_optimal;
    std::string id;

    DomainSpec domain;
    BaseWeight phi;
    std::optional<GreenData> green;
    std::optional<SingularWeight> psi;

    /// Data on V (ot-optimal, monotone-t) in the coordinates of V.
    std::optional<HolomorphicPolynomial> f;
    /// g for xi_g: on V or on the divisor slice.
    std::optional<HolomorphicPolynomial> g;
    /// Ambient representative F (p-limit, nonreduced).
    std::optional<HolomorphicPolynomial> representative;
    std::optional<std::size_t> jump_index;

    std::vector<double> t_grid, p_grid, s_grid, q_grid;
    std::optional<double> t, p, q, t_decay;

    int degree = 16;
    int radial_order = 120;
    int angular_order = 64;
    Tolerances tol;
    std::vector<FunctionalChoice> functionals;

    Rational m_max{4};
    int oracle_degree = 6;
    OracleSettings oracle;

    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::json;

    /// The document as read, re-serialized.
    std::string echo;

    static ExperimentConfig parse(const std::string& json_text);
    static ExperimentConfig load(const std::filesystem::path& path);

    QuadratureRule rule() const { return QuadratureRule(radial_order, angular_order); }
    /// Throws ConfigError when a field required by the experiment kind is missing
    /// or a grid violates its ordering.
    void validate() const;
};

}  // namespace l2ext
