#include "l2ext/config.hpp"
#include "l2ext/error.hpp"
#include "l2ext/experiments.hpp"
#include "l2ext/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

const char* describe(l2ext::ExperimentKind kind) {
    switch (kind) {
        case l2ext::ExperimentKind::ot_optimal: return "minimal extension against the sharp bound";
        case l2ext::ExperimentKind::monotone_t: return "monotone chain in t for the deformed weights";
        case l2ext::ExperimentKind::p_limit: return "p -> infinity limit against the sublevel integral";
        case l2ext::ExperimentKind::convexity: return "convexity of log dual norms along real t";
        case l2ext::ExperimentKind::nonreduced: return "extension across a jump of a singular weight";
        case l2ext::ExperimentKind::jump_spectrum: return "jumping numbers vs the integrability oracle";
    }
    return "";
}

enum Exit { kPass = 0, kCheckFailed = 1, kConfigError = 2, kConditioningError = 3 };

struct Options {
    std::string config;
    std::string out;
    std::string format;
    std::optional<int> quad_order;
    std::optional<int> degree;
};

int run(l2ext::ExperimentKind kind, const Options& opt) {
    auto cfg = l2ext::ExperimentConfig::load(opt.config);
    if (cfg.kind != kind)
        throw l2ext::ConfigError("config describes '" + l2ext::to_string(cfg.kind) + "', not '" +
                                 l2ext::to_string(kind) + "'");
    if (!opt.out.empty()) cfg.out_dir = opt.out;
    if (opt.format == "csv") cfg.format = l2ext::OutputFormat::csv;
    else if (opt.format == "json") cfg.format = l2ext::OutputFormat::json;
    if (opt.quad_order) cfg.radial_order = *opt.quad_order;
    if (opt.degree) cfg.degree = *opt.degree;
    cfg.validate();

    const auto report = l2ext::run_experiment(cfg);
    l2ext::write_outputs(report, cfg.out_dir, cfg.format);

    for (const auto& c : report.checks) {
        std::printf("%-14s %-40s lhs=%-24s rhs=%-24s tol=%g%s%s\n", l2ext::to_string(c.status).c_str(),
                    c.name.c_str(), l2ext::format_number(c.lhs).c_str(), l2ext::format_number(c.rhs).c_str(),
                    c.tolerance, c.note.empty() ? "" : "  # ", c.note.c_str());
    }
    std::printf("%s: %s (%.2fs), report in %s\n", report.id.c_str(), report.passed() ? "PASS" : "FAIL",
                report.wall_clock_seconds, cfg.out_dir.string().c_str());
    return report.passed() ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for optimal L2 extension in weighted Bergman spaces"};
    app.require_subcommand(1);

    Options opt;
    std::optional<l2ext::ExperimentKind> chosen;
    for (auto kind : {l2ext::ExperimentKind::ot_optimal, l2ext::ExperimentKind::monotone_t,
                      l2ext::ExperimentKind::p_limit, l2ext::ExperimentKind::convexity,
                      l2ext::ExperimentKind::nonreduced, l2ext::ExperimentKind::jump_spectrum}) {
        auto* sub = app.add_subcommand(l2ext::to_string(kind), describe(kind));
        sub->add_option("--config", opt.config, "experiment JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory (overrides config)");
        sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--quad-order", opt.quad_order, "radial quadrature order")->check(CLI::PositiveNumber);
        sub->add_option("--degree", opt.degree, "basis degree D")->check(CLI::NonNegativeNumber);
        sub->callback([&chosen, kind] { chosen = kind; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kConfigError;
    }

    try {
        return run(*chosen, opt);
    } catch (const l2ext::ConditioningError& e) {
        std::cerr << "conditioning error: " << e.what() << " (smallest pivot " << e.smallest_pivot() << ")\n";
        return kConditioningError;
    } catch (const l2ext::SingularIntegrandError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kConditioningError;
    } catch (const l2ext::Error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
}
