#pragma once

#include "l2ext/config.hpp"
#include "l2ext/report.hpp"

#include <span>

namespace l2ext {

struct Extrapolation {
    double limit = 0.0;
    double error = 0.0;
    double kappa = 0.0;
    bool indeterminate = false;
    std::string reason;
};

/// Fits value = c0 + c1 e^{kappa x} to the last four points of a series whose
/// x values strictly decrease; kappa comes from log-ratios of neighbouring
/// slopes. Returns c0 and |c1 e^{kappa x_last}|. A non-monotone tail or a
/// non-positive kappa is flagged indeterminate. ConfigError on fewer than four
/// points or unsorted x.
Extrapolation extrapolate_limit(std::span<const double> x, std::span<const double> values);

VerificationReport run_ot_optimal(const ExperimentConfig& cfg);
VerificationReport run_monotone_t(const ExperimentConfig& cfg);
VerificationReport run_p_limit(const ExperimentConfig& cfg);
VerificationReport run_convexity(const ExperimentConfig& cfg);
VerificationReport run_nonreduced(const ExperimentConfig& cfg);
VerificationReport run_jump_spectrum(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind and fills in timing and the config echo.
VerificationReport run_experiment(const ExperimentConfig& cfg);

}  // namespace l2ext
