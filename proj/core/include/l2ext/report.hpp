#pragma once

#include "l2ext/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace l2ext {

enum class CheckStatus { pass, fail, indeterminate, info };

std::string to_string(CheckStatus status);

/// One verdict with both numeric sides and the tolerance it was judged with.
struct Check {
    std::string name;
    /// The statement being tested, in words.
    std::string claim;
    std::string relation;  // "<=", "==", ">=" ...
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    CheckStatus status = CheckStatus::info;
    std::string note;
};

/// lhs <= rhs + tol * |rhs|.
Check check_le(std::string name, std::string claim, double lhs, double rhs, double rel_tol);
/// |lhs - rhs| <= tol * |rhs| (tol absolute when rhs == 0).
Check check_eq(std::string name, std::string claim, double lhs, double rhs, double rel_tol);
/// lhs <= rhs + tol.
Check check_le_abs(std::string name, std::string claim, double lhs, double rhs, double abs_tol);
/// Reported for reference; never affects the exit status.
Check info(std::string name, std::string claim, double lhs, double rhs, std::string note = {});

struct SeriesRow {
    double grid_var = 0.0;
    double value = 0.0;
    double bound = 0.0;
    double scaled = 0.0;
    std::string verdict;
};

/// One CSV file: header grid_var,value,bound,scaled_value,verdict.
struct Series {
    std::string name;
    std::string grid_var;
    std::string value_label;
    std::string bound_label;
    std::string scaled_label;
    std::vector<SeriesRow> rows;
};

/// Free-form numeric table (convergence studies, spectra) emitted in the JSON report.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct VerificationReport {
    std::string experiment;
    std::string id;
    std::vector<Check> checks;
    std::vector<Series> series;
    std::vector<Table> tables;
    double wall_clock_seconds = 0.0;
    std::string config_echo;

    bool passed() const;
    const Check* find(const std::string& name) const;
};

std::string report_json(const VerificationReport& report);
std::string series_csv(const Series& series);

/// report.json always; one CSV per series when format is csv. Returns the files written.
std::vector<std::filesystem::path> write_outputs(const VerificationReport& report,
                                                 const std::filesystem::path& dir, OutputFormat format);

std::string format_number(double x);

}  // namespace l2ext
