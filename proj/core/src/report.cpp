#include "l2ext/report.hpp"

#include "l2ext/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace l2ext {

using nlohmann::ordered_json;

std::string to_string(CheckStatus status) {
    switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::indeterminate: return "indeterminate";
    case CheckStatus::info: return "info";
    }
    return "info";
}

namespace {

Check make(std::string name, std::string claim, std::string relation, double lhs, double rhs, double tol,
           bool ok) {
    Check c;
    c.name = std::move(name);
    c.claim = std::move(claim);
    c.relation = std::move(relation);
    c.lhs = lhs;
    c.rhs = rhs;
    c.tolerance = tol;
    c.status = ok ? CheckStatus::pass : CheckStatus::fail;
    return c;
}

ordered_json number_or_string(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

}  // namespace

Check check_le(std::string name, std::string claim, double lhs, double rhs, double rel_tol) {
    const bool ok = lhs <= rhs + rel_tol * std::abs(rhs);
    return make(std::move(name), std::move(claim), "<=", lhs, rhs, rel_tol, ok);
}

Check check_eq(std::string name, std::string claim, double lhs, double rhs, double rel_tol) {
    const double scale = rhs == 0.0 ? 1.0 : std::abs(rhs);
    const bool ok = std::abs(lhs - rhs) <= rel_tol * scale;
    return make(std::move(name), std::move(claim), "==", lhs, rhs, rel_tol, ok);
}

Check check_le_abs(std::string name, std::string claim, double lhs, double rhs, double abs_tol) {
    const bool ok = lhs <= rhs + abs_tol;
    return make(std::move(name), std::move(claim), "<=", lhs, rhs, abs_tol, ok);
}

Check info(std::string name, std::string claim, double lhs, double rhs, std::string note) {
    Check c = make(std::move(name), std::move(claim), "~", lhs, rhs, 0.0, true);
    c.status = CheckStatus::info;
    c.note = std::move(note);
    return c;
}

bool VerificationReport::passed() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::fail) return false;
    return true;
}

const Check* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string report_json(const VerificationReport& report) {
    ordered_json doc;
    doc["experiment"] = report.experiment;
    doc["id"] = report.id;
    doc["passed"] = report.passed();
    doc["checks"] = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json j;
        j["name"] = c.name;
        j["claim"] = c.claim;
        j["relation"] = c.relation;
        j["lhs"] = number_or_string(c.lhs);
        j["rhs"] = number_or_string(c.rhs);
        j["tolerance"] = c.tolerance;
        j["status"] = to_string(c.status);
        if (!c.note.empty()) j["note"] = c.note;
        doc["checks"].push_back(j);
    }
    doc["series"] = ordered_json::array();
    for (const auto& s : report.series) {
        ordered_json j;
        j["name"] = s.name;
        j["grid_var"] = s.grid_var;
        j["value"] = s.value_label;
        j["bound"] = s.bound_label;
        j["scaled_value"] = s.scaled_label;
        j["rows"] = ordered_json::array();
        for (const auto& r : s.rows)
            j["rows"].push_back({number_or_string(r.grid_var), number_or_string(r.value),
                                 number_or_string(r.bound), number_or_string(r.scaled), r.verdict});
        doc["series"].push_back(j);
    }
    doc["tables"] = ordered_json::array();
    for (const auto& t : report.tables) {
        ordered_json j;
        j["name"] = t.name;
        j["columns"] = t.columns;
        j["rows"] = t.rows;
        doc["tables"].push_back(j);
    }
    doc["wall_clock_seconds"] = report.wall_clock_seconds;
    if (!report.config_echo.empty()) doc["config"] = ordered_json::parse(report.config_echo);
    return doc.dump(2) + "\n";
}

std::string series_csv(const Series& series) {
    std::string out = "grid_var,value,bound,scaled_value,verdict\n";
    for (const auto& r : series.rows) {
        out += format_number(r.grid_var) + "," + format_number(r.value) + "," + format_number(r.bound) + "," +
               format_number(r.scaled) + "," + r.verdict + "\n";
    }
    return out;
}

std::vector<std::filesystem::path> write_outputs(const VerificationReport& report,
                                                 const std::filesystem::path& dir, OutputFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto put = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write " + path.string());
        out << text;
        written.push_back(path);
    };
    put(dir / "report.json", report_json(report));
    if (format == OutputFormat::csv)
        for (const auto& s : report.series) put(dir / (s.name + ".csv"), series_csv(s));
    return written;
}

}  // namespace l2ext
