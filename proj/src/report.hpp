#pragma once

#include <string>
#include <vector>

namespace grs {

inline constexpr int kReportVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

enum class Verdict { Pass, Fail, Info };

struct CheckRecord {
    std::string name;
    std::string equation; // equation label, e.g. "(10)"
    double max_residual = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Pass;
    std::vector<std::string> notes;
};

struct CheckReport {
    std::string subcommand;
    std::string input_path;
    std::string input_digest;
    int points = 0;
    unsigned long long seed = 0;
    double tol = 0.0;
    double box_lo = 0.0, box_hi = 0.0;
    std::string kind_selection; // "1".."4" or "all"
    std::vector<CheckRecord> checks;

    // conjunction of the non-informational checks
    bool overall_pass() const;
    std::string to_json() const;
    std::string to_human() const;
};

std::string fnv1a_digest(const std::string& data);

// Human-readable table for a serialized machine report.
std::string render_json_report(const std::string& json);

} // namespace grs
