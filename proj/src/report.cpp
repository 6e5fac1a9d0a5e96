#include "report.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <sstream>

namespace grs {

namespace {
const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Info: return "info";
    }
    return "?";
}
} // namespace

std::string fnv1a_digest(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool CheckReport::overall_pass() const {
    for (const auto& c : checks)
        if (c.verdict == Verdict::Fail) return false;
    return true;
}

std::string CheckReport::to_json() const {
    nlohmann::ordered_json j;
    j["report_version"] = kReportVersion;
    j["tool_version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["input"] = {{"path", input_path}, {"digest", input_digest}};
    j["options"] = {{"points", points},
                    {"seed", seed},
                    {"tol", tol},
                    {"kind", kind_selection}};
    j["sample_box"] = {{"lo", box_lo}, {"hi", box_hi}};
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json rec;
        rec["name"] = c.name;
        rec["equation"] = c.equation;
        rec["max_residual"] = c.max_residual;
        rec["tolerance"] = c.tolerance;
        rec["verdict"] = verdict_name(c.verdict);
        rec["notes"] = c.notes;
        arr.push_back(std::move(rec));
    }
    j["checks"] = std::move(arr);
    j["overall"] = overall_pass() ? "pass" : "fail";
    return j.dump(2) + "\n";
}

std::string render_json_report(const std::string& json) {
    nlohmann::json j = nlohmann::json::parse(json);
    std::ostringstream out;
    out << j.value("subcommand", "?") << "  " << j["input"].value("path", "")
        << "  (" << j["input"].value("digest", "") << ")\n";
    const auto& o = j["options"];
    out << "points=" << o["points"].get<int>() << " seed=" << o["seed"].get<unsigned long long>()
        << " tol=" << o["tol"].get<double>() << " kind=" << o["kind"].get<std::string>()
        << " box=[" << j["sample_box"]["lo"].get<double>() << ", "
        << j["sample_box"]["hi"].get<double>() << "]\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-44s %-8s %-13s %-10s %s\n", "check", "eq", "residual",
                  "tol", "verdict");
    out << line;
    for (const auto& c : j["checks"]) {
        std::snprintf(line, sizeof line, "%-44s %-8s %-13.3e %-10.1e %s",
                      c["name"].get<std::string>().c_str(),
                      c["equation"].get<std::string>().c_str(), c["max_residual"].get<double>(),
                      c["tolerance"].get<double>(), c["verdict"].get<std::string>().c_str());
        out << line;
        for (const auto& n : c["notes"]) out << "  [" << n.get<std::string>() << "]";
        out << "\n";
    }
    out << "overall: " << j["overall"].get<std::string>() << "\n";
    return out.str();
}

std::string CheckReport::to_human() const {
    std::ostringstream out;
    out << subcommand << "  " << input_path << "  (" << input_digest << ")\n";
    out << "points=" << points << " seed=" << seed << " tol=" << tol << " kind="
        << kind_selection << " box=[" << box_lo << ", " << box_hi << "]\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-44s %-8s %-13s %-10s %s\n", "check", "eq", "residual",
                  "tol", "verdict");
    out << line;
    for (const auto& c : checks) {
        std::snprintf(line, sizeof line, "%-44s %-8s %-13.3e %-10.1e %s", c.name.c_str(),
                      c.equation.c_str(), c.max_residual, c.tolerance, verdict_name(c.verdict));
        out << line;
        for (const auto& n : c.notes) out << "  [" << n << "]";
        out << "\n";
    }
    out << "overall: " << (overall_pass() ? "pass" : "fail") << "\n";
    return out.str();
}

} // namespace grs
