#pragma once

#include "kras/report.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace kras::cli {

inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;

/// A report plus command-specific results, printed as text or JSON.
struct ReportDocument {
    std::string command;  // argv echo
    Report report;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    bool errored = false;
};

nlohmann::ordered_json to_json(const ReportDocument& doc);
std::string to_text(const ReportDocument& doc);

/// Full command-line front end. Returns the process exit code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kras::cli
