#pragma once

#include "kras/report.hpp"

#include <gmpxx.h>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kras::gersten {

/// Malformed scenario text, reported with its 1-based line (0 when global).
class ScenarioParseError : public std::invalid_argument {
public:
    ScenarioParseError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

/// Integer macro expressions: + - * / (exact) % ^, parentheses, unary minus,
/// inv(a, b) (inverse of a modulo b in [0, b)) and names bound in env.
/// Throws std::invalid_argument.
mpz_class eval_int_expr(std::string_view text, const std::map<std::string, mpz_class>& env);

struct ScenarioOptions {
    std::map<std::string, long> params;  // overrides of `param` defaults
    std::set<std::string> disabled_certificates;
    std::optional<std::vector<std::string>> twist_order;
};

struct ScenarioResult {
    Report report;
    bool errored = false;  // a declaration check or residue could not be carried out
    std::string error;
    std::map<std::string, long> params;  // effective parameters

    bool passed() const { return !errored && report.ok(); }
};

struct ScenarioInfo {
    std::vector<std::pair<std::string, long>> params;  // name, default
    std::vector<std::string> certificates;
};

/// Parameters and certificate names declared by a scenario.
ScenarioInfo describe_scenario(std::string_view text);

/// Expands macros, checks the statement structure, then executes the steps
/// in order. A failed assert halts the run; later steps are skipped. Throws
/// ScenarioParseError for malformed text (polynomial and symbol syntax is
/// checked when its step executes) and for unknown parameter overrides.
ScenarioResult run_scenario(std::string_view text, const ScenarioOptions& options = {});

}  // namespace kras::gersten
