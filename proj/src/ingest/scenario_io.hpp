#pragma once

#include "core/scenario.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cppa {

inline constexpr int kScenarioSchemaVersion = 1;

/// Parse failure with accumulated field-level diagnostics.
struct ParseError : std::runtime_error {
    explicit ParseError(std::vector<std::string> problems_in)
        : std::runtime_error(problems_in.empty() ? "parse error" : problems_in.front()),
          problems(std::move(problems_in)) {}
    std::vector<std::string> problems;
};

/// Parses and fully validates a scenario document. Throws ParseError with
/// one entry per diagnostic (field context included).
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

/// Canonical JSON form; parse(serialize(s)) == s.
std::string serialize_scenario(const Scenario& scenario);
void save_scenario_file(const Scenario& scenario, const std::string& path);

/// Selector from its JSON object form (absent fields are wildcards).
Selector selector_from_json_text(const std::string& json_text);

} // namespace cppa
