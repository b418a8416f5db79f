#pragma once

#include "cdeg/harness.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace cdeg {

/// Parses scenario text; syntax errors report line and column of `source`.
nlohmann::json parse_scenario_text(const std::string& text, const std::string& source);

/// Validates a scenario document (unknown keys rejected) and returns it with
/// every default written out. canonicalize(canonicalize(d)) == canonicalize(d).
nlohmann::json canonicalize(const nlohmann::json& doc);

/// Builds the runtime objects from a (not necessarily canonical) document.
Scenario build_scenario(const nlohmann::json& doc);

/// Applies "a.b.c=value"; value is read as JSON when it parses, else as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

std::vector<std::string> bundled_scenario_names();
nlohmann::json bundled_scenario(const std::string& name);

}  // namespace cdeg
