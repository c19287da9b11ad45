#pragma once

#include <string>

#include "json.hpp"

#include "ndmlnr/scenario.hpp"

namespace ndmlnr {

/// Parses a scenario document. Fail-closed: unknown keys at any level are
/// errors. Throws std::runtime_error with a diagnostic on any problem.
Scenario scenario_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json scenario_to_json(const Scenario& s);

/// Reads and parses a scenario file. Throws std::runtime_error ("io: ..."
/// prefix for filesystem problems, parse/shape diagnostics otherwise).
Scenario load_scenario(const std::string& path);

}  // namespace ndmlnr
