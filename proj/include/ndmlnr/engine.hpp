#pragma once

#include <string>
#include <vector>

#include "ndmlnr/report.hpp"
#include "ndmlnr/scenario.hpp"

namespace ndmlnr {

struct RunResult {
    std::vector<std::string> trace;  // one JSONL record per line
    RunReport report;
};

/// Executes the scenario to completion. Deterministic: the same scenario and
/// seed always produce a byte-identical trace. Throws std::invalid_argument
/// when validation fails (message lists every violation).
RunResult run(const Scenario& scenario);

}  // namespace ndmlnr
