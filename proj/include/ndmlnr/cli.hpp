#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ndmlnr/engine.hpp"

namespace ndmlnr {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // parse or validation failure
inline constexpr int kExitIo = 2;       // filesystem failure

struct RunOptions {
    std::string scenario_path;
    std::optional<std::string> trace_path;   // default: stdout
    std::optional<std::string> report_path;  // default: not written
    std::optional<std::uint64_t> seed;       // overrides the scenario's seed
};

/// `run`: validate, execute, write the trace (JSONL) and optional report.
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

/// `example`: run the embedded worked example and print a readable summary
/// of the NIT selections, candidate paths, and the accepted disjoint set.
int cmd_example(std::ostream& out, std::ostream& err);

/// `validate`: print OK or every violation.
int cmd_validate(const std::string& scenario_path, std::ostream& out, std::ostream& err);

/// `verify`: recompute the report from a trace file and compare it with the
/// report file the run wrote.
int cmd_verify(const std::string& trace_path, const std::string& report_path,
               std::ostream& out, std::ostream& err);

}  // namespace ndmlnr
