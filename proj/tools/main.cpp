#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ndmlnr/cli.hpp"

int run_cli(int argc, char** argv) {
    CLI::App app{"Deterministic discrete-event simulator of the NDMLNR "
                 "stability-aware node-disjoint multipath routing protocol"};
    app.require_subcommand(1);

    ndmlnr::RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "Execute a scenario file");
    run_cmd->add_option("scenario", run_opts.scenario_path, "Scenario JSON file")->required();
    std::string trace_path;
    std::string report_path;
    std::uint64_t seed = 0;
    auto* trace_opt = run_cmd->add_option("--trace", trace_path, "Trace output path (JSONL)");
    auto* report_opt = run_cmd->add_option("--report", report_path, "Report output path (JSON)");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the scenario seed");

    auto* example_cmd =
        app.add_subcommand("example", "Run the built-in worked example and summarize it");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Validate a scenario file");
    validate_cmd->add_option("scenario", validate_path, "Scenario JSON file")->required();

    std::string verify_trace;
    std::string verify_report;
    auto* verify_cmd =
        app.add_subcommand("verify", "Check that a report is recomputable from its trace");
    verify_cmd->add_option("trace", verify_trace, "Trace file (JSONL)")->required();
    verify_cmd->add_option("report", verify_report, "Report file (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        if (*trace_opt) run_opts.trace_path = trace_path;
        if (*report_opt) run_opts.report_path = report_path;
        if (*seed_opt) run_opts.seed = seed;
        return ndmlnr::cmd_run(run_opts, std::cout, std::cerr);
    }
    if (example_cmd->parsed()) return ndmlnr::cmd_example(std::cout, std::cerr);
    if (validate_cmd->parsed()) return ndmlnr::cmd_validate(validate_path, std::cout, std::cerr);
    if (verify_cmd->parsed())
        return ndmlnr::cmd_verify(verify_trace, verify_report, std::cout, std::cerr);
    return ndmlnr::kExitInvalid;
}

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return ndmlnr::kExitInvalid;
    }
}
