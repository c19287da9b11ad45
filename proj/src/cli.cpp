#include "ndmlnr/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "ndmlnr/builtin.hpp"
#include "ndmlnr/report.hpp"
#include "ndmlnr/scenario_io.hpp"
#include "ndmlnr/trace.hpp"

namespace ndmlnr {

namespace {

bool write_lines(const std::string& path, const std::vector<std::string>& lines,
                 std::ostream& err) {
    std::ofstream out(path);
    if (!out) {
        err << "io error: cannot open " << path << " for writing\n";
        return false;
    }
    for (const auto& line : lines) out << line << '\n';
    out.flush();
    if (!out) {
        err << "io error: failed writing " << path << "\n";
        return false;
    }
    return true;
}

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_scenario(opts.scenario_path);
    } catch (const std::exception& e) {
        const std::string what = e.what();
        err << what << "\n";
        return what.rfind("io:", 0) == 0 ? kExitIo : kExitInvalid;
    }
    if (opts.seed) scenario.seed = *opts.seed;

    if (auto errors = validate(scenario); !errors.empty()) {
        err << "scenario validation failed:\n";
        for (const auto& e : errors) err << "  " << e << "\n";
        return kExitInvalid;
    }

    RunResult result;
    try {
        result = run(scenario);
    } catch (const std::exception& e) {
        err << "run failed: " << e.what() << "\n";
        return kExitInvalid;
    }

    if (opts.trace_path) {
        if (!write_lines(*opts.trace_path, result.trace, err)) return kExitIo;
    } else {
        for (const auto& line : result.trace) out << line << '\n';
    }
    if (opts.report_path) {
        if (!write_lines(*opts.report_path, {report_to_json(result.report).dump(2)}, err))
            return kExitIo;
    }
    return kExitOk;
}

int cmd_example(std::ostream& out, std::ostream& err) {
    const Scenario scenario = figure4_scenario();
    RunResult result;
    try {
        result = run(scenario);
    } catch (const std::exception& e) {
        err << "example failed: " << e.what() << "\n";
        return kExitInvalid;
    }
    const auto records = parse_trace(result.trace);

    out << "worked example: discovery from node 1 to node 6\n";
    out << "(threshold 15, wait period 5 s, tabulated link metrics)\n\n";

    out << "wait-period selections:\n";
    for (const auto& rec : records) {
        if (rec.event != "NIT_SELECT") continue;
        out << "  node " << *rec.node << " selects entry from node "
            << rec.detail.at("from").get<int>() << " (LSD=" << metric_from(rec.detail.at("lsd"))
            << ", hops=" << rec.detail.at("hops").get<int>()
            << ", bw=" << rec.detail.at("bw").get<double>() << ")\n";
    }

    out << "\ncandidate paths at the destination:\n";
    for (const auto& rec : records) {
        if (rec.event != "DEST_CANDIDATE") continue;
        out << "  " << rec.detail.at("path").get<std::string>()
            << " bw=" << rec.detail.at("bw").get<double>() << "\n";
    }

    out << "\naccepted node-disjoint set:\n";
    for (const auto& rec : records) {
        if (rec.event == "ROUTE_INSTALL") {
            out << "  " << rec.detail.at("path").get<std::string>()
                << " bw=" << rec.detail.at("bw").get<double>() << " ("
                << rec.detail.at("role").get<std::string>() << ")\n";
        }
    }
    for (const auto& rec : records) {
        if (rec.event == "ROUTE_REJECT") {
            out << "  rejected " << rec.detail.at("path").get<std::string>()
                << " bw=" << rec.detail.at("bw").get<double>() << " (shares node "
                << rec.detail.at("shared").get<int>() << ")\n";
        }
    }
    return kExitOk;
}

int cmd_validate(const std::string& scenario_path, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_scenario(scenario_path);
    } catch (const std::exception& e) {
        const std::string what = e.what();
        err << what << "\n";
        return what.rfind("io:", 0) == 0 ? kExitIo : kExitInvalid;
    }
    const auto errors = validate(scenario);
    if (errors.empty()) {
        out << "OK\n";
        return kExitOk;
    }
    for (const auto& e : errors) out << e << "\n";
    return kExitInvalid;
}

int cmd_verify(const std::string& trace_path, const std::string& report_path,
               std::ostream& out, std::ostream& err) {
    std::ifstream tin(trace_path);
    if (!tin) {
        err << "io: cannot open trace file " << trace_path << "\n";
        return kExitIo;
    }
    std::vector<std::string> lines;
    for (std::string line; std::getline(tin, line);) lines.push_back(line);

    std::ifstream rin(report_path);
    if (!rin) {
        err << "io: cannot open report file " << report_path << "\n";
        return kExitIo;
    }

    try {
        const RunReport from_trace = report_from_trace(parse_trace(lines));
        const RunReport written = report_from_json(nlohmann::ordered_json::parse(rin));
        if (!reports_equal(from_trace, written)) {
            err << "report does not match the trace\n";
            return kExitInvalid;
        }
    } catch (const std::exception& e) {
        err << "verify failed: " << e.what() << "\n";
        return kExitInvalid;
    }
    out << "OK\n";
    return kExitOk;
}

}  // namespace ndmlnr
