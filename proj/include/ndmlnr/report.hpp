#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ndmlnr/protocol.hpp"
#include "ndmlnr/trace.hpp"

namespace ndmlnr {

struct RouteRecord {
    std::string path;
    double bandwidth = 0.0;
    double installed_at = 0.0;
    std::optional<double> disabled_at;
    std::string final_status;  // primary | backup | disabled
    double lifetime = 0.0;     // until disable, or run end while still installed
};

struct RequestRecord {
    NodeId source = 0;
    NodeId destination = 0;
    int request_id = 0;
    double originated_at = 0.0;
    std::optional<double> latency;  // first install minus origination
    bool failed = false;            // no route was ever installed
    std::vector<RouteRecord> routes;
};

struct MessageCounts {
    std::uint64_t rreq_sent = 0;
    std::uint64_t rrep_sent = 0;
    std::uint64_t nodeoff_sent = 0;
    std::uint64_t routedisable_sent = 0;
    std::uint64_t data_emitted = 0;
    std::uint64_t data_delivered = 0;

    bool operator==(const MessageCounts&) const = default;
};

/// Everything the run produced, all recomputable from the trace alone.
struct RunReport {
    double final_time = 0.0;
    std::uint64_t trace_records = 0;
    MessageCounts counts;
    std::vector<RequestRecord> requests;
    std::map<NodeId, double> final_residual;
};

nlohmann::ordered_json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::ordered_json& j);

/// Independent reconstruction of the report from trace records; `verify`
/// compares this against the report the engine wrote.
RunReport report_from_trace(const std::vector<TraceRecord>& records);

/// Byte-level equality of the serialized form.
bool reports_equal(const RunReport& a, const RunReport& b);

}  // namespace ndmlnr
