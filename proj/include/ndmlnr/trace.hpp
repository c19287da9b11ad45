#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ndmlnr/protocol.hpp"

namespace ndmlnr {

/// Detail maps keep their insertion order so trace lines are byte-stable.
using Detail = nlohmann::ordered_json;

/// One parsed trace line.
struct TraceRecord {
    double time = 0.0;
    std::optional<NodeId> node;  // absent = engine-level record ("-")
    std::string event;
    Detail detail;
};

/// Renders "inf" for infinite metric values, a plain number otherwise.
Detail metric_value(double v);

/// Reads a metric back; accepts both the "inf" string and numbers.
double metric_from(const Detail& v);

/// Fixed 6-decimal rendering used for the time field.
std::string format_time(double t);

/// Nearest double on the microsecond grid; format_time(quantize_time(t))
/// parses back to exactly quantize_time(t). The engine schedules on this
/// grid so trace timestamps reproduce event times without loss.
double quantize_time(double t);

/// Accumulates trace lines with a deterministic, byte-exact layout:
/// {"time":<%.6f>,"node":<id|"-">,"event":"<EVENT>","detail":{...}}
class TraceWriter {
public:
    void emit(double time, std::optional<NodeId> node, std::string_view event,
              const Detail& detail);

    const std::vector<std::string>& lines() const { return lines_; }
    std::size_t size() const { return lines_.size(); }
    double last_time() const { return last_time_; }
    bool empty() const { return lines_.empty(); }

private:
    std::vector<std::string> lines_;
    double last_time_ = 0.0;
};

/// Parses one line as written by TraceWriter. Throws on malformed input.
TraceRecord parse_trace_line(const std::string& line);

std::vector<TraceRecord> parse_trace(const std::vector<std::string>& lines);

}  // namespace ndmlnr
