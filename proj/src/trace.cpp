#include "ndmlnr/trace.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace ndmlnr {

Detail metric_value(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}

double metric_from(const Detail& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw std::runtime_error("unexpected metric string: " + v.get<std::string>());
    }
    return v.get<double>();
}

std::string format_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", t);
    return buf;
}

double quantize_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", t);
    return std::strtod(buf, nullptr);
}

void TraceWriter::emit(double time, std::optional<NodeId> node, std::string_view event,
                       const Detail& detail) {
    std::string line = "{\"time\":";
    line += format_time(time);
    line += ",\"node\":";
    line += node ? std::to_string(*node) : "\"-\"";
    line += ",\"event\":\"";
    line += event;
    line += "\",\"detail\":";
    line += detail.dump();
    line += "}";
    lines_.push_back(std::move(line));
    last_time_ = time;
}

TraceRecord parse_trace_line(const std::string& line) {
    const auto j = nlohmann::ordered_json::parse(line);
    TraceRecord rec;
    rec.time = j.at("time").get<double>();
    const auto& node = j.at("node");
    if (node.is_number_integer()) {
        rec.node = node.get<NodeId>();
    } else if (!(node.is_string() && node.get<std::string>() == "-")) {
        throw std::runtime_error("trace line has a malformed node field: " + line);
    }
    rec.event = j.at("event").get<std::string>();
    rec.detail = j.at("detail");
    return rec;
}

std::vector<TraceRecord> parse_trace(const std::vector<std::string>& lines) {
    std::vector<TraceRecord> out;
    out.reserve(lines.size());
    for (const auto& line : lines) {
        if (line.empty()) continue;
        out.push_back(parse_trace_line(line));
    }
    return out;
}

}  // namespace ndmlnr
