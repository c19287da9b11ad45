#include "ndmlnr/report.hpp"

#include <map>
#include <stdexcept>

namespace ndmlnr {

namespace {

nlohmann::ordered_json route_to_json(const RouteRecord& r) {
    nlohmann::ordered_json j;
    j["path"] = r.path;
    j["bandwidth"] = r.bandwidth;
    j["installed_at"] = r.installed_at;
    j["disabled_at"] = r.disabled_at ? nlohmann::ordered_json(*r.disabled_at)
                                     : nlohmann::ordered_json(nullptr);
    j["final_status"] = r.final_status;
    j["lifetime"] = r.lifetime;
    return j;
}

}  // namespace

nlohmann::ordered_json report_to_json(const RunReport& report) {
    nlohmann::ordered_json j;
    j["final_time"] = report.final_time;
    j["trace_records"] = report.trace_records;
    j["counts"] = {
        {"rreq_sent", report.counts.rreq_sent},
        {"rrep_sent", report.counts.rrep_sent},
        {"nodeoff_sent", report.counts.nodeoff_sent},
        {"routedisable_sent", report.counts.routedisable_sent},
        {"data_emitted", report.counts.data_emitted},
        {"data_delivered", report.counts.data_delivered},
    };
    j["requests"] = nlohmann::ordered_json::array();
    for (const auto& req : report.requests) {
        nlohmann::ordered_json r;
        r["source"] = req.source;
        r["destination"] = req.destination;
        r["request_id"] = req.request_id;
        r["originated_at"] = req.originated_at;
        r["latency"] = req.latency ? nlohmann::ordered_json(*req.latency)
                                   : nlohmann::ordered_json(nullptr);
        r["failed"] = req.failed;
        r["routes"] = nlohmann::ordered_json::array();
        for (const auto& route : req.routes) r["routes"].push_back(route_to_json(route));
        j["requests"].push_back(std::move(r));
    }
    j["final_residual"] = nlohmann::ordered_json::object();
    for (const auto& [id, residual] : report.final_residual) {
        j["final_residual"][std::to_string(id)] = residual;
    }
    return j;
}

RunReport report_from_json(const nlohmann::ordered_json& j) {
    RunReport rep;
    rep.final_time = j.at("final_time").get<double>();
    rep.trace_records = j.at("trace_records").get<std::uint64_t>();
    const auto& c = j.at("counts");
    rep.counts.rreq_sent = c.at("rreq_sent").get<std::uint64_t>();
    rep.counts.rrep_sent = c.at("rrep_sent").get<std::uint64_t>();
    rep.counts.nodeoff_sent = c.at("nodeoff_sent").get<std::uint64_t>();
    rep.counts.routedisable_sent = c.at("routedisable_sent").get<std::uint64_t>();
    rep.counts.data_emitted = c.at("data_emitted").get<std::uint64_t>();
    rep.counts.data_delivered = c.at("data_delivered").get<std::uint64_t>();
    for (const auto& r : j.at("requests")) {
        RequestRecord req;
        req.source = r.at("source").get<NodeId>();
        req.destination = r.at("destination").get<NodeId>();
        req.request_id = r.at("request_id").get<int>();
        req.originated_at = r.at("originated_at").get<double>();
        if (!r.at("latency").is_null()) req.latency = r.at("latency").get<double>();
        req.failed = r.at("failed").get<bool>();
        for (const auto& rt : r.at("routes")) {
            RouteRecord route;
            route.path = rt.at("path").get<std::string>();
            route.bandwidth = rt.at("bandwidth").get<double>();
            route.installed_at = rt.at("installed_at").get<double>();
            if (!rt.at("disabled_at").is_null())
                route.disabled_at = rt.at("disabled_at").get<double>();
            route.final_status = rt.at("final_status").get<std::string>();
            route.lifetime = rt.at("lifetime").get<double>();
            req.routes.push_back(std::move(route));
        }
        rep.requests.push_back(std::move(req));
    }
    for (const auto& [key, value] : j.at("final_residual").items()) {
        rep.final_residual[std::stoi(key)] = value.get<double>();
    }
    return rep;
}

RunReport report_from_trace(const std::vector<TraceRecord>& records) {
    RunReport rep;
    std::map<RoundKey, std::size_t> request_index;
    std::map<NodeId, double> residual;

    auto round_of = [](const Detail& d) {
        return RoundKey{d.at("src").get<NodeId>(), d.at("dst").get<NodeId>(),
                        d.at("id").get<int>()};
    };
    auto find_route = [&](const RoundKey& round, const std::string& path) -> RouteRecord& {
        auto it = request_index.find(round);
        if (it == request_index.end())
            throw std::runtime_error("trace references an unknown request");
        for (auto& r : rep.requests[it->second].routes) {
            if (r.path == path) return r;
        }
        throw std::runtime_error("trace references an unknown route " + path);
    };

    for (const auto& rec : records) {
        const Detail& d = rec.detail;
        if (rec.event == "NODE_INIT" || rec.event == "ENERGY_CHARGE" ||
            rec.event == "ENERGY_SAMPLE") {
            residual[*rec.node] = d.at("residual").get<double>();
        } else if (rec.event == "RREQ_ORIGINATE") {
            RequestRecord req;
            req.source = d.at("src").get<NodeId>();
            req.destination = d.at("dst").get<NodeId>();
            req.request_id = d.at("id").get<int>();
            req.originated_at = rec.time;
            request_index[round_of(d)] = rep.requests.size();
            rep.requests.push_back(std::move(req));
            rep.counts.rreq_sent++;
        } else if (rec.event == "DISCOVERY_FAIL") {
            // An origination that found no eligible neighbor never broadcast
            // anything, but it is still a (failed) request.
            if (d.at("reason").get<std::string>() == "no_eligible_neighbor") {
                RequestRecord req;
                req.source = d.at("src").get<NodeId>();
                req.destination = d.at("dst").get<NodeId>();
                req.request_id = d.at("id").get<int>();
                req.originated_at = rec.time;
                request_index[round_of(d)] = rep.requests.size();
                rep.requests.push_back(std::move(req));
            }
        } else if (rec.event == "RREQ_FORWARD") {
            rep.counts.rreq_sent++;
        } else if (rec.event == "RREP_SEND") {
            rep.counts.rrep_sent++;
        } else if (rec.event == "NODEOFF") {
            rep.counts.nodeoff_sent++;
        } else if (rec.event == "ROUTEDISABLE") {
            rep.counts.routedisable_sent++;
        } else if (rec.event == "DATA_EMIT") {
            rep.counts.data_emitted++;
        } else if (rec.event == "DATA_DELIVERED") {
            rep.counts.data_delivered++;
        } else if (rec.event == "ROUTE_INSTALL") {
            const RoundKey round = round_of(d);
            auto it = request_index.find(round);
            if (it == request_index.end())
                throw std::runtime_error("install for an unknown request");
            RequestRecord& req = rep.requests[it->second];
            if (!req.latency) req.latency = rec.time - req.originated_at;
            RouteRecord route;
            route.path = d.at("path").get<std::string>();
            route.bandwidth = d.at("bw").get<double>();
            route.installed_at = rec.time;
            route.final_status = d.at("role").get<std::string>();
            req.routes.push_back(std::move(route));
        } else if (rec.event == "ROLE_CHANGE") {
            find_route(round_of(d), d.at("path").get<std::string>()).final_status =
                d.at("role").get<std::string>();
        } else if (rec.event == "PROMOTE") {
            find_route(round_of(d), d.at("path").get<std::string>()).final_status = "primary";
        } else if (rec.event == "ROUTE_DISABLED") {
            RouteRecord& route = find_route(round_of(d), d.at("path").get<std::string>());
            route.final_status = "disabled";
            route.disabled_at = rec.time;
        }
    }

    rep.trace_records = records.size();
    rep.final_time = records.empty() ? 0.0 : records.back().time;
    for (auto& req : rep.requests) {
        req.failed = req.routes.empty();
        for (auto& route : req.routes) {
            const double end = route.disabled_at ? *route.disabled_at : rep.final_time;
            route.lifetime = end - route.installed_at;
        }
    }
    rep.final_residual = std::move(residual);
    return rep;
}

bool reports_equal(const RunReport& a, const RunReport& b) {
    return report_to_json(a).dump() == report_to_json(b).dump();
}

}  // namespace ndmlnr
