#include "ndmlnr/scenario_io.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace ndmlnr {

namespace {

using Json = nlohmann::ordered_json;

void require_keys(const Json& j, const std::string& where,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
    if (!j.is_object()) throw std::runtime_error(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!required.count(key) && !optional.count(key)) {
            throw std::runtime_error(where + " has unknown key \"" + key + "\"");
        }
    }
    for (const auto& key : required) {
        if (!j.contains(key)) {
            throw std::runtime_error(where + " is missing key \"" + key + "\"");
        }
    }
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw std::runtime_error(where + " must be a number");
    return j.get<double>();
}

}  // namespace

Scenario scenario_from_json(const Json& j) {
    require_keys(j, "scenario",
                 {"nodes", "radio", "duration"},
                 {"protocol", "energy", "metric_mode", "link_table", "workload", "seed"});
    Scenario s;

    if (!j.at("nodes").is_array()) throw std::runtime_error("nodes must be an array");
    for (const auto& nj : j.at("nodes")) {
        require_keys(nj, "node", {"id", "x", "y"}, {"speed", "heading", "energy"});
        NodeSpec n;
        n.id = nj.at("id").get<NodeId>();
        n.kinematics.x = number(nj.at("x"), "node.x");
        n.kinematics.y = number(nj.at("y"), "node.y");
        n.kinematics.speed = nj.contains("speed") ? number(nj.at("speed"), "node.speed") : 0.0;
        n.kinematics.heading =
            nj.contains("heading") ? number(nj.at("heading"), "node.heading") : 0.0;
        n.kinematics.heading = normalize_heading(n.kinematics.heading);
        n.initial_energy = nj.contains("energy") ? number(nj.at("energy"), "node.energy") : 100.0;
        s.nodes.push_back(n);
    }

    const auto& rj = j.at("radio");
    require_keys(rj, "radio", {"range"}, {"hop_delay"});
    s.radio.range = number(rj.at("range"), "radio.range");
    s.radio.hop_delay = rj.contains("hop_delay") ? number(rj.at("hop_delay"), "radio.hop_delay")
                                                 : 0.001;

    if (j.contains("protocol")) {
        const auto& pj = j.at("protocol");
        require_keys(pj, "protocol", {},
                     {"lsd_threshold", "wait_period", "dest_window", "ttl_limit",
                      "min_link_bandwidth", "lsd_mode"});
        if (pj.contains("lsd_threshold"))
            s.protocol.lsd_threshold = number(pj.at("lsd_threshold"), "protocol.lsd_threshold");
        if (pj.contains("wait_period"))
            s.protocol.wait_period = number(pj.at("wait_period"), "protocol.wait_period");
        if (pj.contains("dest_window")) {
            s.protocol.dest_window = number(pj.at("dest_window"), "protocol.dest_window");
        } else {
            s.protocol.dest_window = 2.0 * s.protocol.wait_period;
        }
        if (pj.contains("ttl_limit")) s.protocol.ttl_limit = pj.at("ttl_limit").get<int>();
        if (pj.contains("min_link_bandwidth") && !pj.at("min_link_bandwidth").is_null()) {
            s.protocol.min_link_bandwidth =
                number(pj.at("min_link_bandwidth"), "protocol.min_link_bandwidth");
        }
        if (pj.contains("lsd_mode")) {
            const auto mode = pj.at("lsd_mode").get<std::string>();
            if (mode == "last-hop") {
                s.protocol.lsd_mode = LsdMode::kLastHop;
            } else if (mode == "bottleneck") {
                s.protocol.lsd_mode = LsdMode::kBottleneck;
            } else {
                throw std::runtime_error("protocol.lsd_mode must be last-hop or bottleneck");
            }
        }
    } else {
        s.protocol.dest_window = 2.0 * s.protocol.wait_period;
    }

    if (j.contains("energy")) {
        const auto& ej = j.at("energy");
        require_keys(ej, "energy", {},
                     {"alpha", "sample_period", "tx_cost", "rx_cost", "overhear_cost",
                      "idle_rate"});
        if (ej.contains("alpha")) s.energy.alpha = number(ej.at("alpha"), "energy.alpha");
        if (ej.contains("sample_period"))
            s.energy.sample_period = number(ej.at("sample_period"), "energy.sample_period");
        if (ej.contains("tx_cost")) s.energy.tx_cost = number(ej.at("tx_cost"), "energy.tx_cost");
        if (ej.contains("rx_cost")) s.energy.rx_cost = number(ej.at("rx_cost"), "energy.rx_cost");
        if (ej.contains("overhear_cost"))
            s.energy.overhear_cost = number(ej.at("overhear_cost"), "energy.overhear_cost");
        if (ej.contains("idle_rate"))
            s.energy.idle_rate = number(ej.at("idle_rate"), "energy.idle_rate");
    }

    if (j.contains("metric_mode")) {
        const auto mode = j.at("metric_mode").get<std::string>();
        if (mode == "computed") {
            s.metric_mode = MetricMode::kComputed;
        } else if (mode == "tabulated") {
            s.metric_mode = MetricMode::kTabulated;
        } else {
            throw std::runtime_error("metric_mode must be computed or tabulated");
        }
    }

    if (j.contains("link_table") && !j.at("link_table").is_null()) {
        if (!j.at("link_table").is_array())
            throw std::runtime_error("link_table must be an array");
        for (const auto& lj : j.at("link_table")) {
            require_keys(lj, "link_table row", {"a", "b"}, {"lsd", "bandwidth"});
            LinkTableRow row;
            if (lj.contains("lsd") && !lj.at("lsd").is_null())
                row.lsd = number(lj.at("lsd"), "link_table.lsd");
            if (lj.contains("bandwidth"))
                row.bandwidth = number(lj.at("bandwidth"), "link_table.bandwidth");
            const int a = lj.at("a").get<int>();
            const int b = lj.at("b").get<int>();
            if (s.link_table.find(a, b) != nullptr) {
                throw std::runtime_error("link_table has a duplicate row for " +
                                         std::to_string(a) + "-" + std::to_string(b));
            }
            s.link_table.insert(a, b, row);
        }
    }

    if (j.contains("workload")) {
        if (!j.at("workload").is_array()) throw std::runtime_error("workload must be an array");
        for (const auto& wj : j.at("workload")) {
            require_keys(wj, "workload entry", {"time", "source", "destination"},
                         {"rate", "jitter"});
            WorkloadEntry w;
            w.time = number(wj.at("time"), "workload.time");
            w.source = wj.at("source").get<NodeId>();
            w.destination = wj.at("destination").get<NodeId>();
            if (wj.contains("rate")) w.rate = number(wj.at("rate"), "workload.rate");
            if (wj.contains("jitter")) w.jitter = number(wj.at("jitter"), "workload.jitter");
            s.workload.push_back(w);
        }
    }

    s.duration = number(j.at("duration"), "duration");
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
    Json j;
    j["nodes"] = Json::array();
    for (const auto& n : s.nodes) {
        j["nodes"].push_back({{"id", n.id},
                              {"x", n.kinematics.x},
                              {"y", n.kinematics.y},
                              {"speed", n.kinematics.speed},
                              {"heading", n.kinematics.heading},
                              {"energy", n.initial_energy}});
    }
    j["radio"] = {{"range", s.radio.range}, {"hop_delay", s.radio.hop_delay}};
    j["protocol"] = {
        {"lsd_threshold", s.protocol.lsd_threshold},
        {"wait_period", s.protocol.wait_period},
        {"dest_window", s.protocol.dest_window},
        {"ttl_limit", s.protocol.ttl_limit},
        {"min_link_bandwidth", s.protocol.min_link_bandwidth
                                   ? Json(*s.protocol.min_link_bandwidth)
                                   : Json(nullptr)},
        {"lsd_mode", s.protocol.lsd_mode == LsdMode::kLastHop ? "last-hop" : "bottleneck"},
    };
    j["energy"] = {
        {"alpha", s.energy.alpha},
        {"sample_period", s.energy.sample_period},
        {"tx_cost", s.energy.tx_cost},
        {"rx_cost", s.energy.rx_cost},
        {"overhear_cost", s.energy.overhear_cost},
        {"idle_rate", s.energy.idle_rate},
    };
    j["metric_mode"] = s.metric_mode == MetricMode::kComputed ? "computed" : "tabulated";
    j["link_table"] = Json::array();
    for (const auto& [key, row] : s.link_table.rows()) {
        Json lj;
        lj["a"] = key.first;
        lj["b"] = key.second;
        if (row.lsd) lj["lsd"] = *row.lsd;
        lj["bandwidth"] = row.bandwidth;
        j["link_table"].push_back(std::move(lj));
    }
    j["workload"] = Json::array();
    for (const auto& w : s.workload) {
        j["workload"].push_back({{"time", w.time},
                                 {"source", w.source},
                                 {"destination", w.destination},
                                 {"rate", w.rate},
                                 {"jitter", w.jitter}});
    }
    j["duration"] = s.duration;
    j["seed"] = s.seed;
    return j;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot open scenario file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("scenario parse error: ") + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace ndmlnr
