#include "ndmlnr/scenario.hpp"

#include <map>
#include <set>

namespace ndmlnr {

std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> errors;
    auto err = [&errors](std::string msg) { errors.push_back(std::move(msg)); };

    std::set<NodeId> ids;
    for (const auto& n : s.nodes) {
        if (n.id <= 0) err("node id " + std::to_string(n.id) + " must be positive");
        if (!ids.insert(n.id).second) err("duplicate node id " + std::to_string(n.id));
        if (n.kinematics.speed < 0.0)
            err("node " + std::to_string(n.id) + " has negative speed");
        if (n.initial_energy <= 0.0)
            err("node " + std::to_string(n.id) + " has non-positive initial energy");
    }
    if (s.nodes.empty()) err("scenario has no nodes");

    if (!(s.radio.range > 0.0)) err("radio.range must be > 0");
    if (s.radio.hop_delay < 0.0) err("radio.hop_delay must be >= 0");

    if (!(s.protocol.lsd_threshold > 0.0)) err("protocol.lsd_threshold must be > 0");
    if (!(s.protocol.wait_period > 0.0)) err("protocol.wait_period must be > 0");
    if (!(s.protocol.dest_window > 0.0)) err("protocol.dest_window must be > 0");
    if (s.protocol.ttl_limit < 0) err("protocol.ttl_limit must be >= 0");
    if (s.protocol.min_link_bandwidth && *s.protocol.min_link_bandwidth < 0.0)
        err("protocol.min_link_bandwidth must be >= 0");

    if (s.energy.alpha < 0.0 || s.energy.alpha > 1.0) err("energy.alpha must be in [0,1]");
    if (!(s.energy.sample_period > 0.0)) err("energy.sample_period must be > 0");
    if (s.energy.tx_cost < 0.0) err("energy.tx_cost must be >= 0");
    if (s.energy.rx_cost < 0.0) err("energy.rx_cost must be >= 0");
    if (s.energy.overhear_cost < 0.0) err("energy.overhear_cost must be >= 0");
    if (s.energy.idle_rate < 0.0) err("energy.idle_rate must be >= 0");

    if (!(s.duration > 0.0)) err("duration must be > 0");

    for (const auto& [key, row] : s.link_table.rows()) {
        auto name = std::to_string(key.first) + "-" + std::to_string(key.second);
        if (!ids.count(key.first) || !ids.count(key.second))
            err("link table row " + name + " references an unknown node");
        if (key.first == key.second) err("link table row " + name + " is a self link");
        if (row.lsd && *row.lsd < 0.0) err("link table row " + name + " has negative lsd");
        if (row.bandwidth < 0.0) err("link table row " + name + " has negative bandwidth");
        if (s.metric_mode == MetricMode::kTabulated && !row.lsd)
            err("link table row " + name + " needs an lsd value in tabulated mode");
    }

    // Tabulated metrics must cover every pair that starts in range; a pair
    // drifting into range later without a row fails at evaluation time.
    if (s.metric_mode == MetricMode::kTabulated) {
        for (std::size_t i = 0; i < s.nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < s.nodes.size(); ++j) {
                const auto& a = s.nodes[i];
                const auto& b = s.nodes[j];
                if (!in_range(a.kinematics, b.kinematics, s.radio)) continue;
                const LinkTableRow* row = s.link_table.find(a.id, b.id);
                if (row == nullptr || !row->lsd) {
                    err("tabulated mode: in-range pair " + std::to_string(a.id) + "-" +
                        std::to_string(b.id) + " has no link table lsd entry");
                }
            }
        }
    }

    for (std::size_t i = 0; i < s.workload.size(); ++i) {
        const auto& w = s.workload[i];
        auto name = "workload[" + std::to_string(i) + "]";
        if (!ids.count(w.source)) err(name + " source is not a node id");
        if (!ids.count(w.destination)) err(name + " destination is not a node id");
        if (w.source == w.destination) err(name + " source equals destination");
        if (w.time < 0.0) err(name + " time must be >= 0");
        if (w.time > s.duration) err(name + " starts after the scenario ends");
        if (w.rate < 0.0) err(name + " rate must be >= 0");
        if (w.jitter < 0.0 || w.jitter >= 1.0) err(name + " jitter must be in [0,1)");
    }

    return errors;
}

}  // namespace ndmlnr
