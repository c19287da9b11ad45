#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "ndmlnr/kinematics.hpp"

namespace ndmlnr {

/// Floor on the drain rate in the LSD denominator; the energy factor can be
/// zero before any consumption.
inline constexpr double kEpsDrainRate = 1e-6;  // J/s

/// How the RREQ's LSD field evolves along a path.
enum class LsdMode {
    kLastHop,     // overwritten with the incoming link's LSD at each hop
    kBottleneck,  // minimum LSD over all links traversed so far
};

/// Stability and capacity of one directed link evaluation.
struct LinkMetrics {
    double let_value = 0.0;   // s (computed mode only)
    double drain_rate = 0.0;  // J/s of the receiving node
    double lsd = 0.0;
    double bandwidth = 0.0;   // Mbit/s of the link itself
};

struct ProtocolConfig {
    double lsd_threshold = 15.0;
    double wait_period = 5.0;   // s a node collects RREQs before selecting
    double dest_window = 10.0;  // s the destination collects candidate paths
    int ttl_limit = 0;          // max hops per RREQ; 0 = unlimited
    std::optional<double> min_link_bandwidth;  // Mbit/s; disabled when absent
    LsdMode lsd_mode = LsdMode::kLastHop;
};

/// Link Stability Degree: mobility factor over energy factor.
inline double compute_lsd(double let_value, double drain_rate) {
    if (std::isinf(let_value)) return std::numeric_limits<double>::infinity();
    return let_value / std::max(drain_rate, kEpsDrainRate);
}

/// A link participates in routing only while strictly above the threshold
/// (and above the bandwidth floor, when one is configured).
inline bool link_eligible(const LinkMetrics& m, const ProtocolConfig& cfg) {
    if (!(m.lsd > cfg.lsd_threshold)) return false;
    if (cfg.min_link_bandwidth && m.bandwidth < *cfg.min_link_bandwidth) return false;
    return true;
}

enum class MetricMode { kComputed, kTabulated };

/// One undirected row of the scenario link table. `lsd` is consulted in
/// tabulated mode only; `bandwidth` is the link capacity in both modes.
struct LinkTableRow {
    std::optional<double> lsd;
    double bandwidth = 0.0;
};

class LinkTable {
public:
    static std::pair<int, int> key(int a, int b) { return std::minmax(a, b); }

    void insert(int a, int b, LinkTableRow row) { rows_[key(a, b)] = row; }

    const LinkTableRow* find(int a, int b) const {
        auto it = rows_.find(key(a, b));
        return it == rows_.end() ? nullptr : &it->second;
    }

    bool empty() const { return rows_.empty(); }
    const std::map<std::pair<int, int>, LinkTableRow>& rows() const { return rows_; }

private:
    std::map<std::pair<int, int>, LinkTableRow> rows_;
};

/// Metrics of the link carrying traffic from `from` to `to`, evaluated with
/// the drain rate of the receiving node (the one that would carry the packet
/// onward). Computed mode derives LSD from kinematics and energy; tabulated
/// mode reads it verbatim from the scenario table. Bandwidth always comes
/// from the table (0 when the pair has no row in computed mode).
inline LinkMetrics link_metrics(MetricMode mode, const LinkTable& table,
                                const RadioModel& radio,
                                int from_id, const NodeKinematics& from_kin,
                                int to_id, const NodeKinematics& to_kin,
                                double receiver_drain_rate) {
    const LinkTableRow* row = table.find(from_id, to_id);
    LinkMetrics m;
    m.drain_rate = receiver_drain_rate;
    if (mode == MetricMode::kTabulated) {
        if (row == nullptr || !row->lsd.has_value()) {
            throw std::runtime_error("link table has no LSD entry for pair " +
                                     std::to_string(from_id) + "-" + std::to_string(to_id));
        }
        m.lsd = *row->lsd;
        m.bandwidth = row->bandwidth;
        m.let_value = std::numeric_limits<double>::quiet_NaN();  // not meaningful here
        return m;
    }
    m.let_value = compute_let(from_kin, to_kin, radio);
    m.lsd = compute_lsd(m.let_value, receiver_drain_rate);
    m.bandwidth = row != nullptr ? row->bandwidth : 0.0;
    return m;
}

}  // namespace ndmlnr
