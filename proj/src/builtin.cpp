#include "ndmlnr/builtin.hpp"

namespace ndmlnr {

namespace {

void add_node(Scenario& s, NodeId id, double x, double y, double speed = 0.0,
              double heading = 0.0, double energy = 100.0) {
    NodeSpec n;
    n.id = id;
    n.kinematics = {x, y, speed, normalize_heading(heading)};
    n.initial_energy = energy;
    s.nodes.push_back(n);
}

void add_link(Scenario& s, NodeId a, NodeId b, double lsd, double bandwidth) {
    s.link_table.insert(a, b, LinkTableRow{lsd, bandwidth});
}

// Unit-disk-exact positions for the nine-node example topology:
// 1-{2,4,7}, 2-{3,4}, 3-{6}, 4-{5,8}, 5-{6,9}, 6-{9}, 8-{9}.
void place_nodes(Scenario& s, bool moving) {
    add_node(s, 1, 16.8, -9.5);
    add_node(s, 2, 56.6, 53.1);
    // In the failover variant node 3 recedes from node 2, so the backup route
    // link 2-3 expires 55 s in.
    if (moving) {
        add_node(s, 3, 132.8, 102.7, 0.165, 0.5770207387604676);
    } else {
        add_node(s, 3, 132.8, 102.7);
    }
    add_node(s, 4, 97.0, -33.4);
    add_node(s, 5, 148.5, -4.5);
    add_node(s, 6, 187.6, 24.5);
    add_node(s, 7, -45.6, -70.6);
    add_node(s, 8, 155.0, -108.0);
    // Node 9 drifts east, away from both 8 and 5: LET(8,9) ~ 47.8 s,
    // LET(5,9) ~ 37.3 s, LET(6,9) ~ 81 s at t=0.
    if (moving) {
        add_node(s, 9, 224.0, -53.0, 0.3132085886434151, 6.238791356011264);
    } else {
        add_node(s, 9, 224.0, -53.0);
    }
}

// Per-link stability and bandwidth. The narrative's cumulative sums pin
// every bandwidth: 8, 8+6=14, 14+3=17 along the top; 7, 7+7=14, 14+5=19 and
// 7+8=15, 15+6=21, 21+7=28 along the bottom. The direct 1-4 entry uses the
// cumulative value 7 (the printed table value 8 disagrees with every
// downstream sum).
void fill_link_table(Scenario& s) {
    add_link(s, 1, 2, 20.0, 8.0);
    add_link(s, 1, 4, 20.0, 7.0);
    add_link(s, 1, 7, 9.0, 6.0);
    add_link(s, 2, 3, 19.0, 6.0);
    add_link(s, 2, 4, 17.0, 5.0);
    add_link(s, 3, 6, 17.0, 3.0);
    add_link(s, 4, 5, 16.0, 7.0);
    add_link(s, 4, 8, 18.0, 8.0);
    add_link(s, 5, 6, 16.0, 5.0);
    add_link(s, 5, 9, 16.0, 8.0);
    add_link(s, 6, 9, 19.0, 7.0);
    add_link(s, 8, 9, 18.0, 6.0);
}

}  // namespace

Scenario figure4_scenario() {
    Scenario s;
    s.name = "figure4";
    place_nodes(s, /*moving=*/false);
    s.radio = {100.0, 0.0};
    s.protocol.lsd_threshold = 15.0;
    s.protocol.wait_period = 5.0;
    s.protocol.dest_window = 10.0;
    s.protocol.ttl_limit = 0;
    s.protocol.lsd_mode = LsdMode::kLastHop;
    s.energy = EnergyConfig{};
    s.metric_mode = MetricMode::kTabulated;
    fill_link_table(s);
    s.workload.push_back(WorkloadEntry{0.0, 1, 6, 0.0, 0.0});
    s.duration = 20.0;
    s.seed = 1;
    return s;
}

Scenario node9_failover_scenario() {
    Scenario s;
    s.name = "node9-failover";
    place_nodes(s, /*moving=*/true);
    s.radio = {100.0, 0.001};
    s.protocol.lsd_threshold = 15.0;
    s.protocol.wait_period = 5.0;
    s.protocol.dest_window = 10.0;
    s.protocol.ttl_limit = 0;
    s.protocol.lsd_mode = LsdMode::kLastHop;
    // Chunky per-packet costs so relayed data traffic dominates each drain
    // window; the stability metric then tracks forwarding load.
    s.energy.alpha = 0.3;
    s.energy.sample_period = 1.0;
    s.energy.tx_cost = 0.5;
    s.energy.rx_cost = 0.5;
    s.energy.overhear_cost = 0.1;
    s.energy.idle_rate = 0.001;
    s.metric_mode = MetricMode::kComputed;
    fill_link_table(s);  // bandwidths still come from the table
    s.workload.push_back(WorkloadEntry{0.0, 1, 6, 2.0, 0.0});
    s.duration = 40.0;
    s.seed = 1;
    return s;
}

}  // namespace ndmlnr
