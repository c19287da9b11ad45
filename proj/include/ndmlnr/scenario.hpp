#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ndmlnr/energy.hpp"
#include "ndmlnr/kinematics.hpp"
#include "ndmlnr/protocol.hpp"
#include "ndmlnr/stability.hpp"

namespace ndmlnr {

struct NodeSpec {
    NodeId id = 0;
    NodeKinematics kinematics;
    double initial_energy = 100.0;  // J
};

/// One traffic flow: a discovery is started at `time`, then data packets are
/// emitted on the current primary route every 1/rate seconds (rate 0 means
/// discovery only). `jitter` shifts each emission by a seeded uniform draw
/// in [0, jitter/rate).
struct WorkloadEntry {
    double time = 0.0;
    NodeId source = 0;
    NodeId destination = 0;
    double rate = 0.0;   // packets per second
    double jitter = 0.0; // fraction of the emission period, in [0, 1)
};

struct Scenario {
    std::string name;
    std::vector<NodeSpec> nodes;
    RadioModel radio;
    ProtocolConfig protocol;
    EnergyConfig energy;
    MetricMode metric_mode = MetricMode::kComputed;
    LinkTable link_table;
    std::vector<WorkloadEntry> workload;
    double duration = 0.0;  // s
    std::uint64_t seed = 0;
};

/// All invariant violations, empty when the scenario is runnable. Never
/// throws; every problem is reported at once.
std::vector<std::string> validate(const Scenario& scenario);

}  // namespace ndmlnr
