#pragma once

#include "ndmlnr/scenario.hpp"

namespace ndmlnr {

/// The bundled nine-node example network with tabulated link metrics
/// (threshold 15, wait 5 s, zero hop delay). Discovery from node 1 to node 6
/// yields candidate paths with bandwidths 17, 19 and 28 and installs the
/// node-disjoint pair 1-4-8-9-6 (primary) and 1-2-3-6 (backup).
Scenario figure4_scenario();

/// The same topology with computed metrics and slow node drift: data traffic
/// drives node 9's drain rate up until its upstream link 8-9 degrades, which
/// exercises NODEOFF, ROUTEDISABLE, backup promotion, and rediscovery once
/// the promoted backup degrades too.
Scenario node9_failover_scenario();

}  // namespace ndmlnr
