#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace ndmlnr {

using NodeId = int;

/// Identifies one discovery round.
struct RoundKey {
    NodeId source = 0;
    NodeId destination = 0;
    int request_id = 0;

    auto operator<=>(const RoundKey&) const = default;
};

/// The route request packet: type/addresses/id plus the fields a forwarder
/// rewrites (hops, cumulative bandwidth, LSD, accumulated path, and its own
/// motion state).
struct RouteRequest {
    NodeId source = 0;
    NodeId destination = 0;
    int request_id = 0;
    int ttl = 0;  // remaining hop budget; 0 = unlimited
    int hops = 0;
    double bandwidth = 0.0;  // cumulative over traversed links
    double lsd = 0.0;
    std::vector<NodeId> path;
    double fwd_speed = 0.0;
    double fwd_heading = 0.0;
    double fwd_x = 0.0;
    double fwd_y = 0.0;

    RoundKey round() const { return {source, destination, request_id}; }
};

/// One row of a node's Neighbor Information Table: the competing RREQ copies
/// collected during the wait period for one round.
struct NeighborInfoEntry {
    NodeId source = 0;
    NodeId destination = 0;
    int request_id = 0;
    int hops = 0;          // incoming RREQ hops + the incoming link
    double lsd = 0.0;      // incoming-link LSD (or path bottleneck)
    double bandwidth = 0.0;  // cumulative through the incoming link
    NodeId previous_hop = 0;
    std::uint64_t arrival_seq = 0;
};

enum class RouteStatus { kPrimary, kBackup, kDisabled };

/// An accepted source-to-destination path.
struct Route {
    std::vector<NodeId> path;
    double bandwidth = 0.0;
    RouteStatus status = RouteStatus::kBackup;
};

enum class ControlKind { kRrep, kNodeOff, kRouteDisable };

struct ControlMessage {
    ControlKind kind = ControlKind::kRrep;
    Route route;
    NodeId reporter = 0;
};

/// A path that reached the destination and competes for acceptance.
struct RouteCandidate {
    std::vector<NodeId> path;  // source ... destination
    double bandwidth = 0.0;
    int hops = 0;
    std::uint64_t arrival_seq = 0;
};

/// Result of the destination's node-disjoint greedy selection. Each rejected
/// candidate is paired with the intermediate node it shares.
struct DisjointSelection {
    std::vector<RouteCandidate> accepted;
    std::vector<std::pair<RouteCandidate, NodeId>> rejected;
};

/// True when `a` beats `b` in the wait-period arbitration:
/// higher LSD, then fewer hops, then higher bandwidth, then first come.
bool rreq_preferred(const NeighborInfoEntry& a, const NeighborInfoEntry& b);

/// The unique entry maximal under rreq_preferred. Entries must be non-empty.
const NeighborInfoEntry& select_rreq(std::span<const NeighborInfoEntry> entries);

/// True when the two paths share no node besides their common endpoints.
bool paths_node_disjoint(std::span<const NodeId> a, std::span<const NodeId> b);

/// True when no node id repeats.
bool path_loop_free(std::span<const NodeId> path);

/// Destination-side selection: sort by (bandwidth desc, hops asc, arrival
/// asc), then greedily accept candidates node-disjoint with everything
/// accepted before them.
DisjointSelection select_node_disjoint(std::vector<RouteCandidate> candidates);

/// "1-4-8-9-6" rendering used in traces and summaries.
std::string path_to_string(std::span<const NodeId> path);

}  // namespace ndmlnr
