#include "ndmlnr/protocol.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace ndmlnr {

bool rreq_preferred(const NeighborInfoEntry& a, const NeighborInfoEntry& b) {
    if (a.lsd != b.lsd) return a.lsd > b.lsd;
    if (a.hops != b.hops) return a.hops < b.hops;
    if (a.bandwidth != b.bandwidth) return a.bandwidth > b.bandwidth;
    return a.arrival_seq < b.arrival_seq;
}

const NeighborInfoEntry& select_rreq(std::span<const NeighborInfoEntry> entries) {
    assert(!entries.empty());
    const NeighborInfoEntry* best = &entries.front();
    for (const auto& e : entries.subspan(1)) {
        if (rreq_preferred(e, *best)) best = &e;
    }
    return *best;
}

bool paths_node_disjoint(std::span<const NodeId> a, std::span<const NodeId> b) {
    if (a.size() <= 2 || b.size() <= 2) return true;  // no intermediates to share
    std::set<NodeId> inner(a.begin() + 1, a.end() - 1);
    for (auto it = b.begin() + 1; it != b.end() - 1; ++it) {
        if (inner.count(*it)) return false;
    }
    return true;
}

bool path_loop_free(std::span<const NodeId> path) {
    std::set<NodeId> seen;
    for (NodeId n : path) {
        if (!seen.insert(n).second) return false;
    }
    return true;
}

namespace {

// The first intermediate node `cand` shares with an already accepted path,
// or 0 when fully disjoint.
NodeId shared_intermediate(const RouteCandidate& cand,
                           const std::vector<RouteCandidate>& accepted) {
    for (const auto& acc : accepted) {
        if (cand.path.size() <= 2 || acc.path.size() <= 2) continue;
        std::set<NodeId> inner(acc.path.begin() + 1, acc.path.end() - 1);
        for (auto it = cand.path.begin() + 1; it != cand.path.end() - 1; ++it) {
            if (inner.count(*it)) return *it;
        }
    }
    return 0;
}

}  // namespace

DisjointSelection select_node_disjoint(std::vector<RouteCandidate> candidates) {
    std::sort(candidates.begin(), candidates.end(),
              [](const RouteCandidate& a, const RouteCandidate& b) {
                  if (a.bandwidth != b.bandwidth) return a.bandwidth > b.bandwidth;
                  if (a.hops != b.hops) return a.hops < b.hops;
                  return a.arrival_seq < b.arrival_seq;
              });
    DisjointSelection out;
    for (auto& cand : candidates) {
        if (NodeId shared = shared_intermediate(cand, out.accepted); shared != 0) {
            out.rejected.emplace_back(std::move(cand), shared);
        } else {
            out.accepted.push_back(std::move(cand));
        }
    }
    return out;
}

std::string path_to_string(std::span<const NodeId> path) {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i != 0) s += '-';
        s += std::to_string(path[i]);
    }
    return s;
}

}  // namespace ndmlnr
