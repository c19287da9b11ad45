#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "ndmlnr/protocol.hpp"

using namespace ndmlnr;

namespace {

NeighborInfoEntry entry(double lsd, int hops, double bw, std::uint64_t seq) {
    NeighborInfoEntry e;
    e.lsd = lsd;
    e.hops = hops;
    e.bandwidth = bw;
    e.arrival_seq = seq;
    return e;
}

RouteCandidate cand(std::vector<NodeId> path, double bw, std::uint64_t seq) {
    RouteCandidate c;
    c.hops = static_cast<int>(path.size()) - 1;
    c.path = std::move(path);
    c.bandwidth = bw;
    c.arrival_seq = seq;
    return c;
}

}  // namespace

TEST_CASE("select_rreq prefers the higher LSD") {
    std::vector<NeighborInfoEntry> entries{entry(20, 1, 7, 1), entry(17, 2, 13, 2)};
    CHECK(select_rreq(entries).lsd == 20);

    std::vector<NeighborInfoEntry> node9{entry(16, 3, 22, 1), entry(18, 3, 21, 2)};
    CHECK(select_rreq(node9).lsd == 18);
}

TEST_CASE("select_rreq falls back to hops, bandwidth, then first come") {
    std::vector<NeighborInfoEntry> by_hops{entry(12, 3, 9, 1), entry(12, 2, 9, 2)};
    CHECK(select_rreq(by_hops).hops == 2);

    std::vector<NeighborInfoEntry> by_bw{entry(12, 2, 9, 1), entry(12, 2, 11, 2)};
    CHECK(select_rreq(by_bw).bandwidth == 11);

    std::vector<NeighborInfoEntry> fcfs{entry(12, 2, 9, 5), entry(12, 2, 9, 3)};
    CHECK(select_rreq(fcfs).arrival_seq == 3);
}

TEST_CASE("loop-freedom helpers") {
    CHECK(path_loop_free(std::vector<NodeId>{1, 2, 3}));
    CHECK_FALSE(path_loop_free(std::vector<NodeId>{1, 2, 1}));
    CHECK(paths_node_disjoint(std::vector<NodeId>{1, 2, 3, 6}, std::vector<NodeId>{1, 4, 5, 6}));
    CHECK_FALSE(
        paths_node_disjoint(std::vector<NodeId>{1, 4, 5, 6}, std::vector<NodeId>{1, 4, 8, 6}));
    // endpoints never count as shared
    CHECK(paths_node_disjoint(std::vector<NodeId>{1, 6}, std::vector<NodeId>{1, 2, 6}));
}

TEST_CASE("destination selection reproduces the worked example") {
    std::vector<RouteCandidate> cands;
    cands.push_back(cand({1, 2, 3, 6}, 17, 1));
    cands.push_back(cand({1, 4, 5, 6}, 19, 2));
    cands.push_back(cand({1, 4, 8, 9, 6}, 28, 3));
    const auto sel = select_node_disjoint(cands);
    REQUIRE(sel.accepted.size() == 2);
    CHECK(path_to_string(sel.accepted[0].path) == "1-4-8-9-6");
    CHECK(sel.accepted[0].bandwidth == 28);
    CHECK(path_to_string(sel.accepted[1].path) == "1-2-3-6");
    CHECK(sel.accepted[1].bandwidth == 17);
    REQUIRE(sel.rejected.size() == 1);
    CHECK(path_to_string(sel.rejected[0].first.path) == "1-4-5-6");
    CHECK(sel.rejected[0].second == 4);
}

TEST_CASE("a single candidate is accepted as-is") {
    const auto sel = select_node_disjoint({cand({1, 2, 3}, 5, 1)});
    CHECK(sel.accepted.size() == 1);
    CHECK(sel.rejected.empty());
}

TEST_CASE("ties fall to fewer hops, then earlier arrival, independent of input order") {
    // Same bandwidth everywhere; the two short candidates share node 2, the
    // long one shares node 3 with the second. Tie-break: hops, then arrival.
    std::vector<RouteCandidate> cands;
    cands.push_back(cand({1, 2, 6}, 10, 4));
    cands.push_back(cand({1, 2, 3, 6}, 10, 2));
    cands.push_back(cand({1, 3, 6}, 10, 3));

    const auto baseline = select_node_disjoint(cands);
    REQUIRE(baseline.accepted.size() == 2);
    // Both 2-hop candidates beat the 3-hop one despite its earliest arrival;
    // between the 2-hop pair, the earlier arrival sorts first.
    CHECK(path_to_string(baseline.accepted[0].path) == "1-3-6");
    CHECK(path_to_string(baseline.accepted[1].path) == "1-2-6");

    std::sort(cands.begin(), cands.end(),
              [](const auto& a, const auto& b) { return a.arrival_seq < b.arrival_seq; });
    do {
        const auto sel = select_node_disjoint(cands);
        REQUIRE(sel.accepted.size() == baseline.accepted.size());
        for (std::size_t i = 0; i < sel.accepted.size(); ++i) {
            CHECK(sel.accepted[i].path == baseline.accepted[i].path);
        }
    } while (std::next_permutation(
        cands.begin(), cands.end(),
        [](const auto& a, const auto& b) { return a.arrival_seq < b.arrival_seq; }));
}

TEST_CASE("equal hops fall to earlier arrival") {
    std::vector<RouteCandidate> cands;
    cands.push_back(cand({1, 2, 6}, 10, 7));
    cands.push_back(cand({1, 3, 6}, 10, 5));
    // both 2-hop, disjoint: order by arrival
    auto sel = select_node_disjoint(cands);
    REQUIRE(sel.accepted.size() == 2);
    CHECK(sel.accepted[0].arrival_seq == 5);

    // now force a conflict: same intermediate node, earlier arrival wins
    std::vector<RouteCandidate> conflict;
    conflict.push_back(cand({1, 2, 6}, 10, 7));
    conflict.push_back(cand({1, 2, 6}, 10, 5));
    sel = select_node_disjoint(conflict);
    REQUIRE(sel.accepted.size() == 1);
    CHECK(sel.accepted[0].arrival_seq == 5);
    CHECK(sel.rejected.size() == 1);
}

TEST_CASE("greedy disjointness over random candidate sets") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_cands(1, 12);
    std::uniform_int_distribution<int> node(2, 9);
    std::uniform_real_distribution<double> bw(1.0, 30.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<RouteCandidate> cands;
        const int n = n_cands(rng);
        for (int i = 0; i < n; ++i) {
            std::vector<NodeId> path{1};
            const int len = std::uniform_int_distribution<int>(0, 4)(rng);
            for (int k = 0; k < len; ++k) {
                const NodeId next = node(rng);
                if (std::find(path.begin(), path.end(), next) == path.end()) path.push_back(next);
            }
            path.push_back(10);
            cands.push_back(cand(std::move(path), bw(rng), static_cast<std::uint64_t>(i)));
        }
        const auto sel = select_node_disjoint(cands);
        CHECK(sel.accepted.size() + sel.rejected.size() == cands.size());
        for (std::size_t i = 0; i < sel.accepted.size(); ++i) {
            for (std::size_t j = i + 1; j < sel.accepted.size(); ++j) {
                CHECK(paths_node_disjoint(sel.accepted[i].path, sel.accepted[j].path));
            }
        }
        // every rejected candidate really does conflict with the accepted set
        for (const auto& [rej, shared] : sel.rejected) {
            bool conflicts = false;
            for (const auto& acc : sel.accepted) {
                if (!paths_node_disjoint(rej.path, acc.path)) conflicts = true;
            }
            CHECK(conflicts);
            CHECK(std::find(rej.path.begin() + 1, rej.path.end() - 1, shared) != rej.path.end() - 1);
        }
    }
}
