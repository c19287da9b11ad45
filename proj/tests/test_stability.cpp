#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ndmlnr/builtin.hpp"
#include "ndmlnr/protocol.hpp"
#include "ndmlnr/stability.hpp"

using namespace ndmlnr;

TEST_CASE("compute_lsd divides mobility by energy") {
    CHECK(compute_lsd(10.0, 2.0) == doctest::Approx(5.0));
}

TEST_CASE("compute_lsd is infinite for a forever link") {
    CHECK(std::isinf(compute_lsd(std::numeric_limits<double>::infinity(), 3.0)));
    CHECK(std::isinf(compute_lsd(std::numeric_limits<double>::infinity(), 0.0)));
}

TEST_CASE("lsd grows with LET and shrinks with drain rate") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> let(0.1, 1e3);
    std::uniform_real_distribution<double> dr(1e-5, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const double l = let(rng);
        const double d = dr(rng);
        const double base = compute_lsd(l, d);
        CHECK(compute_lsd(l * 1.5, d) > base);
        if (d > kEpsDrainRate) {
            CHECK(compute_lsd(l, d * 1.5) < base);
        }
    }
}

TEST_CASE("the drain-rate floor keeps lsd finite for finite LET") {
    CHECK(std::isfinite(compute_lsd(10.0, 0.0)));
    CHECK(compute_lsd(10.0, 0.0) == doctest::Approx(10.0 / kEpsDrainRate));
}

TEST_CASE("link_eligible is a strict threshold") {
    ProtocolConfig cfg;
    cfg.lsd_threshold = 15.0;
    CHECK_FALSE(link_eligible({0, 0, 9.0, 5.0}, cfg));
    CHECK(link_eligible({0, 0, 20.0, 5.0}, cfg));
    CHECK_FALSE(link_eligible({0, 0, 15.0, 5.0}, cfg));
}

TEST_CASE("min_link_bandwidth adds an admission floor") {
    ProtocolConfig cfg;
    cfg.lsd_threshold = 15.0;
    cfg.min_link_bandwidth = 5.0;
    CHECK(link_eligible({0, 0, 20.0, 5.0}, cfg));
    CHECK_FALSE(link_eligible({0, 0, 20.0, 4.99}, cfg));
}

TEST_CASE("raising lsd never flips eligibility off") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lsd(0.0, 40.0);
    ProtocolConfig cfg;
    cfg.lsd_threshold = 15.0;
    for (int i = 0; i < 2000; ++i) {
        LinkMetrics m{0, 0, lsd(rng), 1.0};
        if (link_eligible(m, cfg)) {
            LinkMetrics higher = m;
            higher.lsd += std::uniform_real_distribution<double>(0.0, 10.0)(rng);
            CHECK(link_eligible(higher, cfg));
        }
    }
}

TEST_CASE("tabulated metrics come from the scenario table verbatim") {
    const Scenario s = figure4_scenario();
    NodeKinematics unused;
    const auto m17 = link_metrics(MetricMode::kTabulated, s.link_table, s.radio, 1, unused,
                                  7, unused, 0.5);
    CHECK(m17.lsd == 9.0);
    const auto m48 = link_metrics(MetricMode::kTabulated, s.link_table, s.radio, 4, unused,
                                  8, unused, 0.5);
    CHECK(m48.lsd == 18.0);
    CHECK(m48.bandwidth == 8.0);
}

TEST_CASE("tabulated mode rejects a missing link entry") {
    const Scenario s = figure4_scenario();
    NodeKinematics unused;
    CHECK_THROWS_AS(link_metrics(MetricMode::kTabulated, s.link_table, s.radio, 1, unused,
                                 9, unused, 0.5),
                    std::runtime_error);
}

TEST_CASE("computed mode: co-moving nodes with floor-level drain are forever stable") {
    RadioModel radio{100.0, 0.0};
    LinkTable table;
    NodeKinematics a{0, 0, 3.0, 1.0};
    NodeKinematics b{10, 0, 3.0, 1.0};
    const auto m = link_metrics(MetricMode::kComputed, table, radio, 1, a, 2, b, kEpsDrainRate);
    CHECK(std::isinf(m.lsd));
    CHECK(m.bandwidth == 0.0);  // no table row
}

TEST_CASE("scaling LET and drain rates together rescales lsd and preserves the winner") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> let(1.0, 500.0);
    std::uniform_real_distribution<double> dr(0.01, 5.0);
    std::uniform_int_distribution<int> hops(1, 6);
    const double c_let = 3.7;
    const double c_dr = 0.9;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<NeighborInfoEntry> base;
        std::vector<NeighborInfoEntry> scaled;
        for (int i = 0; i < 5; ++i) {
            NeighborInfoEntry e;
            e.hops = hops(rng);
            e.bandwidth = let(rng);
            e.arrival_seq = static_cast<std::uint64_t>(i);
            const double l = let(rng);
            const double d = dr(rng);
            e.lsd = compute_lsd(l, d);
            base.push_back(e);
            e.lsd = compute_lsd(c_let * l, c_dr * d);
            scaled.push_back(e);
        }
        const auto& w1 = select_rreq(base);
        const auto& w2 = select_rreq(scaled);
        CHECK(w1.arrival_seq == w2.arrival_seq);
        // eligibility against a threshold scaled by the same factor
        ProtocolConfig cfg1;
        cfg1.lsd_threshold = 20.0;
        ProtocolConfig cfg2;
        cfg2.lsd_threshold = 20.0 * (c_let / c_dr);
        for (std::size_t i = 0; i < base.size(); ++i) {
            const bool e1 = link_eligible({0, 0, base[i].lsd, 1.0}, cfg1);
            const bool e2 = link_eligible({0, 0, scaled[i].lsd, 1.0}, cfg2);
            CHECK(e1 == e2);
        }
    }
}
