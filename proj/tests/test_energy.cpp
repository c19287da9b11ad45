#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "ndmlnr/energy.hpp"

using namespace ndmlnr;

TEST_CASE("charge subtracts and keeps the node alive") {
    EnergyState s{10.0, 0.0, 0.0, true};
    s = charge(s, 3.0);
    CHECK(s.residual == doctest::Approx(7.0));
    CHECK(s.window_consumed == doctest::Approx(3.0));
    CHECK(s.alive);
}

TEST_CASE("charge clamps at zero and kills the node") {
    EnergyState s{2.0, 0.0, 0.0, true};
    s = charge(s, 5.0);
    CHECK(s.residual == 0.0);
    CHECK_FALSE(s.alive);
    CHECK(s.window_consumed == doctest::Approx(2.0));  // only what was actually drawn
}

TEST_CASE("charging zero is the identity") {
    EnergyState s{10.0, 1.5, 0.25, true};
    const auto t = charge(s, 0.0);
    CHECK(t.residual == s.residual);
    CHECK(t.window_consumed == s.window_consumed);
    CHECK(t.alive);
}

TEST_CASE("charge rejects negative amounts") {
    CHECK_THROWS_AS(charge(EnergyState{1.0, 0.0, 0.0, true}, -0.5), std::invalid_argument);
}

TEST_CASE("sample blends old and new drain rates") {
    EnergyConfig cfg;
    cfg.alpha = 0.5;
    cfg.sample_period = 1.0;
    EnergyState s{100.0, 4.0, 2.0, true};
    s = sample_drain_rate(s, cfg);
    CHECK(s.drain_rate == doctest::Approx(3.0));
    CHECK(s.window_consumed == 0.0);
}

TEST_CASE("alpha=1 ignores new consumption") {
    EnergyConfig cfg;
    cfg.alpha = 1.0;
    EnergyState s{100.0, 123.0, 2.0, true};
    s = sample_drain_rate(s, cfg);
    CHECK(s.drain_rate == 2.0);
}

TEST_CASE("alpha=0 takes the window rate exactly") {
    EnergyConfig cfg;
    cfg.alpha = 0.0;
    cfg.sample_period = 2.0;
    EnergyState s{100.0, 5.0, 2.0, true};
    s = sample_drain_rate(s, cfg);
    CHECK(s.drain_rate == doctest::Approx(2.5));
}

TEST_CASE("residual never increases over random op sequences") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> amount(0.0, 3.0);
    EnergyConfig cfg;
    EnergyState s = make_energy_state(50.0, cfg);
    double prev = s.residual;
    for (int i = 0; i < 2000; ++i) {
        if (i % 7 == 0) {
            s = sample_drain_rate(s, cfg);
        } else {
            s = charge(s, amount(rng));
        }
        CHECK(s.residual <= prev);
        CHECK(s.residual >= 0.0);
        CHECK(s.drain_rate >= 0.0);
        prev = s.residual;
    }
}

TEST_CASE("blended drain rate stays between old and new") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::uniform_real_distribution<double> alpha(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        EnergyConfig cfg;
        cfg.alpha = alpha(rng);
        cfg.sample_period = 1.0;
        const double dr_old = value(rng);
        const double dr_new = value(rng);
        EnergyState s{1e9, dr_new, dr_old, true};
        s = sample_drain_rate(s, cfg);
        CHECK(s.drain_rate >= std::min(dr_old, dr_new) - 1e-12);
        CHECK(s.drain_rate <= std::max(dr_old, dr_new) + 1e-12);
    }
}

TEST_CASE("idle-only runs converge geometrically to the idle rate") {
    for (double alpha : {0.1, 0.3, 0.9}) {
        EnergyConfig cfg;
        cfg.alpha = alpha;
        cfg.sample_period = 1.0;
        cfg.idle_rate = 0.001;
        EnergyState s{1e6, 0.0, 0.5, true};  // start far from the idle rate
        const double initial_gap = std::abs(s.drain_rate - cfg.idle_rate);
        double bound = initial_gap;
        for (int k = 1; k <= 30; ++k) {
            s = charge(s, cfg.idle_rate * cfg.sample_period);
            s = sample_drain_rate(s, cfg);
            bound *= alpha;
            CHECK(std::abs(s.drain_rate - cfg.idle_rate) <= bound + 1e-15);
        }
    }
}
