#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ndmlnr/kinematics.hpp"

using namespace ndmlnr;

namespace {

// Independent LET oracle: step both nodes at a fine dt and report the first
// time the distance exceeds the range. Only usable for reasonably small LETs.
double stepped_let(const NodeKinematics& a, const NodeKinematics& b, double range,
                   double dt = 1e-4, double t_max = 1e4) {
    NodeKinematics pa = a;
    NodeKinematics pb = b;
    double t = 0.0;
    while (t < t_max) {
        t += dt;
        pa = advance(pa, dt);
        pb = advance(pb, dt);
        if (distance(pa, pb) > range) return t;
    }
    return t_max;
}

struct PairGen {
    std::mt19937_64 rng{20240521};
    std::uniform_real_distribution<double> angle{0.0, 2.0 * std::numbers::pi};
    std::uniform_real_distribution<double> unit{0.0, 1.0};

    // An in-range pair with relative speed >= min_rel so the stepped oracle
    // terminates quickly.
    std::pair<NodeKinematics, NodeKinematics> in_range_pair(double range,
                                                            double min_rel = 2.0) {
        for (;;) {
            NodeKinematics a{0.0, 0.0, 0.0, 0.0};
            a.x = (unit(rng) - 0.5) * 10.0;
            a.y = (unit(rng) - 0.5) * 10.0;
            a.speed = unit(rng) * 15.0;
            a.heading = angle(rng);
            NodeKinematics b = a;
            const double d = unit(rng) * range * 0.95;
            const double phi = angle(rng);
            b.x = a.x + d * std::cos(phi);
            b.y = a.y + d * std::sin(phi);
            b.speed = unit(rng) * 15.0;
            b.heading = angle(rng);
            const double rvx = vx(a) - vx(b);
            const double rvy = vy(a) - vy(b);
            if (rvx * rvx + rvy * rvy >= min_rel * min_rel) return {a, b};
        }
    }
};

}  // namespace

TEST_CASE("advance moves along the heading") {
    NodeKinematics k{0.0, 0.0, 1.0, 0.0};
    const auto moved = advance(k, 2.0);
    CHECK(moved.x == doctest::Approx(2.0));
    CHECK(moved.y == doctest::Approx(0.0));
    CHECK(moved.speed == 1.0);
    CHECK(moved.heading == 0.0);
}

TEST_CASE("advance with dt=0 is the identity") {
    NodeKinematics k{3.5, -1.25, 4.0, 1.1};
    const auto same = advance(k, 0.0);
    CHECK(same.x == k.x);
    CHECK(same.y == k.y);
}

TEST_CASE("advance leaves a stationary node in place") {
    NodeKinematics k{3.0, 4.0, 0.0, 1.2};
    const auto same = advance(k, 100.0);
    CHECK(same.x == 3.0);
    CHECK(same.y == 4.0);
}

TEST_CASE("advance rejects negative dt") {
    CHECK_THROWS_AS(advance(NodeKinematics{}, -1.0), std::invalid_argument);
}

TEST_CASE("in_range boundary is inclusive") {
    RadioModel radio{10.0, 0.0};
    CHECK(in_range({0, 0, 0, 0}, {0, 0, 0, 0}, radio));
    CHECK(in_range({0, 0, 0, 0}, {10.0, 0, 0, 0}, radio));
    CHECK_FALSE(in_range({0, 0, 0, 0}, {10.01, 0, 0, 0}, radio));
}

TEST_CASE("compute_let: co-moving nodes never separate") {
    RadioModel radio{10.0, 0.0};
    NodeKinematics a{0, 0, 5.0, 0.7};
    NodeKinematics b{0, 0, 5.0, 0.7};
    CHECK(std::isinf(compute_let(a, b, radio)));
}

TEST_CASE("compute_let: unit-speed separation from zero distance") {
    RadioModel radio{10.0, 0.0};
    NodeKinematics a{0, 0, 0.0, 0.0};
    NodeKinematics b{0, 0, 1.0, 0.0};
    CHECK(compute_let(a, b, radio) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("compute_let rejects out-of-range nodes") {
    RadioModel radio{10.0, 0.0};
    CHECK_THROWS_AS(compute_let({0, 0, 0, 0}, {11.0, 0, 1.0, 0}, radio), std::domain_error);
}

TEST_CASE("compute_let matches the motion-stepping oracle") {
    RadioModel radio{10.0, 0.0};
    PairGen gen;
    int finite_cases = 0;
    for (int i = 0; i < 300; ++i) {
        const auto [a, b] = gen.in_range_pair(radio.range);
        const double closed = compute_let(a, b, radio);
        REQUIRE(std::isfinite(closed));
        const double stepped = stepped_let(a, b, radio.range);
        CHECK(std::abs(closed - stepped) <= 1e-3);
        ++finite_cases;
    }
    CHECK(finite_cases == 300);
}

TEST_CASE("LET is infinite exactly when the relative speed is negligible") {
    RadioModel radio{10.0, 0.0};
    // Just below the floor: rel speed 1e-5 -> rel^2 = 1e-10 < 1e-9.
    NodeKinematics a{0, 0, 1.0, 0.0};
    NodeKinematics b{1.0, 0, 1.0 + 1e-5, 0.0};
    CHECK(std::isinf(compute_let(a, b, radio)));
    // Just above: rel speed 1e-4 -> rel^2 = 1e-8 >= 1e-9.
    NodeKinematics c{1.0, 0, 1.0 + 1e-4, 0.0};
    CHECK(std::isfinite(compute_let(a, c, radio)));
}

TEST_CASE("positions straddle the range boundary at LET -/+ epsilon") {
    RadioModel radio{10.0, 0.0};
    PairGen gen;
    for (int i = 0; i < 500; ++i) {
        const auto [a, b] = gen.in_range_pair(radio.range);
        const double let = compute_let(a, b, radio);
        REQUIRE(std::isfinite(let));
        if (let <= 0.0) continue;  // already exactly on the boundary, leaving
        const double eps = 1e-6 * let;
        CHECK(distance(advance(a, let - eps), advance(b, let - eps)) <= radio.range);
        CHECK(distance(advance(a, let + eps), advance(b, let + eps)) > radio.range);
    }
}

TEST_CASE("compute_let is symmetric in its arguments") {
    RadioModel radio{10.0, 0.0};
    PairGen gen;
    for (int i = 0; i < 500; ++i) {
        const auto [a, b] = gen.in_range_pair(radio.range, 0.1);
        const double ab = compute_let(a, b, radio);
        const double ba = compute_let(b, a, radio);
        CHECK(std::abs(ab - ba) <= 1e-9 * std::max(1.0, std::abs(ab)));
    }
}

TEST_CASE("compute_let is translation invariant") {
    RadioModel radio{10.0, 0.0};
    PairGen gen;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> shift(-1e3, 1e3);
    for (int i = 0; i < 500; ++i) {
        auto [a, b] = gen.in_range_pair(radio.range, 0.1);
        const double before = compute_let(a, b, radio);
        const double dx = shift(rng);
        const double dy = shift(rng);
        a.x += dx; a.y += dy;
        b.x += dx; b.y += dy;
        const double after = compute_let(a, b, radio);
        CHECK(std::abs(before - after) <= 1e-6 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("normalize_heading lands in [0, 2pi)") {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    CHECK(normalize_heading(-0.1) == doctest::Approx(two_pi - 0.1));
    CHECK(normalize_heading(two_pi) == doctest::Approx(0.0));
    CHECK(normalize_heading(7.0) == doctest::Approx(7.0 - two_pi));
    for (double h : {-100.0, -1.0, 0.0, 3.0, 100.0}) {
        const double n = normalize_heading(h);
        CHECK(n >= 0.0);
        CHECK(n < two_pi);
    }
}
