#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ndmlnr {

/// Relative-speed-squared floor, in (m/s)^2, below which two nodes count as
/// co-moving and their link never expires.
inline constexpr double kEpsRelVel = 1e-9;

/// Position and constant-velocity motion state of one node.
struct NodeKinematics {
    double x = 0.0;        // m
    double y = 0.0;        // m
    double speed = 0.0;    // m/s
    double heading = 0.0;  // rad from +x axis, normalized to [0, 2*pi)
};

/// Unit-disk radio: two nodes are connected exactly when their distance is
/// at most `range`.
struct RadioModel {
    double range = 100.0;    // m
    double hop_delay = 0.0;  // s of per-hop delivery latency
};

inline double normalize_heading(double h) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(h, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;  // fmod can round up to two_pi
    return r;
}

inline double vx(const NodeKinematics& k) { return k.speed * std::cos(k.heading); }
inline double vy(const NodeKinematics& k) { return k.speed * std::sin(k.heading); }

/// Linear motion for dt seconds. Speed and heading are unchanged.
inline NodeKinematics advance(const NodeKinematics& k, double dt) {
    if (dt < 0.0) throw std::invalid_argument("advance: dt must be >= 0");
    NodeKinematics out = k;
    out.x += vx(k) * dt;
    out.y += vy(k) * dt;
    return out;
}

inline double distance(const NodeKinematics& a, const NodeKinematics& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool in_range(const NodeKinematics& a, const NodeKinematics& b, const RadioModel& radio) {
    return distance(a, b) <= radio.range;
}

/// Link Expiration Time: how long until two currently-in-range nodes first
/// drift out of range under constant-velocity motion.
///
/// With relative velocity (a, c) and relative position (b, d), the squared
/// separation is |(b, d) + (a, c) t|^2; setting it equal to range^2 gives a
/// quadratic in t whose discriminant reduces to (a^2+c^2) r^2 - (ad-bc)^2,
/// nonnegative whenever the nodes start in range. Returns +inf when the
/// relative speed is below kEpsRelVel (co-moving nodes keep the link forever).
inline double compute_let(const NodeKinematics& ki, const NodeKinematics& kj,
                          const RadioModel& radio) {
    const double a = vx(ki) - vx(kj);
    const double c = vy(ki) - vy(kj);
    const double b = ki.x - kj.x;
    const double d = ki.y - kj.y;
    const double r = radio.range;

    // Same distance computation as in_range, so a pair on the exact range
    // boundary is treated consistently by both.
    if (std::hypot(b, d) > r) {
        throw std::domain_error("compute_let: nodes are out of range, LET undefined");
    }
    const double rel2 = a * a + c * c;
    if (rel2 < kEpsRelVel) {
        return std::numeric_limits<double>::infinity();
    }
    const double cross = a * d - b * c;
    const double q2 = rel2 * r * r - cross * cross;
    assert(q2 >= -1e-9 * rel2 * r * r);
    return (-(a * b + c * d) + std::sqrt(std::max(q2, 0.0))) / rel2;
}

}  // namespace ndmlnr
