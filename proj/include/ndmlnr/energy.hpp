#pragma once

#include <algorithm>
#include <stdexcept>

namespace ndmlnr {

/// Energy model parameters. Costs are per packet, idle loss per second.
struct EnergyConfig {
    double alpha = 0.3;           // blending weight of the old drain rate
    double sample_period = 1.0;   // s between drain-rate samples (T)
    double tx_cost = 0.02;        // J per transmitted packet
    double rx_cost = 0.01;        // J per addressed reception
    double overhear_cost = 0.005; // J per overheard packet
    double idle_rate = 0.001;     // J/s while idle
};

/// Per-node energy bookkeeping. `window_consumed` accumulates only energy
/// actually drawn (clamped by the residual), so totals stay checkable.
struct EnergyState {
    double residual = 0.0;        // J
    double window_consumed = 0.0; // J since the last sample
    double drain_rate = 0.0;      // J/s, exponentially blended
    bool alive = true;
};

inline EnergyState make_energy_state(double initial_energy, const EnergyConfig& cfg) {
    EnergyState s;
    s.residual = initial_energy;
    s.window_consumed = 0.0;
    // Seeding with the idle rate avoids an infinite-stability transient
    // before the first sample.
    s.drain_rate = cfg.idle_rate;
    s.alive = initial_energy > 0.0;
    return s;
}

/// Draw `amount` joules. Residual clamps at zero and the node dies there.
inline EnergyState charge(EnergyState s, double amount) {
    if (amount < 0.0) throw std::invalid_argument("charge: amount must be >= 0");
    const double drawn = std::min(amount, s.residual);
    s.residual = std::max(0.0, s.residual - amount);
    s.window_consumed += drawn;
    s.alive = s.residual > 0.0;
    return s;
}

/// Drain-rate update at a sample-period boundary:
/// DR' = alpha * DR + (1 - alpha) * window / T, then the window resets.
inline EnergyState sample_drain_rate(EnergyState s, const EnergyConfig& cfg) {
    const double dr_new = s.window_consumed / cfg.sample_period;
    s.drain_rate = cfg.alpha * s.drain_rate + (1.0 - cfg.alpha) * dr_new;
    s.window_consumed = 0.0;
    return s;
}

}  // namespace ndmlnr
