#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ucnwave/potential.hpp"

namespace ucn {

enum class TraceOutcome { transmitted, reflected, overtaken_exit };
std::string to_string(TraceOutcome);

struct CrossingEvent {
    double t_us = 0.0;
    std::size_t boundary = 0;    // index into structure boundaries
    int direction = +1;          // sign of the boundary-frame velocity at impact
    bool reflected = false;
    double v_before_m_s = 0.0;   // lab frame
    double v_after_m_s = 0.0;
};

struct ClassicalTrace {
    std::vector<CrossingEvent> events;
    double entry_velocity_m_s = 0.0;
    double exit_velocity_m_s = 0.0;
    double exit_time_us = 0.0;
    TraceOutcome outcome = TraceOutcome::transmitted;
    bool capped = false;  // event cap hit (pathological trapped orbit)

    /// Velocity change relative to the elastic reference: v0 for a transmitted
    /// particle, -v0 for a reflected one.
    double dv_m_s() const;
};

/// Event-driven point particle through the moving layered potential.
/// Between boundaries the particle is force-free in the lab frame; at each
/// boundary crossing the velocity refracts in the boundary's instantaneous
/// rest frame: v'_rel = sign(v_rel) sqrt(v_rel^2 - 2 dU/m) when the relative
/// energy clears the jump, else v'_rel = -v_rel (classical reflection; the
/// tracer never tunnels). Crossing times solve x_p + v tau = x_b(t + tau)
/// exactly (quadratic in tau, earliest root past a 1e-9 us re-detection
/// guard). Covers the overtaking regime where an accelerating edge catches
/// the particle from behind.
ClassicalTrace trace(double E0_neV, const PotentialStructure&, const MotionLaw&,
                     double start_x_um, int direction = +1);

}  // namespace ucn
