#include "ucnwave/semiclassical.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "ucnwave/errors.hpp"
#include "ucnwave/units.hpp"

namespace ucn {

std::string to_string(TraceOutcome o) {
    switch (o) {
        case TraceOutcome::transmitted: return "transmitted";
        case TraceOutcome::reflected: return "reflected";
        case TraceOutcome::overtaken_exit: return "overtaken-exit";
    }
    return "?";
}

double ClassicalTrace::dv_m_s() const {
    const double ref = outcome == TraceOutcome::reflected ? -entry_velocity_m_s
                                                          : entry_velocity_m_s;
    return exit_velocity_m_s - ref;
}

namespace {

constexpr double kRootGuard = 1e-9;  // us; suppresses re-detecting the boundary just crossed

// Earliest root tau > guard of a/2 tau^2 + b tau + c = 0.
std::optional<double> earliest_root(double half_a, double b, double c, double guard) {
    if (std::abs(half_a) < 1e-300) {
        if (std::abs(b) < 1e-300) return std::nullopt;  // co-moving, parallel
        const double tau = -c / b;
        return tau > guard ? std::optional<double>(tau) : std::nullopt;
    }
    const double D = b * b - 4.0 * half_a * c;
    if (D < 0.0) return std::nullopt;
    const double sq = std::sqrt(D);
    // stable quadratic roots
    const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double r1 = q / half_a;
    double r2 = std::abs(q) > 0.0 ? c / q : std::numeric_limits<double>::infinity();
    if (r1 > r2) std::swap(r1, r2);
    if (r1 > guard) return r1;
    if (r2 > guard && std::isfinite(r2)) return r2;
    return std::nullopt;
}

}  // namespace

ClassicalTrace trace(double E0_neV, const PotentialStructure& structure, const MotionLaw& motion,
                     double start_x_um, int direction) {
    if (!(E0_neV > 0.0)) throw validation_error("trace: E0 must be positive");
    const double v0 = (direction >= 0 ? 1.0 : -1.0) * energy_to_velocity(E0_neV);
    const double a = motion.a_internal();

    const std::size_t n_bounds = structure.boundary_count();
    const std::size_t n_regions = structure.region_count();

    ClassicalTrace tr;
    tr.entry_velocity_m_s = v0;

    double t = 0.0;
    double x = start_x_um;
    double v = v0;

    // Current region from the start position (expected exterior, approaching).
    std::size_t region = 0;
    {
        const double off0 = motion.offset_um(0.0);
        for (std::size_t b = 0; b < n_bounds; ++b)
            if (x > structure.boundary_um(b) + off0) region = b + 1;
    }

    constexpr std::size_t kEventCap = 100000;
    while (true) {
        // Next crossing over all boundaries: x + v tau = b_rest + offset(t + tau).
        std::optional<double> best;
        std::size_t best_b = 0;
        const double vb_now = motion.V0_m_s + a * t;
        for (std::size_t b = 0; b < n_bounds; ++b) {
            const double c = structure.boundary_um(b) + motion.offset_um(t) - x;
            const double bb = vb_now - v;
            const auto root = earliest_root(0.5 * a, bb, c, kRootGuard);
            if (root && (!best || *root < *best)) {
                best = root;
                best_b = b;
            }
        }
        if (!best) break;  // no crossing ahead: free forever

        const double tau = *best;
        t += tau;
        x += v * tau;
        const double vb = motion.V0_m_s + a * t;
        const double v_rel = v - vb;

        // Region ahead per relative motion; dU is the jump into it.
        const std::size_t into = v_rel > 0.0 ? best_b + 1 : best_b;
        const double dU = structure.region_height_neV(into) - structure.region_height_neV(region);

        CrossingEvent ev;
        ev.t_us = t;
        ev.boundary = best_b;
        ev.direction = v_rel > 0.0 ? +1 : -1;
        ev.v_before_m_s = v;

        const double u2 = v_rel * v_rel - 2.0 * dU / mass;
        if (u2 > 0.0) {
            const double sgn = v_rel >= 0.0 ? 1.0 : -1.0;
            v = vb + sgn * std::sqrt(u2);
            region = into;
        } else {
            v = vb - v_rel;  // classical reflection off the jump
            ev.reflected = true;
        }
        ev.v_after_m_s = v;
        tr.events.push_back(ev);

        // Sequential model: the trace ends at the first arrival in an
        // exterior region. Re-collisions of a forever-accelerating structure
        // with an already-escaped particle are outside the measurement
        // window this oracle serves.
        if (region == 0 || region == n_regions - 1) break;

        if (tr.events.size() >= kEventCap) {
            tr.capped = true;
            break;
        }
    }

    tr.exit_velocity_m_s = v;
    tr.exit_time_us = t;
    if (tr.events.empty()) {
        // never met the structure: trivial transmission, velocity unchanged
        tr.outcome = TraceOutcome::transmitted;
        return tr;
    }
    const std::size_t far_side = v0 > 0.0 ? n_regions - 1 : 0;
    const std::size_t near_side = v0 > 0.0 ? 0 : n_regions - 1;
    if (region == far_side) {
        tr.outcome = TraceOutcome::transmitted;
    } else if (region == near_side) {
        // Same-side exit still moving with the initial direction means the
        // structure ran it over and left it behind.
        tr.outcome = (v * v0 > 0.0) ? TraceOutcome::overtaken_exit : TraceOutcome::reflected;
    } else {
        // Inside at the event cap.
        tr.outcome = TraceOutcome::reflected;
    }
    return tr;
}

}  // namespace ucn
