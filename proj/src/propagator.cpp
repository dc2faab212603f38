#include "ucnwave/propagator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>

#include "ucnwave/errors.hpp"
#include "ucnwave/fourier.hpp"
#include "ucnwave/units.hpp"

namespace ucn {

namespace {

// psi[j] *= exp(-i * theta/2 * V_j / hbar) over the potential's support.
void apply_half_potential_phase(std::complex<double>* psi, const SampledPotential& v,
                                double theta_us) {
    const double coeff = -0.5 * theta_us / hbar;
    const double* val = v.values.data();
    std::complex<double>* p = psi + v.j0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (val[i] != 0.0) p[i] *= std::polar(1.0, coeff * val[i]);
    }
}

// Kinetic phase exp(-i theta hbar k^2 / 2m) with the inverse-FFT 1/n folded in.
std::vector<std::complex<double>> kinetic_factor(const Grid& g, double theta_us) {
    std::vector<std::complex<double>> f(g.size());
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double k = g.k(j);
        f[j] = std::polar(inv_n, -theta_us * half_dispersion * k * k);
    }
    return f;
}

void multiply(std::complex<double>* a, const std::complex<double>* b, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) a[j] *= b[j];
}

double buffer_norm(const std::complex<double>* p, std::size_t n, double dx) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::norm(p[j]);
    return s * dx;
}

struct ComponentView {
    double weight = 0.0;
    double x_peak = 0.0;
};

// Peak and weight of |field|^2 restricted to cells with x in [lo, hi).
ComponentView component(const std::complex<double>* field, const Grid& g, double lo, double hi) {
    ComponentView c;
    double best = -1.0;
    const std::size_t j_lo = g.cell_of(std::max(lo, g.x_min()));
    for (std::size_t j = j_lo; j < g.size(); ++j) {
        const double x = g.x(j);
        if (x < lo) continue;
        if (x >= hi) break;
        const double d = std::norm(field[j]);
        c.weight += d;
        if (d > best) {
            best = d;
            c.x_peak = x;
        }
    }
    c.weight *= g.dx();
    return c;
}

}  // namespace

WaveState step(const WaveState& state, std::span<const double> v_now,
               std::span<const double> v_next, double theta_us) {
    const Grid& g = *state.grid;
    const std::size_t n = g.size();
    if (v_now.size() != n || v_next.size() != n)
        throw validation_error("step: potential arrays do not match the state's grid");
    if (!(theta_us > 0.0)) throw validation_error("step: theta must be positive");

    FftEngine eng(n);
    std::memcpy(eng.data(), state.psi.data(), n * sizeof(std::complex<double>));

    SampledPotential now{0, {v_now.begin(), v_now.end()}};
    SampledPotential next{0, {v_next.begin(), v_next.end()}};
    const auto kin = kinetic_factor(g, theta_us);

    apply_half_potential_phase(eng.data(), now, theta_us);
    eng.forward_inplace();
    multiply(eng.data(), kin.data(), n);  // carries the 1/n
    eng.backward_raw_inplace();
    apply_half_potential_phase(eng.data(), next, theta_us);

    WaveState out;
    out.grid = state.grid;
    out.t_us = state.t_us + theta_us;
    out.psi.assign(eng.data(), eng.data() + n);

    if (std::isnan(buffer_norm(out.psi.data(), n, g.dx())))
        throw numerical_error("step: NaN/overflow in the evolved state");
    return out;
}

RunResult run(WaveState state, const PotentialStructure& structure, const MotionLaw& motion,
              const StepPlan& plan) {
    const Grid& g = *state.grid;
    const std::size_t n = g.size();
    if (!(plan.theta_us > 0.0)) throw validation_error("run: theta must be positive");
    if (!(plan.t_max_us > state.t_us)) throw validation_error("run: t_max does not exceed t0");
    if (!(plan.delta_x_um > 0.0)) throw validation_error("run: plan.delta_x must be positive");

    const auto wall0 = std::chrono::steady_clock::now();
    const double theta = plan.theta_us;
    const double sep = plan.separation_multiple * plan.delta_x_um;
    const std::size_t check_every = std::max<std::size_t>(1, plan.check_interval);
    const std::size_t edge_cells =
        std::min(n / 4, static_cast<std::size_t>(std::ceil(plan.delta_x_um / g.dx())));

    FftEngine eng(n);
    FftEngine probe(n);  // separate engine: stop-rule momentum split at checkpoints
    std::memcpy(eng.data(), state.psi.data(), n * sizeof(std::complex<double>));

    const auto kin = kinetic_factor(g, theta);
    std::vector<std::complex<double>> probe_spec(n);

    RunLog log;
    log.theta_us = theta;
    log.stop_reason = "time_cap";

    SampledPotential v_now = sample_support(structure, motion, g, state.t_us);
    double t = state.t_us;
    bool separated = false;

    const double tail_hi = structure.semi_infinite_tail ? g.x_max() : 0.0;
    const double thickness = structure.total_thickness_um();

    while (t + 0.5 * theta < plan.t_max_us && !separated) {
        SampledPotential v_next = sample_support(structure, motion, g, t + theta);

        apply_half_potential_phase(eng.data(), v_now, theta);
        eng.forward_inplace();
        multiply(eng.data(), kin.data(), n);
        eng.backward_raw_inplace();
        apply_half_potential_phase(eng.data(), v_next, theta);

        v_now = std::move(v_next);
        t += theta;
        ++log.steps;

        const bool last = !(t + 0.5 * theta < plan.t_max_us);
        if (log.steps % check_every != 0 && !last) continue;

        // --- checkpoint: norm, NaN, edges, stop rule ---
        const double nrm = buffer_norm(eng.data(), n, g.dx());
        if (!std::isfinite(nrm)) throw numerical_error("run: NaN/overflow in the state");
        log.norm_drift = std::max(log.norm_drift, std::abs(nrm - 1.0));
        if (log.norm_drift > 1e-6)
            throw numerical_error("run: norm drift exceeded 1e-6 (|norm-1| = " +
                                  std::to_string(log.norm_drift) + ")");

        double w_edge = 0.0;
        for (std::size_t j = 0; j < edge_cells; ++j)
            w_edge += std::norm(eng.data()[j]) + std::norm(eng.data()[n - 1 - j]);
        if (w_edge * g.dx() > plan.edge_band_weight_max)
            throw validation_error("run: probability reached the domain edge at t = " +
                                   std::to_string(t) + " us; enlarge the domain");

        // global density peak for the log
        std::size_t j_peak = 0;
        double best = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = std::norm(eng.data()[j]);
            if (d > best) {
                best = d;
                j_peak = j;
            }
        }
        log.peak_trace.emplace_back(t, g.x(j_peak));

        if (t < plan.min_time_us) continue;

        // Momentum-sign split: rightward density beyond the structure is the
        // transmitted component, leftward density before it the reflected one.
        const double left_edge = motion.offset_um(t);
        const double right_edge =
            structure.semi_infinite_tail ? tail_hi : left_edge + thickness;

        probe.forward(std::span<const std::complex<double>>(eng.data(), n), probe_spec);
        auto split = [&](bool positive) {
            auto* p = probe.data();
            for (std::size_t j = 0; j < n; ++j) {
                const bool pos = g.k(j) >= 0.0;
                p[j] = (pos == positive) ? probe_spec[j] : 0.0;
            }
            probe.inverse_inplace();
        };

        split(true);
        const auto trans = component(probe.data(), g, right_edge, g.x_max());
        split(false);
        const auto refl = component(probe.data(), g, g.x_min(), left_edge);

        const bool trans_real = trans.weight >= plan.component_weight_min;
        const bool refl_real = refl.weight >= plan.component_weight_min;

        // scattered peaks must never run into the periodic boundary
        const double clearance = plan.edge_clearance_multiple * plan.delta_x_um;
        if ((trans_real && trans.x_peak > g.x_max() - clearance) ||
            (refl_real && refl.x_peak < g.x_min() + clearance))
            throw validation_error(
                "run: a scattered component came within the edge clearance at t = " +
                std::to_string(t) + " us; enlarge the domain");

        const bool trans_clear = !trans_real || (trans.x_peak - right_edge >= sep);
        const bool refl_clear = !refl_real || (left_edge - refl.x_peak >= sep);
        if ((trans_real || refl_real) && trans_clear && refl_clear) {
            separated = true;
            log.stop_reason = "separated";
        }
    }

    state.psi.assign(eng.data(), eng.data() + n);
    state.t_us = t;
    log.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            wall0)
                      .count();
    return {std::move(state), std::move(log)};
}

double suggest_theta(const PotentialStructure& structure, const PacketSpec& packet,
                     double v_struct_max_m_s) {
    const double sigma_k = 1.0 / packet.delta_x_um;
    const double k_occ = 1.2 * (std::abs(packet.k0()) + 8.0 * sigma_k) +
                         2.0 * velocity_to_wavenumber(std::abs(v_struct_max_m_s));

    const double theta_kin = 0.5 / (half_dispersion * k_occ * k_occ);
    const double v_abs = structure.max_abs_height_neV();
    const double theta_pot = v_abs > 0.0 ? 0.05 * hbar / v_abs
                                         : std::numeric_limits<double>::infinity();
    return std::min(theta_kin, theta_pot);
}

}  // namespace ucn
