#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ucnwave/packet.hpp"
#include "ucnwave/potential.hpp"

namespace ucn {

/// Time stepping controls for run(). theta stays fixed within a run.
struct StepPlan {
    double theta_us = 0.0;
    double t_max_us = 0.0;               // hard cap; cap hit => partial result
    double min_time_us = 0.0;            // stop rule ignored before this time
    double separation_multiple = 3.0;    // stop when peaks this many delta_x clear
    double delta_x_um = 0.0;             // packet width used by the stop rule
    std::size_t check_interval = 500;    // steps between stop/norm/NaN checks
    double component_weight_min = 1e-4;  // components lighter than this are ignored
    double edge_band_weight_max = 1e-5;  // abort if this much reaches a domain edge
    double edge_clearance_multiple = 5.0;  // component peaks must stay this many delta_x in
};

struct RunLog {
    double theta_us = 0.0;
    std::uint64_t steps = 0;
    double norm_drift = 0.0;  // max |norm - 1| seen at checkpoints
    std::vector<std::pair<double, double>> peak_trace;  // (t_us, x_peak_um)
    std::string stop_reason;  // "separated" | "time_cap"
    double wall_ms = 0.0;
};

struct RunResult {
    WaveState state;
    RunLog log;
};

/// One split-operator step: half potential phase at t, full kinetic phase
/// exp(-i theta hbar k^2 / 2m) in wavenumber space, half potential phase at
/// t + theta. All three factors are unitary. v_now/v_next must match the
/// state's grid length.
WaveState step(const WaveState& state, std::span<const double> v_now,
               std::span<const double> v_next, double theta_us);

/// Sequential evolution under the moving structure until the transmitted and
/// reflected components are separation_multiple*delta_x clear of it (or the
/// time cap). Norm drift beyond 1e-6 or NaN/overflow aborts with
/// numerical_error; probability reaching a domain edge aborts with
/// validation_error.
RunResult run(WaveState state, const PotentialStructure& structure,
              const MotionLaw& motion, const StepPlan& plan);

/// Time step from the accuracy rules: potential phase max|V|*theta/hbar <=
/// 0.05 rad, and kinetic phase at the occupied bandwidth (not the grid
/// Nyquist) <= 0.5 rad. The occupied bandwidth covers the packet's spectral
/// support plus the Doppler sideband 2 m v_struct / hbar written by
/// reflection off the moving structure; pass the structure's peak speed over
/// the interaction window.
double suggest_theta(const PotentialStructure&, const PacketSpec&, double v_struct_max_m_s);

}  // namespace ucn
