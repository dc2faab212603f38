#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucnwave/analysis.hpp"
#include "ucnwave/packet.hpp"
#include "ucnwave/potential.hpp"
#include "ucnwave/propagator.hpp"
#include "ucnwave/semiclassical.hpp"

namespace ucn {

using json = nlohmann::ordered_json;

// ---- Declarative scenario configuration -------------------------------------

struct GridConfig {
    double x_min_um = 0.0, x_max_um = 0.0;
    std::size_t n_points = 0;
};

struct PacketConfig {
    double E0_neV = 0.0;
    std::optional<double> delta_E_neV;  // exactly one width field set
    std::optional<double> delta_x_um;
    double x0_um = 0.0;
    int direction = +1;
};

struct MotionConfig {
    double s0_um = 0.0;
    double V0_m_s = 0.0;
    double a_m_s2 = 0.0;
    // When set, V0 is derived so the structure velocity equals this target at
    // the instant the packet peak meets the structure's left edge.
    std::optional<double> sync_target_velocity_m_s;
};

struct TimeConfig {
    std::optional<double> theta_us;  // absent = auto
    std::optional<double> t_max_us;  // absent = auto
    double stop_separation_multiple = 3.0;
};

struct StationaryConfig {
    double E_min_neV = 0.0, E_max_neV = 0.0;
    int n_points = 0;
    Branch tau_branch = Branch::transmission;
};

struct ScenarioConfig {
    int version = 1;
    std::string name;
    GridConfig grid;
    PacketConfig packet;
    std::string structure_kind;  // barrier|well|step|double_step|nif|lattice|layers
    json structure_params;       // kind-specific fields, kept verbatim
    MotionConfig motion;
    TimeConfig time;
    std::vector<std::string> outputs = {"spectra", "runlog", "summary"};
    std::optional<StationaryConfig> stationary;  // emit T/R/tau curve
    bool run_dynamics = true;
};

ScenarioConfig config_from_json(const json&);
json config_to_json(const ScenarioConfig&);
ScenarioConfig load_config(const std::string& path);

PotentialStructure build_structure(const ScenarioConfig&);
PacketSpec build_packet(const ScenarioConfig&);

/// Resolves the motion law; with synchronization requested this solves the
/// arrival kinematics a t*^2/2 + (v0 - V_target) t* + (x0 - s0) = 0 for the
/// packet-peak arrival t* and sets V0 = V_target - a t*. Also returns t*.
std::pair<MotionLaw, double> synchronized_motion(const ScenarioConfig&);

/// Structural and numerical validation (throws validation_error):
/// packet-fits-grid, Nyquist margin, resolution, initial clearance from the
/// structure, structure-stays-inside-domain over the run horizon.
void validate(const ScenarioConfig&);

struct ScenarioResult {
    ScenarioConfig config;  // motion resolved to explicit V0
    PotentialStructure structure;
    MotionLaw motion;
    double t_star_us = 0.0;
    double theta_us = 0.0;
    RunLog log;
    WaveState final_state;
    VelocitySpectrum initial;
    std::optional<VelocitySpectrum> transmitted, reflected;
    std::optional<SpectrumShift> transmitted_shift, reflected_shift;  // vs initial
    std::optional<double> a_tau_m_s;
    std::optional<ClassicalTrace> classical;

    json summary() const;
};

ScenarioResult run_scenario(const ScenarioConfig&);

/// Writes the configured artifact files (spectra CSVs, runlog.json,
/// summary.json, stationary_curve.csv) into dir, creating it if needed.
void write_artifacts(const ScenarioResult&, const std::string& dir);
void write_stationary_curve(const ScenarioConfig&, const std::string& path);

// ---- Sweeps ------------------------------------------------------------------

struct SweepPoint {
    double value = 0.0;
    double d_peak_v_m_s = 0.0;
    double dv_classical_m_s = 0.0;
    double a_tau_m_s = 0.0;
    std::string status = "ok";  // or the failure message
};

struct SweepResult {
    std::string vary_path;
    std::vector<SweepPoint> points;  // input order
};

/// Independent runs over values substituted at the JSON-pointer path
/// (e.g. "/motion/a_m_s2"), fanned out over `threads` workers with
/// deterministic output ordering. Per-point failures are recorded and the
/// sweep continues. d_peak_v is measured against the transmitted spectrum of
/// the motionless structure when the path varies the motion, else against
/// the initial spectrum.
SweepResult sweep(const ScenarioConfig&, const std::string& vary_path,
                  const std::vector<double>& values, int threads);
void write_sweep_csv(const SweepResult&, const std::string& path);

// ---- Builtin scenario library ------------------------------------------------

struct BuiltinInfo {
    std::string name;
    std::string description;
    std::vector<std::string> cases;
};

std::vector<BuiltinInfo> list_builtins();
/// Expanded (label, config) pairs for a builtin's dynamic cases.
std::vector<std::pair<std::string, ScenarioConfig>> builtin_cases(const std::string& name);
/// Runs a builtin end to end into out_dir; case_filter selects a subset by
/// label substring (empty = all).
void run_builtin(const std::string& name, const std::string& out_dir, int threads,
                 const std::string& case_filter = "");

/// Near-threshold energy scan (the transmission/GDT/dv triplet): quantum dv
/// from one run per energy, tau and T from stationary theory.
struct DvScanRow {
    double E_neV = 0.0;
    double T_packet = 0.0;      // transmitted weight of the run
    double tau_ns = 0.0;        // stationary GDT
    double dv_m_s = 0.0;        // restricted-support mean shift
    double d_peak_v_m_s = 0.0;
    double a_tau_m_s = 0.0;
    double norm_drift = 0.0;
    std::string status = "ok";
};
std::vector<DvScanRow> dv_energy_scan(const ScenarioConfig& base,
                                      const std::vector<double>& energies_neV, int threads);

}  // namespace ucn
