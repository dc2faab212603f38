#include "ucnwave/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "ucnwave/csv.hpp"
#include "ucnwave/detail/parallel.hpp"
#include "ucnwave/errors.hpp"
#include "ucnwave/units.hpp"

namespace ucn {

namespace fs = std::filesystem;

// ---- config (de)serialization -----------------------------------------------

namespace {

double num(const json& j, const char* key) {
    if (!j.contains(key)) throw validation_error(std::string("config: missing field ") + key);
    if (!j.at(key).is_number())
        throw validation_error(std::string("config: field is not a number: ") + key);
    return j.at(key).get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? num(j, key) : fallback;
}

std::optional<double> opt_num_or_auto(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    const auto& v = j.at(key);
    if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
    if (!v.is_number())
        throw validation_error(std::string("config: expected number or \"auto\" for ") + key);
    return v.get<double>();
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
    ScenarioConfig c;
    c.version = j.contains("version") ? j.at("version").get<int>() : 1;
    if (c.version != 1)
        throw validation_error("config: unsupported version " + std::to_string(c.version));
    c.name = j.contains("name") ? j.at("name").get<std::string>() : "";

    const auto& g = j.at("grid");
    c.grid = {num(g, "x_min_um"), num(g, "x_max_um"),
              static_cast<std::size_t>(num(g, "n_points"))};

    const auto& p = j.at("packet");
    c.packet.E0_neV = num(p, "E0_neV");
    if (p.contains("delta_E_neV")) c.packet.delta_E_neV = num(p, "delta_E_neV");
    if (p.contains("delta_x_um")) c.packet.delta_x_um = num(p, "delta_x_um");
    c.packet.x0_um = num(p, "x0_um");
    c.packet.direction = static_cast<int>(num_or(p, "direction", 1.0));

    const auto& s = j.at("structure");
    if (!s.contains("kind")) throw validation_error("config: structure.kind missing");
    c.structure_kind = s.at("kind").get<std::string>();
    c.structure_params = s;
    c.structure_params.erase("kind");

    if (j.contains("motion")) {
        const auto& m = j.at("motion");
        c.motion.s0_um = num_or(m, "s0_um", 0.0);
        c.motion.V0_m_s = num_or(m, "V0_m_s", 0.0);
        c.motion.a_m_s2 = num_or(m, "a_m_s2", 0.0);
        if (m.contains("synchronize"))
            c.motion.sync_target_velocity_m_s =
                num_or(m.at("synchronize"), "target_velocity_m_s", 0.0);
    }

    if (j.contains("time")) {
        const auto& t = j.at("time");
        c.time.theta_us = opt_num_or_auto(t, "theta_us");
        c.time.t_max_us = opt_num_or_auto(t, "t_max_us");
        c.time.stop_separation_multiple = num_or(t, "stop_separation_multiple", 3.0);
    }

    if (j.contains("outputs") && j.at("outputs").contains("which"))
        c.outputs = j.at("outputs").at("which").get<std::vector<std::string>>();

    if (j.contains("stationary")) {
        const auto& st = j.at("stationary");
        StationaryConfig sc;
        sc.E_min_neV = num(st, "E_min_neV");
        sc.E_max_neV = num(st, "E_max_neV");
        sc.n_points = static_cast<int>(num(st, "n_points"));
        sc.tau_branch = st.contains("branch") && st.at("branch").get<std::string>() == "reflection"
                            ? Branch::reflection
                            : Branch::transmission;
        c.stationary = sc;
    }
    if (j.contains("run_dynamics")) c.run_dynamics = j.at("run_dynamics").get<bool>();
    return c;
}

json config_to_json(const ScenarioConfig& c) {
    json j;
    j["version"] = c.version;
    if (!c.name.empty()) j["name"] = c.name;
    j["grid"] = {{"x_min_um", c.grid.x_min_um},
                 {"x_max_um", c.grid.x_max_um},
                 {"n_points", c.grid.n_points}};
    json p;
    p["E0_neV"] = c.packet.E0_neV;
    if (c.packet.delta_E_neV) p["delta_E_neV"] = *c.packet.delta_E_neV;
    if (c.packet.delta_x_um) p["delta_x_um"] = *c.packet.delta_x_um;
    p["x0_um"] = c.packet.x0_um;
    p["direction"] = c.packet.direction;
    j["packet"] = p;

    json s = c.structure_params;
    json s_ordered;
    s_ordered["kind"] = c.structure_kind;
    for (auto& [k, v] : s.items()) s_ordered[k] = v;
    j["structure"] = s_ordered;

    json m;
    m["s0_um"] = c.motion.s0_um;
    m["V0_m_s"] = c.motion.V0_m_s;
    m["a_m_s2"] = c.motion.a_m_s2;
    if (c.motion.sync_target_velocity_m_s)
        m["synchronize"] = {{"target_velocity_m_s", *c.motion.sync_target_velocity_m_s}};
    j["motion"] = m;

    json t;
    t["theta_us"] = c.time.theta_us ? json(*c.time.theta_us) : json("auto");
    t["t_max_us"] = c.time.t_max_us ? json(*c.time.t_max_us) : json("auto");
    t["stop_separation_multiple"] = c.time.stop_separation_multiple;
    j["time"] = t;

    j["outputs"] = {{"which", c.outputs}};
    if (c.stationary) {
        j["stationary"] = {
            {"E_min_neV", c.stationary->E_min_neV},
            {"E_max_neV", c.stationary->E_max_neV},
            {"n_points", c.stationary->n_points},
            {"branch", c.stationary->tau_branch == Branch::reflection ? "reflection"
                                                                      : "transmission"}};
    }
    if (!c.run_dynamics) j["run_dynamics"] = false;
    return j;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw validation_error(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

PotentialStructure build_structure(const ScenarioConfig& c) {
    const auto& p = c.structure_params;
    const auto& kind = c.structure_kind;
    if (kind == "barrier") return barrier(num(p, "U_neV"), num(p, "d_um"));
    if (kind == "well") return well(num(p, "depth_neV"), num(p, "d_um"));
    if (kind == "step") return step(num(p, "U_neV"));
    if (kind == "double_step")
        return double_step(num(p, "U1_neV"), num(p, "d_um"), num(p, "U2_neV"));
    if (kind == "nif")
        return nif(num(p, "U1_neV"), num(p, "a_um"), num(p, "U2_neV"), num(p, "b_um"));
    if (kind == "lattice")
        return lattice(static_cast<int>(num(p, "n_barriers")), num(p, "U_neV"),
                       num(p, "barrier_um"), num(p, "gap_um"));
    if (kind == "layers") {
        PotentialStructure s;
        for (const auto& l : p.at("layers"))
            s.layers.push_back({num(l, "U_neV"), num(l, "d_um")});
        s.semi_infinite_tail = p.contains("semi_infinite_tail") &&
                               p.at("semi_infinite_tail").get<bool>();
        if (s.layers.empty()) throw validation_error("config: layers structure is empty");
        for (std::size_t i = 0; i + (s.semi_infinite_tail ? 1 : 0) < s.layers.size(); ++i)
            if (!(s.layers[i].thickness_um > 0.0))
                throw validation_error("config: non-positive layer thickness");
        return s;
    }
    throw validation_error("config: unknown structure kind '" + kind + "'");
}

PacketSpec build_packet(const ScenarioConfig& c) {
    const auto& p = c.packet;
    if (p.delta_E_neV.has_value() == p.delta_x_um.has_value())
        throw validation_error("config: packet needs exactly one of delta_E_neV / delta_x_um");
    if (p.delta_E_neV)
        return PacketSpec::with_delta_E(p.E0_neV, p.x0_um, *p.delta_E_neV, p.direction);
    return PacketSpec::with_delta_x(p.E0_neV, p.x0_um, *p.delta_x_um, p.direction);
}

std::pair<MotionLaw, double> synchronized_motion(const ScenarioConfig& c) {
    const PacketSpec packet = build_packet(c);
    MotionLaw m{c.motion.s0_um, c.motion.V0_m_s, c.motion.a_m_s2};
    const double v0 = packet.v0();
    const double a = m.a_internal();

    if (!c.motion.sync_target_velocity_m_s) {
        // arrival estimate for the stop rule: packet peak meets the left edge
        const double vt = m.V0_m_s;
        double t_star = 0.0;
        const double gap = m.s0_um - packet.x0_um;
        if (std::abs(a) < 1e-300) {
            t_star = (v0 - vt) != 0.0 ? gap / (v0 - vt) : 0.0;
        } else {
            const double D = (v0 - vt) * (v0 - vt) + 2.0 * a * gap;
            if (D >= 0.0) {
                const double r1 = ((v0 - vt) - std::sqrt(D)) / a;
                const double r2 = ((v0 - vt) + std::sqrt(D)) / a;
                t_star = r1 > 0.0 && (r2 <= 0.0 || r1 < r2) ? r1 : r2;
            }
        }
        return {m, std::max(0.0, t_star)};
    }

    // Free-flight arrival estimate t* = distance / v0, then V0 chosen so the
    // structure velocity at t* equals the target. The structure's own small
    // displacement by t* shifts the true meeting time at second order in a;
    // that residual is part of the scenario definition, not corrected for.
    const double vt = *c.motion.sync_target_velocity_m_s;
    const double gap = m.s0_um - packet.x0_um;
    if (!(gap * v0 > 0.0))
        throw validation_error("synchronized_motion: the packet never reaches the structure");
    const double t_star = gap / v0;
    m.V0_m_s = vt - m.a_m_s2 * accel_to_internal * t_star;
    return {m, t_star};
}

void validate(const ScenarioConfig& c) {
    if (c.grid.n_points < 64)
        throw validation_error("config: grids below 64 points are not usable for runs");
    const Grid g = make_grid(c.grid.x_min_um, c.grid.x_max_um, c.grid.n_points);
    const PacketSpec packet = build_packet(c);
    const PotentialStructure structure = build_structure(c);

    if (packet.x0_um - g.x_min() < 4.0 * packet.delta_x_um ||
        g.x_max() - packet.x0_um < 4.0 * packet.delta_x_um)
        throw validation_error("config: packet does not fit the grid (needs 4*delta_x margins)");
    if (packet.delta_x_um < 8.0 * g.dx())
        throw validation_error("config: packet under-resolved (delta_x < 8*dx)");
    if (std::abs(packet.k0()) * g.dx() >= std::numbers::pi / 4.0)
        throw validation_error("config: k0*dx exceeds the pi/4 Nyquist margin");

    if (c.run_dynamics) {
        const double sep = c.time.stop_separation_multiple * packet.delta_x_um;
        const double left0 = c.motion.s0_um;
        if (packet.direction > 0 && !(left0 - packet.x0_um >= sep))
            throw validation_error(
                "config: packet must start at least stop_separation_multiple*delta_x before the "
                "structure");
        // structure inside the domain at t = 0 (runtime sampling re-checks each step)
        const auto [motion, t_star] = synchronized_motion(c);
        (void)t_star;
        (void)sample_support(structure, motion, g, 0.0);
    }
}

// ---- scenario execution ------------------------------------------------------

namespace {

json spectrum_summary(const VelocitySpectrum& s) {
    return json{{"peak_v_m_s", s.peak_v_m_s},
                {"mean_v_m_s", s.mean_v_m_s},
                {"rms_width_m_s", s.rms_width_m_s},
                {"weight", s.weight},
                {"region_mismatch_warning", s.region_mismatch_warning}};
}

json shift_summary(const SpectrumShift& s) {
    return json{{"d_peak_v_m_s", s.d_peak_v_m_s},
                {"d_mean_v_m_s", s.d_mean_v_m_s},
                {"d_rms_width_m_s", s.d_rms_width_m_s}};
}

void write_spectrum_csv(const VelocitySpectrum& s, const std::string& path) {
    // Trim the flat tails: keep bins above 1e-15 of the peak plus a margin.
    const double peak = *std::max_element(s.density.begin(), s.density.end());
    const double cut = 1e-15 * peak;
    std::size_t lo = 0, hi = s.density.size();
    while (lo + 1 < hi && s.density[lo] < cut) ++lo;
    while (hi > lo + 1 && s.density[hi - 1] < cut) --hi;
    lo = lo > 16 ? lo - 16 : 0;
    hi = std::min(s.density.size(), hi + 16);
    CsvWriter csv(path, {"v_m_per_s", "density"});
    for (std::size_t i = lo; i < hi; ++i) csv.row({s.v_m_s[i], s.density[i]});
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);

    ScenarioResult res;
    res.config = cfg;
    res.structure = build_structure(cfg);
    const PacketSpec packet = build_packet(cfg);
    auto [motion, t_star] = synchronized_motion(cfg);
    res.motion = motion;
    res.t_star_us = t_star;
    res.config.motion.V0_m_s = motion.V0_m_s;

    auto grid = std::make_shared<const Grid>(
        make_grid(cfg.grid.x_min_um, cfg.grid.x_max_um, cfg.grid.n_points));
    WaveState state = make_gaussian(packet, grid);
    res.initial = full_spectrum(state);

    if (!cfg.run_dynamics) {
        res.final_state = state;
        return res;
    }

    // delay allowance for the time cap, when the stationary theory can give one
    double tau_us = 0.0;
    try {
        const Branch b = res.structure.semi_infinite_tail ? Branch::reflection
                                                          : Branch::transmission;
        tau_us = std::max(0.0, gdt_ns(res.structure, packet.E0_neV, b) * 1e-3);
    } catch (const std::exception&) {
    }

    const double speed = packet.speed();
    const double t_est = t_star + 8.0 * packet.delta_x_um / speed + 5.0 * tau_us;
    const double t_max = cfg.time.t_max_us.value_or(1.3 * t_est + 1.0);
    // peak structure speed across the interaction window (packet transit
    // plus resonant dwell) sets the Doppler sideband the step must resolve
    const double w_inter =
        (4.0 * packet.delta_x_um + res.structure.total_thickness_um()) / speed + 5.0 * tau_us;
    const double v_struct = std::abs(motion.velocity_m_s(t_star)) +
                            std::abs(motion.a_internal()) * w_inter;
    const double theta =
        cfg.time.theta_us.value_or(suggest_theta(res.structure, packet, v_struct));
    res.theta_us = theta;

    StepPlan plan;
    plan.theta_us = theta;
    plan.t_max_us = t_max;
    plan.min_time_us = 0.95 * t_star;
    plan.separation_multiple = cfg.time.stop_separation_multiple;
    plan.delta_x_um = packet.delta_x_um;
    const double cadence_us = std::clamp(t_max / 64.0, theta, 0.2);
    plan.check_interval = std::max<std::size_t>(1, static_cast<std::size_t>(cadence_us / theta));

    auto run_res = run(std::move(state), res.structure, motion, plan);
    res.log = std::move(run_res.log);
    res.final_state = std::move(run_res.state);

    const double t_end = res.final_state.t_us;
    const double left_edge = motion.offset_um(t_end);
    const double right_edge = res.structure.semi_infinite_tail
                                  ? grid->x_max()
                                  : left_edge + res.structure.total_thickness_um();

    if (right_edge < grid->x_max()) {
        try {
            res.transmitted = spectrum(res.final_state,
                                       {right_edge, grid->x_max(), MomentumSign::positive});
            res.transmitted_shift = shift(*res.transmitted, res.initial);
        } catch (const validation_error&) {
        }
    }
    try {
        res.reflected =
            spectrum(res.final_state, {grid->x_min(), left_edge, MomentumSign::negative});
        res.reflected_shift = shift(*res.reflected, res.initial);
    } catch (const validation_error&) {
    }

    if (motion.a_m_s2 != 0.0) {
        try {
            const Branch b = res.structure.semi_infinite_tail ? Branch::reflection
                                                              : Branch::transmission;
            res.a_tau_m_s = a_tau_prediction_m_s(res.structure, packet.E0_neV, motion.a_m_s2, b);
        } catch (const std::exception&) {
        }
    }
    try {
        res.classical = trace(packet.E0_neV, res.structure, motion, packet.x0_um,
                              packet.direction);
    } catch (const std::exception&) {
    }
    return res;
}

json ScenarioResult::summary() const {
    json j;
    j["name"] = config.name;
    j["theta_us"] = theta_us;
    j["steps"] = log.steps;
    j["norm_drift"] = log.norm_drift;
    j["stop_reason"] = log.stop_reason;
    j["partial"] = log.stop_reason == "time_cap";
    j["t_star_us"] = t_star_us;
    j["t_end_us"] = final_state.t_us;
    j["wall_ms"] = log.wall_ms;
    j["motion"] = {{"s0_um", motion.s0_um},
                   {"V0_m_s", motion.V0_m_s},
                   {"a_m_s2", motion.a_m_s2}};
    j["initial"] = spectrum_summary(initial);
    if (transmitted) {
        j["transmitted"] = spectrum_summary(*transmitted);
        if (transmitted_shift)
            j["transmitted"]["shift_vs_initial"] = shift_summary(*transmitted_shift);
    } else {
        j["transmitted"] = nullptr;
    }
    if (reflected) {
        j["reflected"] = spectrum_summary(*reflected);
        if (reflected_shift) j["reflected"]["shift_vs_initial"] = shift_summary(*reflected_shift);
    } else {
        j["reflected"] = nullptr;
    }
    j["a_tau_prediction_m_s"] = a_tau_m_s ? json(*a_tau_m_s) : json(nullptr);
    if (classical) {
        j["semiclassical"] = {{"dv_m_s", classical->dv_m_s()},
                              {"exit_velocity_m_s", classical->exit_velocity_m_s},
                              {"outcome", to_string(classical->outcome)},
                              {"capped", classical->capped}};
    } else {
        j["semiclassical"] = nullptr;
    }
    return j;
}

void write_stationary_curve(const ScenarioConfig& cfg, const std::string& path) {
    if (!cfg.stationary) return;
    const auto structure = build_structure(cfg);
    const auto rows = transmission_curve(structure, cfg.stationary->E_min_neV,
                                         cfg.stationary->E_max_neV, cfg.stationary->n_points,
                                         cfg.stationary->tau_branch);
    CsvWriter csv(path, {"E_neV", "T", "R", "tau_ns"});
    for (const auto& r : rows) csv.row({r.E_neV, r.T, r.R, r.tau_ns});
}

void write_artifacts(const ScenarioResult& res, const std::string& dir) {
    fs::create_directories(dir);
    const auto& which = res.config.outputs;
    auto wants = [&](const char* w) {
        return std::find(which.begin(), which.end(), w) != which.end();
    };

    if (wants("spectra")) {
        write_spectrum_csv(res.initial, dir + "/spectrum_initial.csv");
        if (res.transmitted)
            write_spectrum_csv(*res.transmitted, dir + "/spectrum_transmitted.csv");
        if (res.reflected) write_spectrum_csv(*res.reflected, dir + "/spectrum_reflected.csv");
    }
    if (wants("runlog") && res.config.run_dynamics) {
        json rl;
        rl["norm_drift"] = res.log.norm_drift;
        rl["steps"] = res.log.steps;
        rl["theta"] = res.log.theta_us;
        json trace = json::array();
        for (const auto& [t, x] : res.log.peak_trace) trace.push_back({t, x});
        rl["peak_trace"] = trace;
        rl["stop_reason"] = res.log.stop_reason;
        rl["wall_ms"] = res.log.wall_ms;
        std::ofstream(dir + "/runlog.json") << rl.dump(2) << '\n';
    }
    if (wants("summary")) {
        std::ofstream(dir + "/summary.json") << res.summary().dump(2) << '\n';
        std::ofstream(dir + "/config.json") << config_to_json(res.config).dump(2) << '\n';
    }
    if (res.config.stationary) write_stationary_curve(res.config, dir + "/stationary_curve.csv");
}

// ---- sweeps -------------------------------------------------------------------

using detail::parallel_for;

SweepResult sweep(const ScenarioConfig& base, const std::string& vary_path,
                  const std::vector<double>& values, int threads) {
    SweepResult out;
    out.vary_path = vary_path;
    out.points.resize(values.size());
    if (values.empty()) return out;

    const json base_json = config_to_json(base);
    const json::json_pointer ptr(vary_path);
    if (!base_json.contains(ptr))
        throw validation_error("sweep: config has no field at " + vary_path);

    // Motion sweeps share one static reference (the structure at rest), so the
    // measured shift isolates the motion effect from the static filter bias.
    const bool motion_sweep = vary_path.rfind("/motion", 0) == 0;
    std::optional<VelocitySpectrum> static_ref;
    if (motion_sweep) {
        ScenarioConfig ref_cfg = base;
        ref_cfg.motion = MotionConfig{base.motion.s0_um, 0.0, 0.0, std::nullopt};
        const auto ref_res = run_scenario(ref_cfg);
        static_ref = ref_res.transmitted ? *ref_res.transmitted : ref_res.initial;
    }

    parallel_for(values.size(), threads, [&](std::size_t i) {
        auto& pt = out.points[i];
        pt.value = values[i];
        try {
            json j = base_json;
            j[ptr] = values[i];
            const auto cfg = config_from_json(j);
            const auto res = run_scenario(cfg);
            const VelocitySpectrum& ref = static_ref ? *static_ref : res.initial;
            if (res.transmitted)
                pt.d_peak_v_m_s = res.transmitted->peak_v_m_s - ref.peak_v_m_s;
            else
                pt.status = "no transmitted component";
            if (res.classical) pt.dv_classical_m_s = res.classical->dv_m_s();
            if (res.a_tau_m_s) pt.a_tau_m_s = *res.a_tau_m_s;
            if (res.log.stop_reason == "time_cap") pt.status = "partial: time cap";
        } catch (const std::exception& e) {
            pt.status = e.what();
            pt.d_peak_v_m_s = std::numeric_limits<double>::quiet_NaN();
            pt.dv_classical_m_s = std::numeric_limits<double>::quiet_NaN();
            pt.a_tau_m_s = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return out;
}

void write_sweep_csv(const SweepResult& res, const std::string& path) {
    CsvWriter csv(path, {"value", "d_peak_v_m_s", "dv_semiclassical_m_s", "a_tau_m_s"});
    for (const auto& p : res.points)
        csv.row({p.value, p.d_peak_v_m_s, p.dv_classical_m_s, p.a_tau_m_s});
}

std::vector<DvScanRow> dv_energy_scan(const ScenarioConfig& base,
                                      const std::vector<double>& energies_neV, int threads) {
    std::vector<DvScanRow> rows(energies_neV.size());
    const auto structure = build_structure(base);
    parallel_for(energies_neV.size(), threads, [&](std::size_t i) {
        auto& row = rows[i];
        row.E_neV = energies_neV[i];
        try {
            ScenarioConfig cfg = base;
            cfg.packet.E0_neV = energies_neV[i];
            const auto res = run_scenario(cfg);
            row.norm_drift = res.log.norm_drift;
            row.tau_ns = gdt_ns(structure, row.E_neV, Branch::transmission);
            row.a_tau_m_s = res.motion.a_m_s2 * accel_to_internal * row.tau_ns * 1e-3;
            if (!res.transmitted) {
                row.status = "no transmitted component";
                return;
            }
            row.T_packet = res.transmitted->weight;
            row.dv_m_s = restricted_mean_shift(*res.transmitted, res.initial);
            row.d_peak_v_m_s = res.transmitted->peak_v_m_s - res.initial.peak_v_m_s;
            if (res.log.stop_reason == "time_cap") row.status = "partial: time cap";
        } catch (const std::exception& e) {
            row.status = e.what();
        }
    });
    return rows;
}

}  // namespace ucn
