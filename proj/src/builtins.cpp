#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include "ucnwave/csv.hpp"
#include "ucnwave/detail/parallel.hpp"
#include "ucnwave/errors.hpp"
#include "ucnwave/scenario.hpp"
#include "ucnwave/units.hpp"

// Builtin scenario library. Parameters the source material pins (packet
// energies, structure stacks, accelerations, start distances) are hardcoded;
// the rest (domains, widths where unstated) are documented defaults the user
// can override by dumping and editing the config.
//
// Acceleration sign convention everywhere: positive a accelerates the
// structure toward +x, the packet's direction of motion ("along"); negative a
// is "against". Case labels carry the words instead of bare signs.

namespace ucn {

namespace fs = std::filesystem;
using detail::parallel_for;

namespace {

json grid_json(double x_min, double x_max, std::size_t n) {
    return {{"x_min_um", x_min}, {"x_max_um", x_max}, {"n_points", n}};
}

ScenarioConfig make_config(const json& j) { return config_from_json(j); }

// fig1-fig4 family: 100 neV packet, 2 neV width, 5 um from the structure,
// structure at rest at packet arrival (synchronized), |a| up to 1e6 m/s^2.
json barrier_family(const std::string& name, double U_neV, double d_um, double a_m_s2,
                    bool well_kind = false) {
    json j;
    j["version"] = 1;
    j["name"] = name;
    j["grid"] = grid_json(-24.0, 24.0, 8192);
    j["packet"] = {{"E0_neV", 100.0}, {"delta_E_neV", 2.0}, {"x0_um", -5.0}, {"direction", 1}};
    if (well_kind)
        j["structure"] = {{"kind", "well"}, {"depth_neV", U_neV}, {"d_um", d_um}};
    else
        j["structure"] = {{"kind", "barrier"}, {"U_neV", U_neV}, {"d_um", d_um}};
    j["motion"] = {{"s0_um", 0.0},
                   {"a_m_s2", a_m_s2},
                   {"synchronize", {{"target_velocity_m_s", 0.0}}}};
    return j;
}

std::vector<std::pair<std::string, ScenarioConfig>> fig1_cases() {
    return {
        {"d1um_along", make_config(barrier_family("fig1_d1um_along", 50, 1.0, 1e6))},
        {"d1um_against", make_config(barrier_family("fig1_d1um_against", 50, 1.0, -1e6))},
        {"d2um_along", make_config(barrier_family("fig1_d2um_along", 50, 2.0, 1e6))},
        {"d2um_against", make_config(barrier_family("fig1_d2um_against", 50, 2.0, -1e6))},
    };
}

std::vector<std::pair<std::string, ScenarioConfig>> fig2_cases() {
    return {
        {"u50neV_along", make_config(barrier_family("fig2_u50neV_along", 50, 1.0, 1e6))},
        {"u75neV_along", make_config(barrier_family("fig2_u75neV_along", 75, 1.0, 1e6))},
    };
}

std::vector<std::pair<std::string, ScenarioConfig>> fig3_cases() {
    return {
        {"well_along", make_config(barrier_family("fig3_well_along", 50, 1.0, 1e6, true))},
        {"well_against", make_config(barrier_family("fig3_well_against", 50, 1.0, -1e6, true))},
    };
}

// fig4: quantum vs semiclassical dv over a wide acceleration range.
// Cell-aligned 1 um barrier (dx = 1/256 um) so the sampled structure is the
// analytic one exactly.
ScenarioConfig fig4_base() {
    json j = barrier_family("fig4_point", 50, 1.0, 0.0);
    j["grid"] = grid_json(-16.0, 16.0, 8192);
    return make_config(j);
}

std::vector<double> fig4_values() { return {-1e6, -3e5, -1e5, 1e5, 3e5, 1e6}; }

// fig5: near-threshold scan, deceleration side.
ScenarioConfig fig5_base() {
    json j;
    j["version"] = 1;
    j["name"] = "fig5_point";
    j["grid"] = grid_json(-64.0, 64.0, 16384);
    j["packet"] = {{"E0_neV", 110.0}, {"delta_E_neV", 0.4}, {"x0_um", -26.0}, {"direction", 1}};
    j["structure"] = {{"kind", "barrier"}, {"U_neV", 100.0}, {"d_um", 0.2}};
    j["motion"] = {{"s0_um", 0.0},
                   {"a_m_s2", -2e4},
                   {"synchronize", {{"target_velocity_m_s", 0.0}}}};
    return make_config(j);
}

std::vector<double> fig5_energies() {
    std::vector<double> es;
    for (int i = 0; i < 25; ++i) es.push_back(101.0 + 28.0 * i / 24.0);
    return es;
}

// fig6: resonant double-step reflection, E just above the first step.
// The paper gives no packet width or reference speed for this one; delta_E =
// 2 neV (wider than the resonance, which is the point of curve 3) and
// V_target = -0.02 m/s toward the packet are the documented defaults.
json fig6_case(const std::string& name) {
    json j;
    j["version"] = 1;
    j["name"] = name;
    j["grid"] = grid_json(-48.0, 16.0, 8192);
    j["packet"] = {{"E0_neV", 103.2}, {"delta_E_neV", 2.0}, {"x0_um", -15.0}, {"direction", 1}};
    j["structure"] = {{"kind", "double_step"}, {"U1_neV", 100.0}, {"d_um", 0.2}, {"U2_neV", 300.0}};
    j["motion"] = {{"s0_um", 0.0}, {"V0_m_s", 0.0}, {"a_m_s2", 0.0}};
    return j;
}

std::vector<std::pair<std::string, ScenarioConfig>> fig6_cases() {
    json rest = fig6_case("fig6_step_at_rest");
    rest["structure"] = {{"kind", "step"}, {"U_neV", 300.0}};

    json constv = fig6_case("fig6_double_step_constant_v");
    constv["motion"] = {{"s0_um", 0.0}, {"V0_m_s", -0.02}, {"a_m_s2", 0.0}};

    json accel = fig6_case("fig6_double_step_decelerating");
    accel["motion"] = {{"s0_um", 0.0},
                       {"a_m_s2", -5e4},
                       {"synchronize", {{"target_velocity_m_s", -0.02}}}};

    return {{"step_at_rest", make_config(rest)},
            {"double_step_constant_v", make_config(constv)},
            {"double_step_decelerating", make_config(accel)}};
}

PotentialStructure nif_structure() { return nif(200.0, 0.030, 2.15, 0.023); }

double nif_peak_energy() {
    static const double E = transmission_peak_energy(nif_structure(), 90.0, 110.0);
    return E;
}

// fig8: interference-filter tunneling with a decelerating filter. The packet
// energy sits exactly on the filter line of the sampled stack.
json fig8_case(const std::string& name, double a_m_s2) {
    json j;
    j["version"] = 1;
    j["name"] = name;
    j["grid"] = grid_json(-416.0, 352.0, 131072);
    j["packet"] = {{"E0_neV", nif_peak_energy()},
                   {"delta_x_um", 40.0},
                   {"x0_um", -150.0},
                   {"direction", 1}};
    j["structure"] = {{"kind", "nif"},
                      {"U1_neV", 200.0},
                      {"a_um", 0.030},
                      {"U2_neV", 2.15},
                      {"b_um", 0.023}};
    j["motion"] = {{"s0_um", 0.0},
                   {"a_m_s2", a_m_s2},
                   {"synchronize", {{"target_velocity_m_s", 0.0}}}};
    return j;
}

std::vector<std::pair<std::string, ScenarioConfig>> fig8_cases() {
    std::vector<std::pair<std::string, ScenarioConfig>> out;
    for (double mag : {5e3, 1e4, 2e4}) {
        const auto tag = mag == 5e3 ? "5e3" : (mag == 1e4 ? "1e4" : "2e4");
        out.emplace_back(std::string("a_against_") + tag,
                         make_config(fig8_case(std::string("fig8_a_against_") + tag, -mag)));
        out.emplace_back(std::string("a_along_") + tag,
                         make_config(fig8_case(std::string("fig8_a_along_") + tag, mag)));
    }
    return out;
}

// 5 nm barriers spaced 25 nm apart: the assignment that reproduces the
// published 228-305 neV Bragg gap and the sub-barrier passband.
PotentialStructure lattice_structure() { return lattice(51, 250.0, 0.005, 0.025); }

double lattice_passband_center() {
    static const double E = [] {
        const auto win = widest_transmission_window(lattice_structure(), 150.0, 249.0, 0.5, 2600);
        const double mid = 0.5 * (win.lo_neV + win.hi_neV);
        // land on the transparency resonance nearest the window center
        return transmission_peak_energy(lattice_structure(), mid - 2.0, mid + 2.0);
    }();
    return E;
}

// fig9: 51-barrier lattice. The packet parameters are not pinned by the
// scenario family; mid-passband on a resonance with delta_E = 0.5 neV is the
// documented default.
json fig9_case(const std::string& name, double a_m_s2) {
    json j;
    j["version"] = 1;
    j["name"] = name;
    j["grid"] = grid_json(-96.0, 64.0, 131072);
    j["packet"] = {{"E0_neV", lattice_passband_center()},
                   {"delta_E_neV", 0.5},
                   {"x0_um", -35.0},
                   {"direction", 1}};
    j["structure"] = {{"kind", "lattice"},
                      {"n_barriers", 51},
                      {"U_neV", 250.0},
                      {"barrier_um", 0.005},
                      {"gap_um", 0.025}};
    j["motion"] = {{"s0_um", 0.0},
                   {"a_m_s2", a_m_s2},
                   {"synchronize", {{"target_velocity_m_s", 0.0}}}};
    return j;
}

std::vector<std::pair<std::string, ScenarioConfig>> fig9_cases() {
    return {{"a_along_5e5", make_config(fig9_case("fig9_a_along_5e5", 5e5))},
            {"a_against_5e5", make_config(fig9_case("fig9_a_against_5e5", -5e5))}};
}

void write_structure_profile(const PotentialStructure& s, const std::string& path, double x_lo,
                             double x_hi, int n) {
    CsvWriter csv(path, {"x_um", "U_neV"});
    for (int i = 0; i < n; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (n - 1);
        double U = 0.0;
        double pos = 0.0;
        for (std::size_t l = 0; l < s.layers.size(); ++l) {
            const bool tail = s.semi_infinite_tail && l + 1 == s.layers.size();
            const double next = tail ? x_hi + 1.0 : pos + s.layers[l].thickness_um;
            if (x >= pos && x < next) U = s.layers[l].height_neV;
            pos = next;
        }
        csv.row({x, U});
    }
}

void run_case_list(const std::vector<std::pair<std::string, ScenarioConfig>>& cases,
                   const std::string& out_dir, int threads, const std::string& filter) {
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < cases.size(); ++i)
        if (filter.empty() || cases[i].first.find(filter) != std::string::npos)
            selected.push_back(i);
    if (selected.empty()) throw validation_error("no builtin case matches filter '" + filter + "'");
    parallel_for(selected.size(), threads, [&](std::size_t i) {
        const auto& [label, cfg] = cases[selected[i]];
        const auto res = run_scenario(cfg);
        write_artifacts(res, out_dir + "/" + label);
    });
}

struct BuiltinEntry {
    std::string description;
    std::function<std::vector<std::pair<std::string, ScenarioConfig>>()> cases;
    std::function<void(const std::string&, int, const std::string&)> runner;
};

const std::map<std::string, BuiltinEntry>& registry() {
    static const std::map<std::string, BuiltinEntry> reg = [] {
        std::map<std::string, BuiltinEntry> r;

        r["fig1"] = {"barrier 50 neV: transmitted spectra vs width (1, 2 um) and acceleration "
                     "direction at |a| = 1e6 m/s^2 (~1 min)",
                     fig1_cases, nullptr};
        r["fig2"] = {"barrier height dependence (50, 75 neV) at |a| = 1e6 m/s^2 (~30 s)",
                     fig2_cases, nullptr};
        r["fig3"] = {"well 50 neV deep: opposite-sign shift at |a| = 1e6 m/s^2 (~30 s)",
                     fig3_cases, nullptr};
        r["fig4"] = {"quantum vs semiclassical dv sweep, a in +-{1e5, 3e5, 1e6} m/s^2 (~1 min)",
                     [] {
                         return std::vector<std::pair<std::string, ScenarioConfig>>{
                             {"base", fig4_base()}};
                     },
                     [](const std::string& out, int threads, const std::string&) {
                         fs::create_directories(out);
                         const auto res = sweep(fig4_base(), "/motion/a_m_s2", fig4_values(),
                                                threads);
                         write_sweep_csv(res, out + "/fig4_sweep.csv");
                     }};
        r["fig5"] = {"near-threshold scan: T, GDT and quantum dv vs energy, barrier 100 neV x "
                     "0.2 um, a = -2e4 m/s^2 (~5 min)",
                     [] {
                         return std::vector<std::pair<std::string, ScenarioConfig>>{
                             {"base", fig5_base()}};
                     },
                     [](const std::string& out, int threads, const std::string&) {
                         fs::create_directories(out);
                         const auto rows = dv_energy_scan(fig5_base(), fig5_energies(), threads);
                         CsvWriter csv(out + "/fig5_scan.csv",
                                       {"E_neV", "T_packet", "tau_ns", "dv_m_s", "d_peak_v_m_s",
                                        "a_tau_m_s", "status"});
                         for (const auto& row : rows)
                             csv.row({CsvWriter::format(row.E_neV), CsvWriter::format(row.T_packet),
                                      CsvWriter::format(row.tau_ns), CsvWriter::format(row.dv_m_s),
                                      CsvWriter::format(row.d_peak_v_m_s),
                                      CsvWriter::format(row.a_tau_m_s), row.status});
                     }};
        r["fig6"] = {"double-step resonant reflection at 103.2 neV: GDT curves plus spectra at "
                     "rest / constant velocity / decelerating (~1 min)",
                     fig6_cases,
                     [](const std::string& out, int threads, const std::string& filter) {
                         fs::create_directories(out);
                         const auto step_rows = transmission_curve(step(300.0), 10.0, 290.0, 561,
                                                                   Branch::reflection);
                         CsvWriter c1(out + "/gdt_step300.csv", {"E_neV", "T", "R", "tau_ns"});
                         for (const auto& row : step_rows)
                             c1.row({row.E_neV, row.T, row.R, row.tau_ns});
                         const auto ds_rows = transmission_curve(double_step(100.0, 0.2, 300.0),
                                                                 10.0, 290.0, 561,
                                                                 Branch::reflection);
                         CsvWriter c2(out + "/gdt_double_step.csv", {"E_neV", "T", "R", "tau_ns"});
                         for (const auto& row : ds_rows)
                             c2.row({row.E_neV, row.T, row.R, row.tau_ns});
                         run_case_list(fig6_cases(), out, threads, filter);
                     }};
        r["fig7"] = {"interference filter (200/2.15/200 neV, 30/23/30 nm): potential profile and "
                     "transmission line (seconds)",
                     nullptr,
                     [](const std::string& out, int, const std::string&) {
                         fs::create_directories(out);
                         write_structure_profile(nif_structure(), out + "/nif_profile.csv", -0.02,
                                                 0.103, 600);
                         const auto rows = transmission_curve(nif_structure(), 85.0, 115.0, 1200);
                         CsvWriter csv(out + "/nif_transmission.csv", {"E_neV", "T", "R", "tau_ns"});
                         for (const auto& row : rows) csv.row({row.E_neV, row.T, row.R, row.tau_ns});
                     }};
        r["fig8"] = {"interference-filter tunneling, filter decelerating through resonance, |a| "
                     "in {5e3, 1e4, 2e4} m/s^2 (15-25 min PER CASE; use --case)",
                     fig8_cases, nullptr};
        r["fig9"] = {"51-barrier lattice: band structure curve and passband tunneling at |a| = "
                     "5e5 m/s^2 (~5 min per case)",
                     fig9_cases,
                     [](const std::string& out, int threads, const std::string& filter) {
                         fs::create_directories(out);
                         const auto rows = transmission_curve(lattice_structure(), 150.0, 350.0,
                                                              2000);
                         CsvWriter csv(out + "/lattice_transmission.csv",
                                       {"E_neV", "T", "R", "tau_ns"});
                         for (const auto& row : rows) csv.row({row.E_neV, row.T, row.R, row.tau_ns});
                         run_case_list(fig9_cases(), out, threads, filter);
                     }};
        return r;
    }();
    return reg;
}

}  // namespace

std::vector<BuiltinInfo> list_builtins() {
    std::vector<BuiltinInfo> out;
    for (const auto& [name, entry] : registry()) {
        BuiltinInfo info;
        info.name = name;
        info.description = entry.description;
        if (entry.cases)
            for (const auto& [label, cfg] : entry.cases()) info.cases.push_back(label);
        out.push_back(std::move(info));
    }
    return out;
}

std::vector<std::pair<std::string, ScenarioConfig>> builtin_cases(const std::string& name) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw validation_error("unknown builtin scenario: " + name);
    if (!it->second.cases) return {};
    return it->second.cases();
}

void run_builtin(const std::string& name, const std::string& out_dir, int threads,
                 const std::string& case_filter) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw validation_error("unknown builtin scenario: " + name);
    if (it->second.runner) {
        it->second.runner(out_dir, threads, case_filter);
        return;
    }
    run_case_list(it->second.cases(), out_dir, threads, case_filter);
}

}  // namespace ucn
