#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "ucnwave/csv.hpp"
#include "ucnwave/errors.hpp"
#include "ucnwave/scenario.hpp"

// Exit codes: 0 success, 2 validation error, 3 numerical failure.

namespace {

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ucn::validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const ucn::numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ucnwave - wave packets through moving potential structures"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    int threads = 0;  // 0 = hardware concurrency
    unsigned long seed = 0;
    app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", threads, "worker threads for sweeps (0 = auto)")
        ->capture_default_str();
    app.add_option("--seed", seed, "reserved; no stochastic components today");

    // run <config>
    std::string run_config;
    auto* cmd_run = app.add_subcommand("run", "run one scenario config");
    cmd_run->add_option("config", run_config, "scenario config JSON")->required();

    // sweep <config> --vary <path> --values ...
    std::string sweep_config, vary_path;
    std::vector<double> sweep_values;
    auto* cmd_sweep = app.add_subcommand("sweep", "independent runs over a parameter");
    cmd_sweep->add_option("config", sweep_config, "scenario config JSON")->required();
    cmd_sweep->add_option("--vary", vary_path, "JSON pointer, e.g. /motion/a_m_s2")->required();
    cmd_sweep->add_option("--values", sweep_values, "values to substitute")->required();

    // transmission <config> / gdt <config>
    std::string stat_config;
    auto* cmd_trans = app.add_subcommand("transmission", "stationary T/R/GDT curve");
    cmd_trans->add_option("config", stat_config, "scenario config JSON with a stationary block")
        ->required();
    std::string gdt_config;
    auto* cmd_gdt = app.add_subcommand("gdt", "group-delay curve (set stationary.branch)");
    cmd_gdt->add_option("config", gdt_config, "scenario config JSON with a stationary block")
        ->required();

    // semiclassical <config> --values a...
    std::string semi_config;
    std::vector<double> semi_values;
    auto* cmd_semi = app.add_subcommand("semiclassical",
                                        "classical boundary-crossing trace over accelerations");
    cmd_semi->add_option("config", semi_config, "scenario config JSON")->required();
    cmd_semi->add_option("--values", semi_values, "accelerations in m/s^2")->required();

    // list-scenarios / scenario <name>
    auto* cmd_list = app.add_subcommand("list-scenarios", "list builtin scenarios");
    std::string scen_name, case_filter;
    bool dump_only = false;
    auto* cmd_scen = app.add_subcommand("scenario", "run a builtin scenario");
    cmd_scen->add_option("name", scen_name, "builtin name (see list-scenarios)")->required();
    cmd_scen->add_option("--case", case_filter, "run only cases whose label contains this");
    cmd_scen->add_flag("--dump-config", dump_only, "print case configs instead of running");

    CLI11_PARSE(app, argc, argv);

    if (cmd_run->parsed()) {
        return guarded([&] {
            const auto cfg = ucn::load_config(run_config);
            const auto res = ucn::run_scenario(cfg);
            ucn::write_artifacts(res, out_dir);
            std::printf("%s\n", res.summary().dump(2).c_str());
        });
    }

    if (cmd_sweep->parsed()) {
        return guarded([&] {
            const auto cfg = ucn::load_config(sweep_config);
            const auto res = ucn::sweep(cfg, vary_path, sweep_values, threads);
            std::filesystem::create_directories(out_dir);
            ucn::write_sweep_csv(res, out_dir + "/sweep.csv");
            ucn::json failures = ucn::json::array();
            for (const auto& p : res.points)
                if (p.status != "ok")
                    failures.push_back({{"value", p.value}, {"status", p.status}});
            ucn::json summary{{"vary", vary_path},
                              {"n_points", res.points.size()},
                              {"failures", failures}};
            std::ofstream(out_dir + "/sweep_summary.json") << summary.dump(2) << '\n';
            std::printf("%s\n", summary.dump(2).c_str());
        });
    }

    if (cmd_trans->parsed() || cmd_gdt->parsed()) {
        return guarded([&] {
            const auto cfg = ucn::load_config(cmd_trans->parsed() ? stat_config : gdt_config);
            if (!cfg.stationary)
                throw ucn::validation_error("config needs a stationary {E_min_neV, E_max_neV, "
                                            "n_points, branch} block");
            std::filesystem::create_directories(out_dir);
            const std::string path = out_dir + "/stationary_curve.csv";
            ucn::write_stationary_curve(cfg, path);
            std::printf("wrote %s\n", path.c_str());
        });
    }

    if (cmd_semi->parsed()) {
        return guarded([&] {
            const auto cfg = ucn::load_config(semi_config);
            const auto structure = ucn::build_structure(cfg);
            const auto packet = ucn::build_packet(cfg);
            std::filesystem::create_directories(out_dir);
            ucn::CsvWriter csv(out_dir + "/semiclassical.csv",
                               {"a_m_per_s2", "dv_classical", "outcome"});
            for (double a : semi_values) {
                ucn::ScenarioConfig point = cfg;
                point.motion.a_m_s2 = a;
                const auto [motion, t_star] = ucn::synchronized_motion(point);
                const auto tr = ucn::trace(packet.E0_neV, structure, motion, packet.x0_um,
                                           packet.direction);
                csv.row({ucn::CsvWriter::format(a), ucn::CsvWriter::format(tr.dv_m_s()),
                         ucn::to_string(tr.outcome)});
            }
            std::printf("wrote %s/semiclassical.csv\n", out_dir.c_str());
        });
    }

    if (cmd_list->parsed()) {
        for (const auto& info : ucn::list_builtins()) {
            std::printf("%-6s %s\n", info.name.c_str(), info.description.c_str());
            if (!info.cases.empty()) {
                std::printf("       cases:");
                for (const auto& c : info.cases) std::printf(" %s", c.c_str());
                std::printf("\n");
            }
        }
        return 0;
    }

    if (cmd_scen->parsed()) {
        return guarded([&] {
            if (dump_only) {
                for (const auto& [label, cfg] : ucn::builtin_cases(scen_name)) {
                    if (!case_filter.empty() && label.find(case_filter) == std::string::npos)
                        continue;
                    std::printf("// case %s\n%s\n", label.c_str(),
                                ucn::config_to_json(cfg).dump(2).c_str());
                }
                return;
            }
            ucn::run_builtin(scen_name, out_dir, threads, case_filter);
            std::printf("scenario %s written to %s\n", scen_name.c_str(), out_dir.c_str());
        });
    }
    return 0;
}
