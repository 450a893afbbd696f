// rbsim command line front end: load a scenario, run it, report energies.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "rbsim/rbsim.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"DC rail corridor simulator: regenerative braking energy accounting"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run a scenario file");
    std::string scenario_path;
    std::string out_dir;
    std::string mode_override;
    bool emit_plot_data = false;
    bool strict_accel = false;
    run_cmd->add_option("scenario", scenario_path, "scenario config file")->required();
    run_cmd->add_option("--out", out_dir, "directory for timeseries/summary output");
    run_cmd->add_option("--mode", mode_override, "override mode: quasi_static or drive_level")
        ->check(CLI::IsMember({"quasi_static", "drive_level"}));
    run_cmd->add_flag("--emit-plot-data", emit_plot_data,
                      "write the full time series (and drive waveforms in drive_level mode)");
    run_cmd->add_flag("--strict-accel-limits", strict_accel,
                      "treat profile acceleration-limit violations as errors");

    CLI11_PARSE(app, argc, argv);

    try {
        rbsim::Scenario scenario = rbsim::load_scenario_file(scenario_path);
        if (!mode_override.empty())
            scenario.mode = mode_override == "drive_level" ? rbsim::SimMode::DriveLevel
                                                           : rbsim::SimMode::QuasiStatic;
        if (strict_accel) scenario.strict_accel_limits = true;

        rbsim::RunResult result = rbsim::run(scenario);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

        rbsim::emit_summary(result.report, std::cout);

        if (!out_dir.empty() || emit_plot_data) {
            const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
            fs::create_directories(dir);
            {
                std::ofstream ts(dir / "timeseries.csv");
                rbsim::emit_timeseries(result, ts, scenario.trains.size(),
                                       scenario.substations.size());
            }
            {
                std::ofstream sum(dir / "summary.txt");
                rbsim::emit_summary(result.report, sum);
            }
            if (emit_plot_data && scenario.mode == rbsim::SimMode::DriveLevel) {
                for (std::size_t i = 0; i < result.drive_waveforms.size(); ++i) {
                    std::ofstream wf(dir / ("drive_train" + std::to_string(i + 1) + ".csv"));
                    rbsim::emit_drive_waveforms(result.drive_waveforms[i], wf);
                }
            }
            std::cout << "wrote " << (dir / "timeseries.csv").string() << "\n";
        }
        return 0;
    } catch (const rbsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
