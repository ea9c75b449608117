// Scenario runner for the rotor QEC simulator.
//
// Verbs:
//   run <config|preset> [--out DIR] [--strict/--no-strict]
//   verify <dir>
//   list-presets
//   describe <preset>
//
// Exit codes: 0 ok, 1 validation error, 2 solver failure, 3 verification failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "rotorqec/lindblad.hpp"
#include "rotorqec/scenario.hpp"

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("ROTORQEC_OUT")) return env;
    return "out";
}

int do_run(const std::string& source, const std::string& out_dir, bool strict) {
    using namespace rotorqec;
    Scenario scenario;
    try {
        if (is_preset(source)) scenario = parse_scenario(preset_text(source), strict);
        else scenario = parse_scenario_file(source, strict);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    try {
        RunArtifacts art = run_scenario(scenario, out_dir);
        std::cout << "wrote " << art.directory << " (" << art.series.n_samples()
                  << " samples)\n";
        return 0;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const ScenarioError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
}

int do_verify(const std::string& dir) {
    using namespace rotorqec;
    VerifyReport report = verify_output_dir(dir);
    int width = 0;
    for (const auto& c : report.checks)
        width = std::max<int>(width, static_cast<int>(c.scenario.size()));
    for (const auto& c : report.checks) {
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.scenario;
        for (int i = static_cast<int>(c.scenario.size()); i < width + 2; ++i) std::cout << ' ';
        std::cout << c.check << "  [" << c.detail << "]\n";
    }
    const int failed = static_cast<int>(
        std::count_if(report.checks.begin(), report.checks.end(),
                      [](const auto& c) { return !c.pass; }));
    std::cout << report.checks.size() - failed << "/" << report.checks.size() << " checks passed\n";
    return report.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotor QEC scenario runner"};
    app.require_subcommand(1);

    std::string run_source, run_out = default_out_dir();
    bool strict = true;
    auto* run = app.add_subcommand("run", "run a scenario config file or preset");
    run->add_option("config", run_source, "config file path or preset name")->required();
    run->add_option("--out", run_out, "output directory (default $ROTORQEC_OUT or ./out)");
    run->add_flag("--strict,!--no-strict", strict, "reject unknown config keys (default on)");

    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "check emitted outputs against golden values");
    verify->add_option("dir", verify_dir, "output directory to verify")->required();

    auto* list = app.add_subcommand("list-presets", "list built-in scenario presets");

    std::string describe_name;
    auto* describe = app.add_subcommand("describe", "print a preset's description and config");
    describe->add_option("preset", describe_name, "preset name")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return do_run(run_source, run_out, strict);
    if (verify->parsed()) return do_verify(verify_dir);
    if (list->parsed()) {
        for (const auto& name : rotorqec::preset_names())
            std::cout << name << "  -  " << rotorqec::preset_description(name) << "\n";
        return 0;
    }
    if (describe->parsed()) {
        try {
            std::cout << describe_name << ": " << rotorqec::preset_description(describe_name)
                      << "\n" << rotorqec::preset_text(describe_name) << "\n";
            return 0;
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return 1;
        }
    }
    return 0;
}
