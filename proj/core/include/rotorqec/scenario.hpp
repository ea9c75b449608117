#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rotorqec/protocol_dec.hpp"
#include "rotorqec/protocol_seq.hpp"

namespace rotorqec {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Declarative simulation description. Parsed from a strict JSON document;
/// unknown keys are rejected (keys starting with '_' are comment slots).
struct Scenario {
    std::string name = "scenario";

    CodeKind code_kind = CodeKind::CS;
    int J_C = 7;
    int p1 = 2, p2 = 5;

    int j_max = 10;

    bool env_off = false;
    EnvParams env;

    enum class Protocol { None, Sequential, Dec, WorstCaseSweep };
    Protocol protocol = Protocol::None;

    // Sequential settings.
    double seq_omega_bsb = 500.0;
    double seq_spacing = 0.05;
    PulseScheme seq_scheme = PulseScheme::SinglePi;
    int seq_fock_cutoff = 2;
    bool seq_correction = true;
    bool seq_noise_during_pulses = true;
    SeqParams::Measurement seq_measurement = SeqParams::Measurement::Ensemble;

    // DEC settings.
    DecMode dec_mode = DecMode::Full;
    DecParams dec;
    std::vector<int> dec_fock_cutoffs;

    // Sweep settings.
    int sweep_jc_min = 5, sweep_jc_max = 20;

    std::string initial_state = "word0";  // word0|plus|down|up|left|right
    double t_final = 2.0;
    int n_samples = 81;
    SolverOptions solver;
    bool hinton_final = false;
    std::uint64_t seed = 0;
};

Scenario parse_scenario(const std::string& json_text, bool strict = true);
Scenario parse_scenario_file(const std::string& path, bool strict = true);

struct RunArtifacts {
    std::string directory;     // <out>/<name>
    TimeSeries series;
    std::string manifest_json;
};

/// Executes a scenario and writes timeseries.csv, timeseries.json and
/// manifest.json (plus hinton_final.csv when requested) under
/// <out_dir>/<name>/. Throws ScenarioError for config problems and
/// SolverError for integration failures.
RunArtifacts run_scenario(const Scenario& scenario, const std::string& out_dir);

/// Built-in preset configurations regenerating the reference data sets.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
std::string preset_text(const std::string& name);
std::string preset_description(const std::string& name);

struct VerifyCheck {
    std::string scenario;
    std::string check;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    int missing = 0;
    bool all_pass() const {
        if (missing > 0) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

/// Compares emitted preset outputs in a directory against the golden
/// checkpoint table; preset outputs that are absent are reported missing.
VerifyReport verify_output_dir(const std::string& dir);

}  // namespace rotorqec
