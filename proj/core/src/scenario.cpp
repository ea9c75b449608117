#include "rotorqec/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rotorqec {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ScenarioError(msg); }

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed, bool strict) {
    if (!strict) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string& k = it.key();
        if (!k.empty() && k[0] == '_') continue;  // comment slot
        if (!allowed.count(k)) fail("unknown key \"" + where + k + "\"");
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail("key \"" + key + "\" has the wrong type");
    }
}

std::pair<int, int> line_col(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; }
        else ++col;
    }
    return {line, col};
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, bool strict) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(json_text, e.byte);
        fail("parse error at line " + std::to_string(line) + ", column " +
             std::to_string(col) + ": " + e.what());
    }
    if (!doc.is_object()) fail("config root must be an object");

    check_keys(doc, "", {"name", "code", "basis", "environment", "protocol", "sequential",
                         "dec", "sweep", "initial_state", "time", "solver", "output", "seed"},
               strict);

    Scenario s;
    s.name = get_or<std::string>(doc, "name", "scenario");

    if (doc.contains("code")) {
        const json& c = doc["code"];
        check_keys(c, "code.", {"kind", "J_C", "m1", "m2", "m0"}, strict);
        const std::string kind = get_or<std::string>(c, "kind", "CS");
        if (kind == "CS") {
            s.code_kind = CodeKind::CS;
            s.p1 = get_or<int>(c, "m1", 2);
            s.p2 = get_or<int>(c, "m2", 5);
        } else if (kind == "A") {
            s.code_kind = CodeKind::A;
            s.p1 = get_or<int>(c, "m0", -2);
            s.p2 = get_or<int>(c, "m1", 2);
        } else {
            fail("code.kind must be \"CS\" or \"A\"");
        }
        s.J_C = get_or<int>(c, "J_C", 7);
    }

    if (doc.contains("basis")) {
        const json& b = doc["basis"];
        check_keys(b, "basis.", {"j_max"}, strict);
        s.j_max = get_or<int>(b, "j_max", 10);
        if (s.j_max < 1) fail("basis.j_max must be >= 1");
    }

    if (doc.contains("environment")) {
        const json& e = doc["environment"];
        check_keys(e, "environment.",
                   {"mode", "gamma_flat", "dipole_debye", "rotational_constant_joule",
                    "temperature_kelvin"},
                   strict);
        const std::string mode = get_or<std::string>(e, "mode", "generic_flat");
        if (mode == "off") {
            s.env_off = true;
        } else if (mode == "generic_flat") {
            s.env.mode = EnvParams::Mode::GenericFlat;
            s.env.gamma_flat = get_or<double>(e, "gamma_flat", 1.0);
        } else if (mode == "physical") {
            s.env.mode = EnvParams::Mode::Physical;
            s.env.dipole = get_or<double>(e, "dipole_debye", 0.0) * si::debye;
            s.env.rotational_constant = get_or<double>(e, "rotational_constant_joule", 0.0);
            s.env.temperature = get_or<double>(e, "temperature_kelvin", 0.0);
        } else {
            fail("environment.mode must be \"off\", \"generic_flat\" or \"physical\"");
        }
    }

    const std::string proto = get_or<std::string>(doc, "protocol", "none");
    if (proto == "none") s.protocol = Scenario::Protocol::None;
    else if (proto == "sequential") s.protocol = Scenario::Protocol::Sequential;
    else if (proto == "dec") s.protocol = Scenario::Protocol::Dec;
    else if (proto == "worstcase_sweep") s.protocol = Scenario::Protocol::WorstCaseSweep;
    else fail("protocol must be \"none\", \"sequential\", \"dec\" or \"worstcase_sweep\"");

    if (doc.contains("sequential")) {
        const json& q = doc["sequential"];
        check_keys(q, "sequential.",
                   {"omega_bsb", "spacing", "pulse_scheme", "fock_cutoff", "correction",
                    "noise_during_pulses", "measurement"},
                   strict);
        s.seq_omega_bsb = get_or<double>(q, "omega_bsb", 500.0);
        s.seq_spacing = get_or<double>(q, "spacing", 0.05);
        s.seq_fock_cutoff = get_or<int>(q, "fock_cutoff", 2);
        s.seq_correction = get_or<bool>(q, "correction", true);
        s.seq_noise_during_pulses = get_or<bool>(q, "noise_during_pulses", true);
        const std::string scheme = get_or<std::string>(q, "pulse_scheme", "single_pi");
        if (scheme == "single_pi") s.seq_scheme = PulseScheme::SinglePi;
        else if (scheme == "scrofulous") s.seq_scheme = PulseScheme::Scrofulous;
        else fail("sequential.pulse_scheme must be \"single_pi\" or \"scrofulous\"");
        const std::string meas = get_or<std::string>(q, "measurement", "ensemble");
        if (meas == "ensemble") s.seq_measurement = SeqParams::Measurement::Ensemble;
        else if (meas == "trajectory") s.seq_measurement = SeqParams::Measurement::Trajectory;
        else fail("sequential.measurement must be \"ensemble\" or \"trajectory\"");
        if (s.seq_omega_bsb <= 0) fail("sequential.omega_bsb must be > 0");
        if (s.seq_spacing <= 0) fail("sequential.spacing must be > 0");
    }

    if (doc.contains("dec")) {
        const json& d = doc["dec"];
        check_keys(d, "dec.",
                   {"mode", "omega_down", "omega_up", "omega_right", "omega_left",
                    "cool_down", "cool_up", "cool_right", "cool_left", "fock_cutoffs"},
                   strict);
        const std::string mode = get_or<std::string>(d, "mode", "full");
        if (mode == "nothing") s.dec_mode = DecMode::Nothing;
        else if (mode == "repump_only") s.dec_mode = DecMode::RepumpOnly;
        else if (mode == "zeeman_only") s.dec_mode = DecMode::ZeemanOnly;
        else if (mode == "full") s.dec_mode = DecMode::Full;
        else fail("dec.mode must be \"nothing\", \"repump_only\", \"zeeman_only\" or \"full\"");
        s.dec.omega_down = get_or<double>(d, "omega_down", s.dec.omega_down);
        s.dec.omega_up = get_or<double>(d, "omega_up", s.dec.omega_up);
        s.dec.omega_right = get_or<double>(d, "omega_right", s.dec.omega_right);
        s.dec.omega_left = get_or<double>(d, "omega_left", s.dec.omega_left);
        s.dec.cool_down = get_or<double>(d, "cool_down", 2.0 * s.dec.omega_down);
        s.dec.cool_up = get_or<double>(d, "cool_up", 2.0 * s.dec.omega_up);
        s.dec.cool_right = get_or<double>(d, "cool_right", 2.0 * s.dec.omega_right);
        s.dec.cool_left = get_or<double>(d, "cool_left", 2.0 * s.dec.omega_left);
        s.dec_fock_cutoffs = get_or<std::vector<int>>(d, "fock_cutoffs", {});
    }

    if (doc.contains("sweep")) {
        const json& w = doc["sweep"];
        check_keys(w, "sweep.", {"J_C_min", "J_C_max"}, strict);
        s.sweep_jc_min = get_or<int>(w, "J_C_min", 5);
        s.sweep_jc_max = get_or<int>(w, "J_C_max", 20);
        if (s.sweep_jc_min < 3 || s.sweep_jc_max < s.sweep_jc_min)
            fail("sweep range invalid");
    }

    s.initial_state = get_or<std::string>(doc, "initial_state", "word0");
    {
        static const std::set<std::string> valid = {"word0", "plus", "down", "up", "left", "right"};
        if (!valid.count(s.initial_state))
            fail("initial_state must be one of word0|plus|down|up|left|right");
    }

    if (doc.contains("time")) {
        const json& t = doc["time"];
        check_keys(t, "time.", {"t_final", "n_samples"}, strict);
        s.t_final = get_or<double>(t, "t_final", 2.0);
        s.n_samples = get_or<int>(t, "n_samples", 81);
        if (s.t_final < 0) fail("time.t_final must be >= 0");
        if (s.n_samples < 1) fail("time.n_samples must be >= 1");
    }

    if (doc.contains("solver")) {
        const json& v = doc["solver"];
        check_keys(v, "solver.", {"rtol", "atol"}, strict);
        s.solver.rtol = get_or<double>(v, "rtol", 1e-8);
        s.solver.atol = get_or<double>(v, "atol", 1e-10);
        if (s.solver.rtol <= 0 || s.solver.atol <= 0) fail("solver tolerances must be > 0");
    }

    if (doc.contains("output")) {
        const json& o = doc["output"];
        check_keys(o, "output.", {"hinton_final"}, strict);
        s.hinton_final = get_or<bool>(o, "hinton_final", false);
    }

    s.seed = get_or<std::uint64_t>(doc, "seed", 0);

    // Cross-field validation against module preconditions before any compute.
    if (s.J_C > s.j_max) fail("code.J_C exceeds basis.j_max");
    if (s.protocol == Scenario::Protocol::Dec || s.protocol == Scenario::Protocol::None ||
        s.protocol == Scenario::Protocol::Sequential) {
        // Codes validate on construction; do it now for early errors.
        build_code(s.code_kind, s.J_C, s.p1, s.p2, make_basis(s.j_max));
    }
    if (s.protocol == Scenario::Protocol::Sequential &&
        (s.initial_state != "word0" && s.initial_state != "plus"))
        fail("sequential protocol supports initial_state word0|plus");
    if (s.protocol == Scenario::Protocol::WorstCaseSweep && s.code_kind != CodeKind::A)
        fail("worstcase_sweep requires an A code");
    return s;
}

Scenario parse_scenario_file(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), strict);
}

namespace {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["code"] = {{"kind", s.code_kind == CodeKind::CS ? "CS" : "A"},
                 {"J_C", s.J_C},
                 {s.code_kind == CodeKind::CS ? "m1" : "m0", s.p1},
                 {s.code_kind == CodeKind::CS ? "m2" : "m1", s.p2}};
    j["basis"] = {{"j_max", s.j_max}};
    j["environment"] = s.env_off
                           ? json{{"mode", "off"}}
                           : (s.env.mode == EnvParams::Mode::GenericFlat
                                  ? json{{"mode", "generic_flat"}, {"gamma_flat", s.env.gamma_flat}}
                                  : json{{"mode", "physical"}});
    switch (s.protocol) {
        case Scenario::Protocol::None: j["protocol"] = "none"; break;
        case Scenario::Protocol::Sequential: j["protocol"] = "sequential"; break;
        case Scenario::Protocol::Dec: j["protocol"] = "dec"; break;
        case Scenario::Protocol::WorstCaseSweep: j["protocol"] = "worstcase_sweep"; break;
    }
    j["initial_state"] = s.initial_state;
    j["time"] = {{"t_final", s.t_final}, {"n_samples", s.n_samples}};
    j["solver"] = {{"rtol", s.solver.rtol}, {"atol", s.solver.atol}};
    return j;
}

DecInitialState initial_from_string(const std::string& name) {
    if (name == "word0") return DecInitialState::Word0;
    if (name == "plus") return DecInitialState::Plus;
    if (name == "down") return DecInitialState::Down;
    if (name == "up") return DecInitialState::Up;
    if (name == "left") return DecInitialState::Left;
    if (name == "right") return DecInitialState::Right;
    fail("unknown initial_state " + name);
}

}  // namespace

RunArtifacts run_scenario(const Scenario& s, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const auto t_start = std::chrono::steady_clock::now();

    RunArtifacts artifacts;
    TimeSeries series;
    SolverStats stats;
    json extra;
    std::string hinton_csv;

    if (s.protocol == Scenario::Protocol::WorstCaseSweep) {
        series.columns = {"worst_case_infidelity"};
        const BasisPtr basis = make_basis(std::max(s.sweep_jc_max + 1, s.j_max));
        for (int jc = s.sweep_jc_min; jc <= s.sweep_jc_max; ++jc) {
            CodeSpec code = build_code(CodeKind::A, jc, s.p1, s.p2, basis);
            // The time column doubles as the swept J_C.
            series.append(static_cast<double>(jc), {worst_case_infidelity(code)});
        }
        extra["sweep"] = {{"J_C_min", s.sweep_jc_min}, {"J_C_max", s.sweep_jc_max}};
    } else if (s.protocol == Scenario::Protocol::Sequential) {
        SeqParams p;
        p.code_kind = s.code_kind;
        p.J_C = s.J_C;
        p.p1 = s.p1;
        p.p2 = s.p2;
        p.j_max = s.j_max;
        p.fock_cutoff = s.seq_fock_cutoff;
        p.omega_bsb = s.seq_omega_bsb;
        p.spacing = s.seq_spacing;
        p.t_final = s.t_final;
        p.scheme = s.seq_scheme;
        p.correction_enabled = s.seq_correction;
        p.noise_during_pulses = s.seq_noise_during_pulses;
        if (s.env_off) p.env.gamma_flat = 0.0;
        else p.env = s.env;
        p.solver = s.solver;
        p.measurement = s.seq_measurement;
        p.seed = s.seed;
        p.initial = s.initial_state == "plus" ? SeqParams::InitialState::Plus
                                              : SeqParams::InitialState::Word0;
        SeqResult r = run_sequential(p);
        series = std::move(r.series);
        extra["rounds"] = r.rounds;
        extra["round_duration"] = r.round_duration;
        extra["max_leakage"] = r.max_leakage;
        if (s.hinton_final) {
            std::ostringstream os;
            write_hinton_csv(hinton_snapshot(r.final_state), os);
            hinton_csv = os.str();
        }
    } else if (s.protocol == Scenario::Protocol::Dec) {
        DecRunParams p;
        p.code_kind = s.code_kind;
        p.J_C = s.J_C;
        p.p1 = s.p1;
        p.p2 = s.p2;
        p.j_max = s.j_max;
        p.mode = s.dec_mode;
        p.fock_cutoffs = s.dec_fock_cutoffs;
        p.bbr_on = !s.env_off;
        p.env = s.env;
        p.dec = s.dec;
        p.initial = initial_from_string(s.initial_state);
        p.t_final = s.t_final;
        p.n_samples = s.n_samples;
        p.solver = s.solver;
        DecResult r = run_dec(p);
        series = std::move(r.series);
        stats = r.stats;
        if (s.hinton_final) {
            std::ostringstream os;
            write_hinton_csv(hinton_snapshot(r.final_state), os);
            hinton_csv = os.str();
        }
    } else {
        // Bare evolution of the selected state under the environment family.
        DecRunParams p;  // reuse run_dec in "nothing" mode for identical observables
        p.code_kind = s.code_kind;
        p.J_C = s.J_C;
        p.p1 = s.p1;
        p.p2 = s.p2;
        p.j_max = s.j_max;
        p.mode = DecMode::Nothing;
        p.bbr_on = !s.env_off;
        p.env = s.env;
        p.initial = initial_from_string(s.initial_state);
        p.t_final = s.t_final;
        p.n_samples = s.n_samples;
        p.solver = s.solver;
        DecResult r = run_dec(p);
        series = std::move(r.series);
        stats = r.stats;
        if (s.hinton_final) {
            std::ostringstream os;
            write_hinton_csv(hinton_snapshot(r.final_state), os);
            hinton_csv = os.str();
        }
    }

    const auto t_end = std::chrono::steady_clock::now();
    const double wall_s = std::chrono::duration<double>(t_end - t_start).count();

    // Manifest.
    json manifest;
    const json cfg = scenario_to_json(s);
    manifest["config"] = cfg;
    manifest["config_hash"] = fnv1a(cfg.dump());
    manifest["code"] = cfg["code"];
    manifest["timescale"] = "rates in units of the codespace linewidth";
    if (!s.env_off && s.env.mode == EnvParams::Mode::GenericFlat)
        manifest["gamma_c"] = code_linewidth(s.J_C, s.env);
    manifest["truncation"] = {{"j_max", s.j_max}};
    manifest["solver"] = {{"rtol", s.solver.rtol},
                          {"atol", s.solver.atol},
                          {"steps_accepted", stats.steps_accepted},
                          {"steps_rejected", stats.steps_rejected},
                          {"rhs_evals", stats.rhs_evals},
                          {"max_trace_drift", stats.max_trace_drift}};
    manifest["columns"] = series.columns;
    manifest["wall_time_s"] = wall_s;
    for (auto it = extra.begin(); it != extra.end(); ++it) manifest[it.key()] = it.value();

    // Emit files.
    fs::path dir = fs::path(out_dir) / s.name;
    fs::create_directories(dir);
    {
        std::ofstream csv(dir / "timeseries.csv");
        series.write_csv(csv);
    }
    {
        std::ofstream js(dir / "timeseries.json");
        js << series.to_json() << "\n";
    }
    {
        std::ofstream mf(dir / "manifest.json");
        mf << manifest.dump(2) << "\n";
    }
    if (!hinton_csv.empty()) {
        std::ofstream hf(dir / "hinton_final.csv");
        hf << hinton_csv;
    }

    artifacts.directory = dir.string();
    artifacts.series = std::move(series);
    artifacts.manifest_json = manifest.dump(2);
    return artifacts;
}

}  // namespace rotorqec
