#include "rotorqec/scenario.hpp"

#include <array>

namespace rotorqec {

namespace {

struct Preset {
    const char* name;
    const char* description;
    const char* text;
};

// Golden checkpoint values asserted by `verify` live next to the presets
// that regenerate them; see verify.cpp for the tolerances.
constexpr std::array kPresets = {
    Preset{
        "codewords_cs725",
        "CS(7,2,5) codeword populations as a hinton grid (no dynamics)",
        R"({
  "name": "codewords_cs725",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "off"},
  "protocol": "none",
  "initial_state": "word0",
  "time": {"t_final": 0.0, "n_samples": 1},
  "output": {"hinton_final": true}
})"},
    Preset{
        "decay_cs725_word0",
        "uncorrected free decay of the CS(7,2,5) |0> word under flat BBR",
        R"({
  "name": "decay_cs725_word0",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "none",
  "initial_state": "word0",
  "time": {"t_final": 2.0, "n_samples": 81},
  "output": {"hinton_final": true}
})"},
    Preset{
        "decay_cs725_plus",
        "uncorrected free decay of the CS(7,2,5) |+> word under flat BBR",
        R"({
  "name": "decay_cs725_plus",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "none",
  "initial_state": "plus",
  "time": {"t_final": 2.0, "n_samples": 81}
})"},
    Preset{
        "decay_a7m22_word0",
        "uncorrected free decay of the A(7,-2,2) |0> word under flat BBR",
        R"({
  "name": "decay_a7m22_word0",
  "code": {"kind": "A", "J_C": 7, "m0": -2, "m1": 2},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "none",
  "initial_state": "word0",
  "time": {"t_final": 2.0, "n_samples": 81}
})"},
    Preset{
        "decay_a7m22_plus",
        "uncorrected free decay of the A(7,-2,2) |+> word under flat BBR",
        R"({
  "name": "decay_a7m22_plus",
  "code": {"kind": "A", "J_C": 7, "m0": -2, "m1": 2},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "none",
  "initial_state": "plus",
  "time": {"t_final": 2.0, "n_samples": 81}
})"},
    Preset{
        "seq_cs725_word0",
        "sequential memory run, CS(7,2,5), |0>, Omega_BSB = 500, spacing 0.05",
        R"({
  "name": "seq_cs725_word0",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "sequential",
  "sequential": {"omega_bsb": 500.0, "spacing": 0.05, "pulse_scheme": "single_pi", "fock_cutoff": 2},
  "initial_state": "word0",
  "time": {"t_final": 2.0},
  "solver": {"rtol": 1e-7, "atol": 1e-10}
})"},
    Preset{
        "seq_cs725_plus",
        "sequential memory run, CS(7,2,5), |+>, Omega_BSB = 500, spacing 0.05",
        R"({
  "name": "seq_cs725_plus",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "sequential",
  "sequential": {"omega_bsb": 500.0, "spacing": 0.05, "pulse_scheme": "single_pi", "fock_cutoff": 2},
  "initial_state": "plus",
  "time": {"t_final": 2.0},
  "solver": {"rtol": 1e-7, "atol": 1e-10}
})"},
    Preset{
        "seq_a7m22_word0",
        "sequential memory run, A(7,-2,2), |0>, Omega_BSB = 500, spacing 0.05",
        R"({
  "name": "seq_a7m22_word0",
  "code": {"kind": "A", "J_C": 7, "m0": -2, "m1": 2},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "sequential",
  "sequential": {"omega_bsb": 500.0, "spacing": 0.05, "pulse_scheme": "single_pi", "fock_cutoff": 2},
  "initial_state": "word0",
  "time": {"t_final": 2.0},
  "solver": {"rtol": 1e-7, "atol": 1e-10}
})"},
    Preset{
        "seq_a7m22_plus",
        "sequential memory run, A(7,-2,2), |+>, Omega_BSB = 500, spacing 0.05",
        R"({
  "name": "seq_a7m22_plus",
  "code": {"kind": "A", "J_C": 7, "m0": -2, "m1": 2},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "sequential",
  "sequential": {"omega_bsb": 500.0, "spacing": 0.05, "pulse_scheme": "single_pi", "fock_cutoff": 2},
  "initial_state": "plus",
  "time": {"t_final": 2.0},
  "solver": {"rtol": 1e-7, "atol": 1e-10}
})"},
    Preset{
        "dec_repump_down",
        "repump-only DEC from the J-lowered |0> word, no BBR (golden: phys_fid 0.974 at t = 0.05)",
        R"({
  "name": "dec_repump_down",
  "_notes": "golden checkpoint: phys_fid(0.05) = 0.974 +- 0.005, <J>(0.05) = 7 +- 0.01",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "off"},
  "protocol": "dec",
  "dec": {"mode": "repump_only", "omega_down": 1000.0, "omega_up": 1000.0, "fock_cutoffs": [2, 2]},
  "initial_state": "down",
  "time": {"t_final": 0.05, "n_samples": 51}
})"},
    Preset{
        "dec_repump_up",
        "repump-only DEC from the J-raised |0> word, no BBR (golden: phys_fid 0.987 at t = 0.05)",
        R"({
  "name": "dec_repump_up",
  "_notes": "golden checkpoint: phys_fid(0.05) = 0.987 +- 0.005, <J>(0.05) = 7 +- 0.01",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "off"},
  "protocol": "dec",
  "dec": {"mode": "repump_only", "omega_down": 1000.0, "omega_up": 1000.0, "fock_cutoffs": [2, 2]},
  "initial_state": "up",
  "time": {"t_final": 0.05, "n_samples": 51}
})"},
    Preset{
        "dec_zeeman_left",
        "Zeeman-only DEC from the m-lowered |0> word, no BBR (golden: first fidelity peak 0.994)",
        R"({
  "name": "dec_zeeman_left",
  "_notes": "golden checkpoint: first local maximum of phys_fid = 0.994 +- 0.003",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "off"},
  "protocol": "dec",
  "dec": {"mode": "zeeman_only", "omega_right": 10.0, "omega_left": 10.0, "fock_cutoffs": [2, 2]},
  "initial_state": "left",
  "time": {"t_final": 1.2, "n_samples": 481}
})"},
    Preset{
        "dec_zeeman_right",
        "Zeeman-only DEC from the m-raised |0> word, no BBR (golden: first fidelity peak 0.994)",
        R"({
  "name": "dec_zeeman_right",
  "_notes": "golden checkpoint: first local maximum of phys_fid = 0.994 +- 0.003",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "off"},
  "protocol": "dec",
  "dec": {"mode": "zeeman_only", "omega_right": 10.0, "omega_left": 10.0, "fock_cutoffs": [2, 2]},
  "initial_state": "right",
  "time": {"t_final": 1.2, "n_samples": 481}
})"},
    Preset{
        "dec_repump_word0",
        "repump-only DEC with flat BBR, |0> word, full window",
        R"({
  "name": "dec_repump_word0",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "dec",
  "dec": {"mode": "repump_only", "fock_cutoffs": [1, 1]},
  "initial_state": "word0",
  "time": {"t_final": 2.0, "n_samples": 81},
  "solver": {"rtol": 1e-7, "atol": 1e-9},
  "output": {"hinton_final": true}
})"},
    Preset{
        "dec_repump_plus",
        "repump-only DEC with flat BBR, |+> word, full window",
        R"({
  "name": "dec_repump_plus",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "dec",
  "dec": {"mode": "repump_only", "fock_cutoffs": [1, 1]},
  "initial_state": "plus",
  "time": {"t_final": 2.0, "n_samples": 81},
  "solver": {"rtol": 1e-7, "atol": 1e-9}
})"},
    Preset{
        "dec_full_word0",
        "full DEC (repump + Zeeman) with flat BBR, |0> word",
        R"({
  "name": "dec_full_word0",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "dec",
  "dec": {"mode": "full", "fock_cutoffs": [1, 1, 1, 1]},
  "initial_state": "word0",
  "time": {"t_final": 2.0, "n_samples": 81},
  "solver": {"rtol": 1e-7, "atol": 1e-9},
  "output": {"hinton_final": true}
})"},
    Preset{
        "dec_full_plus",
        "full DEC (repump + Zeeman) with flat BBR, |+> word",
        R"({
  "name": "dec_full_plus",
  "code": {"kind": "CS", "J_C": 7, "m1": 2, "m2": 5},
  "basis": {"j_max": 10},
  "environment": {"mode": "generic_flat", "gamma_flat": 1.0},
  "protocol": "dec",
  "dec": {"mode": "full", "fock_cutoffs": [1, 1, 1, 1]},
  "initial_state": "plus",
  "time": {"t_final": 2.0, "n_samples": 81},
  "solver": {"rtol": 1e-7, "atol": 1e-9}
})"},
    Preset{
        "worstcase_a_sweep",
        "worst-case single-error infidelity of A(J_C,-2,2) swept over J_C",
        R"({
  "name": "worstcase_a_sweep",
  "_notes": "golden property: strictly decreasing in J_C",
  "code": {"kind": "A", "J_C": 7, "m0": -2, "m1": 2},
  "basis": {"j_max": 21},
  "protocol": "worstcase_sweep",
  "sweep": {"J_C_min": 5, "J_C_max": 20}
})"},
};

const Preset* find(const std::string& name) {
    for (const auto& p : kPresets)
        if (name == p.name) return &p;
    return nullptr;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    names.reserve(kPresets.size());
    for (const auto& p : kPresets) names.emplace_back(p.name);
    return names;
}

bool is_preset(const std::string& name) { return find(name) != nullptr; }

std::string preset_text(const std::string& name) {
    const Preset* p = find(name);
    if (!p) throw ScenarioError("unknown preset: " + name);
    return p->text;
}

std::string preset_description(const std::string& name) {
    const Preset* p = find(name);
    if (!p) throw ScenarioError("unknown preset: " + name);
    return p->description;
}

}  // namespace rotorqec
