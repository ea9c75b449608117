#include "rotorqec/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "rotorqec/angmom.hpp"

namespace rotorqec {

double gamma_sd(int J, const EnvParams& env) {
    if (J <= 0) return 0.0;
    if (env.mode == EnvParams::Mode::GenericFlat) return 0.0;
    const double d2 = env.dipole * env.dipole;
    const double b3 = std::pow(env.rotational_constant, 3);
    const double j3 = static_cast<double>(J) * J * J;
    return 8.0 * d2 * b3 * j3 /
           (3.0 * M_PI * si::epsilon0 * std::pow(si::hbar, 4) * std::pow(si::c_light, 3));
}

double gamma_bbr(int J, const EnvParams& env) {
    if (J <= 0) return 0.0;
    if (env.mode == EnvParams::Mode::GenericFlat) return env.gamma_flat;
    if (env.temperature <= 0.0) return 0.0;
    const double x = 2.0 * env.rotational_constant * J / (si::k_boltzmann * env.temperature);
    return gamma_sd(J, env) / std::expm1(x);
}

double transition_rate(int J, int m, int dm, const EnvParams& env, Process process) {
    if (J < 1) return 0.0;
    if (std::abs(m) > J || std::abs(m + dm) > J - 1) return 0.0;
    const double c = slater(HalfInt(J), HalfInt(J - 1), HalfInt(m + dm), HalfInt(1), HalfInt(dm));
    const double geom = (4.0 * M_PI / 3.0) * c * c;
    switch (process) {
        case Process::SpontaneousDecay: return gamma_sd(J, env) * geom;
        case Process::BbrStimulated:
        case Process::BbrAbsorption: return gamma_bbr(J, env) * geom;
    }
    return 0.0;
}

LinOp resolved_collapse(const BasisPtr& basis, int J, int m, int dm,
                        const EnvParams& env, Process process) {
    const double rate = transition_rate(J, m, dm, env, process);
    if (rate == 0.0) return LinOp::zero(basis);
    if (J > basis->j_max())
        throw std::out_of_range("resolved_collapse: J above basis truncation");
    const double amp = std::sqrt(rate);
    // T(J, m, -1, dm) = |J-1, m+dm><J, m|; absorption is its adjoint.
    const int lo = basis->rotor_index(J - 1, m + dm);
    const int hi = basis->rotor_index(J, m);
    std::vector<Triplet> entries;
    entries.reserve(basis->mode_dim());
    for (int mi = 0; mi < basis->mode_dim(); ++mi) {
        const int i_lo = basis->index_parts(lo, mi);
        const int i_hi = basis->index_parts(hi, mi);
        if (process == Process::BbrAbsorption)
            entries.emplace_back(i_hi, i_lo, amp);
        else
            entries.emplace_back(i_lo, i_hi, amp);
    }
    return LinOp::from_triplets(basis, entries);
}

LinOp unresolved_collapse(const BasisPtr& basis, int J, int dm,
                          const EnvParams& env, Process process) {
    LinOp sum = LinOp::zero(basis);
    for (int m = -J; m <= J; ++m)
        sum += resolved_collapse(basis, J, m, dm, env, process);
    return sum;
}

std::vector<LinOp> env_family(const BasisPtr& basis, const EnvParams& env,
                              int j_lo, int j_hi) {
    if (j_hi < 0) j_hi = basis->j_max();
    if (j_lo < 1) j_lo = 1;
    std::vector<LinOp> ops;
    for (int J = j_lo; J <= j_hi; ++J)
        for (int dm : {-1, 0, 1}) {
            for (Process p : {Process::BbrStimulated, Process::BbrAbsorption,
                              Process::SpontaneousDecay}) {
                LinOp op = unresolved_collapse(basis, J, dm, env, p);
                if (op.nnz() > 0) ops.push_back(std::move(op));
            }
        }
    return ops;
}

std::vector<LinOp> recoverable_family(const BasisPtr& basis, const EnvParams& env, int J_C) {
    std::vector<LinOp> ops;
    for (int dm : {-1, 0, 1}) {
        for (Process p : {Process::BbrStimulated, Process::SpontaneousDecay}) {
            LinOp op = unresolved_collapse(basis, J_C, dm, env, p);  // J_C -> J_C - 1
            if (op.nnz() > 0) ops.push_back(std::move(op));
        }
        // E^BBR(J_C + 1, dm): both directions of the J_C <-> J_C + 1 boundary.
        LinOp down = unresolved_collapse(basis, J_C + 1, dm, env, Process::BbrStimulated);
        if (down.nnz() > 0) ops.push_back(std::move(down));
        LinOp up = unresolved_collapse(basis, J_C + 1, dm, env, Process::BbrAbsorption);
        if (up.nnz() > 0) ops.push_back(std::move(up));
    }
    return ops;
}

double code_linewidth(int J_C, const EnvParams& env) {
    if (J_C < 1) throw std::invalid_argument("code_linewidth: J_C must be >= 1");
    const double j = J_C;
    return (j * (gamma_sd(J_C, env) + gamma_bbr(J_C, env)) +
            (j + 1.0) * gamma_bbr(J_C + 1, env)) / (2.0 * j + 1.0);
}

}  // namespace rotorqec
