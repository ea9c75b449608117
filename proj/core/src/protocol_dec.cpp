#include "rotorqec/protocol_dec.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rotorqec/angmom.hpp"
#include "rotorqec/rotor_ops.hpp"

namespace rotorqec {

DecParams DecParams::scaled(double omega_repump) {
    DecParams p;
    p.omega_down = p.omega_up = omega_repump;
    p.cool_down = p.cool_up = 2.0 * omega_repump;
    p.omega_right = p.omega_left = omega_repump / 100.0;
    p.cool_right = p.cool_left = 2.0 * p.omega_right;
    return p;
}

LinOp h_dec_j(const BasisPtr& basis, int J_C, const DecParams& params,
              int mode_down, int mode_up) {
    const double root = std::sqrt(4.0 * M_PI / 3.0);
    LinOp h = LinOp::zero(basis);
    // Downward repump J_C + 1 -> J_C, phonon into mode_down.
    if (J_C + 1 <= basis->j_max())
        h += unresolved_interaction(basis, J_C + 1, -1, 0, params.omega_down,
                                    ModeAction::bsb(mode_down), [&](int m) {
                                        return root * slater(HalfInt(J_C + 1), HalfInt(J_C),
                                                             HalfInt(m), HalfInt(1), HalfInt(0));
                                    });
    // Upward repump J_C - 1 -> J_C, phonon into mode_up.
    if (J_C - 1 >= 0)
        h += unresolved_interaction(basis, J_C - 1, +1, 0, params.omega_up,
                                    ModeAction::bsb(mode_up), [&](int m) {
                                        return root * slater(HalfInt(J_C - 1), HalfInt(J_C),
                                                             HalfInt(m), HalfInt(1), HalfInt(0));
                                    });
    return h;
}

LinOp h_dec_m(const BasisPtr& basis, const CodeSpec& code, const DecParams& params,
              int mode_right, int mode_left) {
    LinOp h = LinOp::zero(basis);
    for (int mc : code.support()) {
        // sigma+ correction: |J_C, m_C - 1> -> |J_C, m_C>, phonon into mode_right.
        if (std::abs(mc - 1) <= code.J_C)
            h += interaction(basis, code.J_C, mc - 1, 0, +1, params.omega_right,
                             ModeAction::bsb(mode_right));
        // sigma- correction: |J_C, m_C + 1> -> |J_C, m_C>, phonon into mode_left.
        if (std::abs(mc + 1) <= code.J_C)
            h += interaction(basis, code.J_C, mc + 1, 0, -1, params.omega_left,
                             ModeAction::bsb(mode_left));
    }
    return h;
}

std::vector<LinOp> cooling_collapses(const BasisPtr& basis,
                                     const std::vector<std::pair<int, double>>& mode_rates) {
    std::vector<LinOp> ops;
    for (auto [mode, rate] : mode_rates) {
        if (mode < 0 || mode >= basis->n_modes())
            throw std::invalid_argument("cooling_collapses: bad mode index");
        if (rate <= 0.0) continue;
        const double amp = std::sqrt(rate);
        std::vector<Triplet> entries;
        for (int i = 0; i < basis->dim(); ++i) {
            const auto lab = basis->label(i);
            const int n = lab.ns[mode];
            if (n == 0) continue;
            auto ns = lab.ns;
            ns[mode] = n - 1;
            entries.emplace_back(basis->index(lab.J, lab.m, ns), i, amp * std::sqrt(double(n)));
        }
        ops.push_back(LinOp::from_triplets(basis, entries));
    }
    return ops;
}

DecResult run_dec(const DecRunParams& params) {
    // Mode layout.
    int n_modes = 0;
    int mode_down = -1, mode_up = -1, mode_right = -1, mode_left = -1;
    switch (params.mode) {
        case DecMode::Nothing: n_modes = 0; break;
        case DecMode::RepumpOnly: n_modes = 2; mode_down = 0; mode_up = 1; break;
        case DecMode::ZeemanOnly: n_modes = 2; mode_right = 0; mode_left = 1; break;
        case DecMode::Full: n_modes = 4; mode_down = 0; mode_up = 1; mode_right = 2; mode_left = 3; break;
    }
    std::vector<int> cutoffs = params.fock_cutoffs;
    if (cutoffs.empty()) {
        cutoffs.assign(n_modes, params.mode == DecMode::Full ? 1 : 2);
    }
    if (static_cast<int>(cutoffs.size()) != n_modes)
        throw std::invalid_argument("run_dec: fock_cutoffs size does not match the mode layout");

    const BasisPtr basis = make_basis(params.j_max, cutoffs);
    DecResult result;
    result.code = build_code(params.code_kind, params.J_C, params.p1, params.p2, basis);
    const CodeSpec& code = result.code;

    // Hamiltonian.
    std::optional<LinOp> h;
    if (params.mode == DecMode::RepumpOnly)
        h = h_dec_j(basis, code.J_C, params.dec, mode_down, mode_up);
    else if (params.mode == DecMode::ZeemanOnly)
        h = h_dec_m(basis, code, params.dec, mode_right, mode_left);
    else if (params.mode == DecMode::Full)
        h = h_dec_j(basis, code.J_C, params.dec, mode_down, mode_up) +
            h_dec_m(basis, code, params.dec, mode_right, mode_left);

    // Collapse operators.
    std::vector<LinOp> collapses;
    if (params.bbr_on)
        for (auto& op : env_family(basis, params.env)) collapses.push_back(std::move(op));
    std::vector<std::pair<int, double>> cooling;
    if (mode_down >= 0) cooling.emplace_back(mode_down, params.dec.cool_down);
    if (mode_up >= 0) cooling.emplace_back(mode_up, params.dec.cool_up);
    if (mode_right >= 0) cooling.emplace_back(mode_right, params.dec.cool_right);
    if (mode_left >= 0) cooling.emplace_back(mode_left, params.dec.cool_left);
    for (auto& op : cooling_collapses(basis, cooling)) collapses.push_back(std::move(op));

    // Initial state: selected rotor vector (x) motional vacuum.
    Eigen::VectorXcd psi_rotor = Eigen::VectorXcd::Zero(basis->rotor_dim());
    auto word_component = [&](int r) {
        return code.word0[basis->index_parts(r, 0)];
    };
    auto shift_word = [&](int dJ, int dm) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis->rotor_dim());
        for (int r = 0; r < basis->rotor_dim(); ++r) {
            const cxd amp = word_component(r);
            if (std::abs(amp) < 1e-14) continue;
            const auto lab = basis->label(r * basis->mode_dim());
            if (!basis->contains(lab.J + dJ, lab.m + dm))
                throw std::out_of_range("run_dec: shifted initial state leaves truncation");
            v[basis->rotor_index(lab.J + dJ, lab.m + dm)] = amp;
        }
        return v;
    };
    switch (params.initial) {
        case DecInitialState::Word0:
            for (int r = 0; r < basis->rotor_dim(); ++r) psi_rotor[r] = word_component(r);
            break;
        case DecInitialState::Plus:
            for (int r = 0; r < basis->rotor_dim(); ++r)
                psi_rotor[r] = (code.word0[basis->index_parts(r, 0)] +
                                code.word1[basis->index_parts(r, 0)]) / std::sqrt(2.0);
            break;
        case DecInitialState::Down: psi_rotor = shift_word(-1, 0); break;
        case DecInitialState::Up: psi_rotor = shift_word(+1, 0); break;
        case DecInitialState::Left: psi_rotor = shift_word(0, -1); break;
        case DecInitialState::Right: psi_rotor = shift_word(0, +1); break;
    }
    DensityOp rho0 = DensityOp::pure_rotor_vacuum(basis, psi_rotor);

    // Reference state for the physical fidelity: |+> for the Plus run, the
    // |0>-codeword for everything else (the shifted states are its images).
    Eigen::VectorXcd ref_rotor = Eigen::VectorXcd::Zero(basis->rotor_dim());
    if (params.initial == DecInitialState::Plus)
        for (int r = 0; r < basis->rotor_dim(); ++r)
            ref_rotor[r] = (code.word0[basis->index_parts(r, 0)] +
                            code.word1[basis->index_parts(r, 0)]) / std::sqrt(2.0);
    else
        for (int r = 0; r < basis->rotor_dim(); ++r) ref_rotor[r] = word_component(r);
    const BasisPtr rotor_basis = make_basis(params.j_max, {});
    const DensityOp ref_state = DensityOp::pure(rotor_basis, ref_rotor);

    // Observables.
    auto [lx, lz] = logical_ops(code);
    std::vector<Observable> obs;
    obs.push_back(Observable::custom("F0", [lz = lz](const DensityOp& r) {
        return 0.5 * (1.0 + r.expectation(lz));
    }));
    obs.push_back(Observable::custom("F1", [lz = lz](const DensityOp& r) {
        return 0.5 * (1.0 - r.expectation(lz));
    }));
    obs.push_back(Observable::custom("Fplus", [lx = lx](const DensityOp& r) {
        return 0.5 * (1.0 + r.expectation(lx));
    }));
    obs.push_back(Observable::custom("Fminus", [lx = lx](const DensityOp& r) {
        return 0.5 * (1.0 - r.expectation(lx));
    }));
    obs.push_back(Observable::custom("J_expect", [basis](const DensityOp& r) {
        double acc = 0.0;
        for (int J = 0; J <= basis->j_max(); ++J)
            for (int m = -J; m <= J; ++m) {
                const int ri = basis->rotor_index(J, m);
                for (int mi = 0; mi < basis->mode_dim(); ++mi)
                    acc += J * r.matrix()(basis->index_parts(ri, mi), basis->index_parts(ri, mi)).real();
            }
        return acc;
    }));
    obs.push_back(Observable::custom("phys_fid", [ref_state](const DensityOp& r) {
        return fidelity(trace_out_modes(r), ref_state);
    }));
    obs.push_back(Observable::custom("p_JC", [basis, J_C = code.J_C](const DensityOp& r) {
        double acc = 0.0;
        for (int m = -J_C; m <= J_C; ++m) {
            const int ri = basis->rotor_index(J_C, m);
            for (int mi = 0; mi < basis->mode_dim(); ++mi)
                acc += r.matrix()(basis->index_parts(ri, mi), basis->index_parts(ri, mi)).real();
        }
        return acc;
    }));
    obs.push_back(Observable::custom("trace", [](const DensityOp& r) { return r.trace(); }));

    std::vector<double> samples(params.n_samples);
    for (int i = 0; i < params.n_samples; ++i)
        samples[i] = params.t_final * i / (params.n_samples - 1.0);
    if (params.n_samples < 2) samples = {params.t_final};

    auto res = evolve(h, collapses, rho0, 0.0, params.t_final, samples, obs, params.solver);
    result.series = std::move(res.series);
    result.final_state = std::move(res.final_state);
    result.stats = res.stats;
    result.checkpoint_times = std::move(res.checkpoint_times);
    result.checkpoints = std::move(res.checkpoints);
    return result;
}

HintonGrid hinton_snapshot(const DensityOp& rho) {
    DensityOp reduced = rho.basis()->n_modes() > 0 ? trace_out_modes(rho) : rho;
    const RotorBasis& b = *reduced.basis();
    HintonGrid grid;
    grid.j_max = b.j_max();
    grid.pop = Eigen::MatrixXd::Zero(b.j_max() + 1, 2 * b.j_max() + 1);
    for (int J = 0; J <= b.j_max(); ++J)
        for (int m = -J; m <= J; ++m)
            grid.pop(J, m + b.j_max()) = reduced.population(b.rotor_index(J, m));
    return grid;
}

void write_hinton_csv(const HintonGrid& grid, std::ostream& os) {
    os << "J\\m";
    for (int m = -grid.j_max; m <= grid.j_max; ++m) os << "," << m;
    os << "\n";
    for (int J = 0; J <= grid.j_max; ++J) {
        os << J;
        for (int m = -grid.j_max; m <= grid.j_max; ++m) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12e", grid.pop(J, m + grid.j_max));
            os << "," << buf;
        }
        os << "\n";
    }
}

}  // namespace rotorqec
