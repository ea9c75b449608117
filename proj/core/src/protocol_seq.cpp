#include "rotorqec/protocol_seq.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rotorqec/angmom.hpp"
#include "rotorqec/rotor_ops.hpp"

namespace rotorqec {

namespace {

/// Diagonal +-1 operator from a rotor-state predicate (true -> -1).
LinOp diag_check(const BasisPtr& basis, const std::function<bool(int, int)>& flagged) {
    std::vector<Triplet> entries;
    entries.reserve(basis->dim());
    for (int J = 0; J <= basis->j_max(); ++J)
        for (int m = -J; m <= J; ++m) {
            const double v = flagged(J, m) ? -1.0 : 1.0;
            const int r = basis->rotor_index(J, m);
            for (int mi = 0; mi < basis->mode_dim(); ++mi) {
                const int i = basis->index_parts(r, mi);
                entries.emplace_back(i, i, v);
            }
        }
    return LinOp::from_triplets(basis, entries);
}

}  // namespace

LinOp check_op_J(const BasisPtr& basis, int J_C, int dJ) {
    if (dJ != 1 && dJ != -1) throw std::invalid_argument("check_op_J: dJ must be +-1");
    return diag_check(basis, [=](int J, int) { return J == J_C + dJ; });
}

LinOp check_op_m(const BasisPtr& basis, const CodeSpec& code, int dm) {
    if (dm != 1 && dm != -1) throw std::invalid_argument("check_op_m: dm must be +-1");
    const auto support = code.support();
    return diag_check(basis, [=](int J, int m) {
        if (J != code.J_C) return false;
        for (int mc : support)
            if (m == mc + dm) return true;
        return false;
    });
}

MeasureResult measure(const DensityOp& rho, const LinOp& check) {
    const int d = rho.dim();
    // Extract the +-1 diagonal; reject anything else.
    std::vector<bool> minus(d, false);
    {
        Eigen::VectorXcd diag = check.matrix().diagonal();
        if (check.nnz() != d)
            throw std::invalid_argument("measure: check operator must be a full +-1 diagonal");
        for (int i = 0; i < d; ++i) {
            const cxd v = diag[i];
            if (std::abs(v - cxd(1, 0)) < 1e-12) continue;
            if (std::abs(v - cxd(-1, 0)) < 1e-12) { minus[i] = true; continue; }
            throw std::invalid_argument("measure: check operator diagonal is not +-1");
        }
    }

    MeasureResult out;
    const Eigen::MatrixXcd& r = rho.matrix();
    double p_minus = 0.0;
    for (int i = 0; i < d; ++i)
        if (minus[i]) p_minus += r(i, i).real();
    p_minus = std::clamp(p_minus, 0.0, 1.0);
    out.prob_minus = p_minus;

    const double eps = 1e-14;
    if (p_minus > eps) {
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
        for (int j = 0; j < d; ++j)
            if (minus[j])
                for (int i = 0; i < d; ++i)
                    if (minus[i]) b(i, j) = r(i, j);
        b /= p_minus;
        out.minus_branch = DensityOp(rho.basis(), std::move(b));
    }
    if (1.0 - p_minus > eps) {
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
        for (int j = 0; j < d; ++j)
            if (!minus[j])
                for (int i = 0; i < d; ++i)
                    if (!minus[i]) b(i, j) = r(i, j);
        b /= (1.0 - p_minus);
        out.plus_branch = DensityOp(rho.basis(), std::move(b));
    }
    return out;
}

namespace {

/// Unitary from disjoint rotor-sublevel swaps, identity elsewhere.
LinOp swap_unitary(const BasisPtr& basis, const std::vector<std::pair<int, int>>& rotor_pairs) {
    const int d = basis->dim();
    std::vector<bool> touched(d, false);
    std::vector<Triplet> entries;
    for (auto [ra, rb] : rotor_pairs)
        for (int mi = 0; mi < basis->mode_dim(); ++mi) {
            const int ia = basis->index_parts(ra, mi);
            const int ib = basis->index_parts(rb, mi);
            entries.emplace_back(ia, ib, 1.0);
            entries.emplace_back(ib, ia, 1.0);
            touched[ia] = touched[ib] = true;
        }
    for (int i = 0; i < d; ++i)
        if (!touched[i]) entries.emplace_back(i, i, 1.0);
    return LinOp::from_triplets(basis, entries);
}

}  // namespace

LinOp correct_J_ideal(const BasisPtr& basis, int J_C, int dJ) {
    if (dJ != 1 && dJ != -1) throw std::invalid_argument("correct_J_ideal: dJ must be +-1");
    const int Jp = J_C + dJ;
    if (Jp < 0 || Jp > basis->j_max() || J_C > basis->j_max())
        throw std::out_of_range("correct_J_ideal: manifold outside truncation");
    std::vector<std::pair<int, int>> pairs;
    const int m_top = std::min(J_C, Jp);
    for (int m = -m_top; m <= m_top; ++m)
        pairs.emplace_back(basis->rotor_index(Jp, m), basis->rotor_index(J_C, m));
    return swap_unitary(basis, pairs);
}

LinOp correct_m_ideal(const BasisPtr& basis, const CodeSpec& code, int dm) {
    if (dm != 1 && dm != -1) throw std::invalid_argument("correct_m_ideal: dm must be +-1");
    std::vector<std::pair<int, int>> pairs;
    for (int mc : code.support()) {
        if (std::abs(mc + dm) > code.J_C) continue;
        pairs.emplace_back(basis->rotor_index(code.J_C, mc + dm),
                           basis->rotor_index(code.J_C, mc));
    }
    return swap_unitary(basis, pairs);
}

RefreshAngles refresh_angles(const CodeSpec& code, int dJ, int dm) {
    if (code.kind != CodeKind::CS)
        throw std::invalid_argument("refresh_angles: amplitude refreshment exists only for CS codes");
    if (std::abs(dJ) != 1 || std::abs(dm) > 1)
        throw std::invalid_argument("refresh_angles: |dJ| = 1 and |dm| <= 1 required");
    const double a = error_amplitude(code.J_C, dJ, -code.m1, dm);
    const double b = error_amplitude(code.J_C, dJ, code.m2, dm);
    const double c = error_amplitude(code.J_C, dJ, -code.m2, dm);
    const double d = error_amplitude(code.J_C, dJ, code.m1, dm);
    const double root = std::sqrt(static_cast<double>(code.m1) * code.m2);
    RefreshAngles out;
    out.dJ = dJ;
    out.dm = dm;
    // Rotation restoring the (-m1, m2) pair amplitudes to sqrt(m2):sqrt(m1).
    out.theta1 = 2.0 * std::atan2(root * (a - b), a * code.m2 + b * code.m1);
    // Same for the (m1, -m2) pair; the sign convention follows the generator
    // orientation in refresh_unitary.
    out.theta2 = 2.0 * std::atan2(root * (d - c), d * code.m2 + c * code.m1);
    return out;
}

namespace {

/// Real rotation by theta/2 from rotor sublevel p toward q, identity
/// elsewhere: exp(-i theta R / 2) with R = i|q><p| - i|p><q|.
LinOp pair_rotation(const BasisPtr& basis, int J, int m_p, int m_q, double theta) {
    const double cth = std::cos(0.5 * theta);
    const double sth = std::sin(0.5 * theta);
    const int rp = basis->rotor_index(J, m_p);
    const int rq = basis->rotor_index(J, m_q);
    const int d = basis->dim();
    std::vector<bool> touched(d, false);
    std::vector<Triplet> entries;
    for (int mi = 0; mi < basis->mode_dim(); ++mi) {
        const int ip = basis->index_parts(rp, mi);
        const int iq = basis->index_parts(rq, mi);
        entries.emplace_back(ip, ip, cth);
        entries.emplace_back(iq, iq, cth);
        entries.emplace_back(ip, iq, -sth);
        entries.emplace_back(iq, ip, sth);
        touched[ip] = touched[iq] = true;
    }
    for (int i = 0; i < d; ++i)
        if (!touched[i]) entries.emplace_back(i, i, 1.0);
    return LinOp::from_triplets(basis, entries);
}

}  // namespace

LinOp refresh_unitary(const CodeSpec& code, const RefreshAngles& angles) {
    if (code.kind != CodeKind::CS)
        throw std::invalid_argument("refresh_unitary: CS codes only");
    // Pair 1: rotate (-m1 -> m2); pair 2: rotate (m1 -> -m2). With the
    // angles from refresh_angles this exactly undoes the Q-matrix amplitude
    // distortion of the corresponding error.
    LinOp u1 = pair_rotation(code.basis, code.J_C, -code.m1, code.m2, angles.theta1);
    LinOp u2 = pair_rotation(code.basis, code.J_C, code.m1, -code.m2, angles.theta2);
    return u1 * u2;
}

double bsb_weight(int J_C, int dJ, int m) {
    const int Jp = J_C + dJ;
    if (Jp < 0 || std::abs(m) > J_C || std::abs(m) > Jp) return 0.0;
    return std::sqrt(4.0 * M_PI / 3.0) *
           slater(HalfInt(Jp), HalfInt(J_C), HalfInt(m), HalfInt(1), HalfInt(0));
}

namespace {

/// H(phase) = sum_m rabi w(m) e^{i phase} T(J_C+dJ, m, -dJ, 0) (x) a^dag + h.c.
LinOp bsb_hamiltonian(const BasisPtr& basis, int J_C, int dJ, double rabi, int mode,
                      double phase) {
    const int Jp = J_C + dJ;
    const cxd ph = std::exp(cxd(0.0, phase));
    LinOp h = LinOp::zero(basis);
    for (int m = -std::min(J_C, Jp); m <= std::min(J_C, Jp); ++m) {
        const double w = bsb_weight(J_C, dJ, m);
        if (w == 0.0) continue;
        h += interaction(basis, Jp, m, -dJ, 0, rabi * w * ph, ModeAction::bsb(mode));
    }
    return h;
}

/// Populations (by |m|-resolved sublevel) of the code's word0 after a dm = 0
/// Slater-weighted jump; the optimal single-pulse time targets this state.
std::vector<std::pair<int, double>> distorted_populations(const CodeSpec& code, int dJ) {
    std::vector<std::pair<int, double>> pops;
    double norm = 0.0;
    for (int r = 0; r < code.basis->rotor_dim(); ++r) {
        const cxd amp = code.word0[code.basis->index_parts(r, 0)];
        if (std::abs(amp) < 1e-14) continue;
        const auto lab = code.basis->label(r * code.basis->mode_dim());
        const double w = error_amplitude(code.J_C, dJ, lab.m, 0);
        const double p = std::norm(amp) * w * w;
        pops.emplace_back(lab.m, p);
        norm += p;
    }
    for (auto& [m, p] : pops) p /= norm;
    return pops;
}

double optimal_transfer_time(const CodeSpec& code, int dJ, double rabi) {
    const auto pops = distorted_populations(code, dJ);
    auto transfer = [&](double t) {
        double p = 0.0;
        for (auto [m, q] : pops) {
            const double s = std::sin(std::abs(bsb_weight(code.J_C, dJ, m)) * rabi * t);
            p += q * s * s;
        }
        return p;
    };
    // Scan one Rabi period of the weakest coupling, then refine.
    double wmin = 1e300, wmax = 0.0;
    for (auto [m, q] : pops) {
        const double w = std::abs(bsb_weight(code.J_C, dJ, m));
        wmin = std::min(wmin, w);
        wmax = std::max(wmax, w);
    }
    const double t_hi = M_PI / (rabi * wmin);
    double best_t = 0.0, best_p = -1.0;
    const int n = 400;
    for (int i = 1; i <= n; ++i) {
        const double t = t_hi * i / n;
        const double p = transfer(t);
        if (p > best_p) { best_p = p; best_t = t; }
    }
    double lo = best_t - t_hi / n, hi = best_t + t_hi / n;
    for (int it = 0; it < 60; ++it) {  // golden-section refine
        const double m1 = lo + 0.381966 * (hi - lo);
        const double m2 = hi - 0.381966 * (hi - lo);
        if (transfer(m1) < transfer(m2)) lo = m1; else hi = m2;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PulseSequence bsb_correction_J(const BasisPtr& basis, const CodeSpec& code, int dJ,
                               double rabi, int mode, PulseScheme scheme) {
    if (std::abs(dJ) != 1) throw std::invalid_argument("bsb_correction_J: dJ must be +-1");
    PulseSequence seq;
    if (scheme == PulseScheme::SinglePi) {
        const double t_opt = optimal_transfer_time(code, dJ, rabi);
        seq.push_back({bsb_hamiltonian(basis, code.J_C, dJ, rabi, mode, 0.0), t_opt,
                       "bsb_j" + std::to_string(dJ) + "_pi"});
        return seq;
    }
    // SCROFULOUS pi: three nominal pi rotations at phases 60, 300, 60 deg,
    // timed for the mean coupling across the code support sublevels.
    double wbar = 0.0;
    for (int mc : code.support()) wbar += std::abs(bsb_weight(code.J_C, dJ, mc));
    wbar /= static_cast<double>(code.support().size());
    const double t_pi = M_PI / (2.0 * rabi * wbar);
    const double deg = M_PI / 180.0;
    const double phases[3] = {60.0 * deg, 300.0 * deg, 60.0 * deg};
    for (int k = 0; k < 3; ++k)
        seq.push_back({bsb_hamiltonian(basis, code.J_C, dJ, rabi, mode, phases[k]), t_pi,
                       "bsb_j" + std::to_string(dJ) + "_scrofulous" + std::to_string(k)});
    return seq;
}

PulseSequence raman_correction_m(const BasisPtr& basis, const CodeSpec& code, int dm,
                                 double rabi, int mode) {
    if (std::abs(dm) != 1) throw std::invalid_argument("raman_correction_m: dm must be +-1");
    PulseSequence seq;
    for (int mc : code.support()) {
        if (std::abs(mc + dm) > code.J_C) continue;
        // H_BSB(J_C, mc + dm, 0, -dm): |J_C, mc><J_C, mc+dm| (x) a^dag + h.c.
        LinOp h = interaction(basis, code.J_C, mc + dm, 0, -dm, rabi, ModeAction::bsb(mode));
        seq.push_back({std::move(h), M_PI / (2.0 * rabi),
                       "raman_m" + std::to_string(mc + dm) + "_to_" + std::to_string(mc)});
    }
    return seq;
}

LinOp carrier(const BasisPtr& basis, int J_C, int m_i, int dm, double angle) {
    // Rotation generator R = i|m_i+dm><m_i| - i|m_i><m_i+dm| on the carrier
    // transition; returns exp(-i angle R / 2).
    return pair_rotation(basis, J_C, m_i, m_i + dm, angle);
}

PulseSequence refresh_sequence(const CodeSpec& code, int dJ, int dm, double rabi) {
    if (code.kind != CodeKind::CS)
        throw std::invalid_argument("refresh_sequence: CS codes only");
    const auto angles = refresh_angles(code, dJ, dm);
    const BasisPtr& b = code.basis;
    PulseSequence seq;

    // Generator segment rotating sublevel p toward q by angle/2; negative
    // angles flip the drive phase (H -> -H) so durations stay positive.
    auto rot_segment = [&](int m_p, int m_q, double angle, const std::string& label) {
        const int rp = b->rotor_index(code.J_C, m_p);
        const int rq = b->rotor_index(code.J_C, m_q);
        const double sgn = angle < 0 ? -1.0 : 1.0;
        std::vector<Triplet> entries;
        for (int mi = 0; mi < b->mode_dim(); ++mi) {
            const int ip = b->index_parts(rp, mi);
            const int iq = b->index_parts(rq, mi);
            entries.emplace_back(iq, ip, cxd(0.0, sgn * rabi));
            entries.emplace_back(ip, iq, cxd(0.0, -sgn * rabi));
        }
        seq.push_back({LinOp::from_triplets(b, entries), std::abs(angle) / (2.0 * rabi), label});
    };

    // Pair 2 block: transfer -m2 up to m1 - 1 in dm = +2 hops, rotate with
    // theta2 on (m1 - 1, m1), undo the transfers.
    std::vector<int> chain2;
    for (int m = -code.m2; m < code.m1 - 1; m += 2) chain2.push_back(m);
    for (int m : chain2) rot_segment(m, m + 2, M_PI, "transfer");
    rot_segment(code.m1 - 1, code.m1, -angles.theta2, "refresh_pair2");
    for (auto it = chain2.rbegin(); it != chain2.rend(); ++it)
        rot_segment(*it, *it + 2, -M_PI, "transfer_inv");

    // Pair 1 block: transfer -m1 up to m2 - 1, rotate with theta1 on
    // (m2 - 1, m2), undo.
    std::vector<int> chain1;
    for (int m = -code.m1; m < code.m2 - 1; m += 2) chain1.push_back(m);
    for (int m : chain1) rot_segment(m, m + 2, M_PI, "transfer");
    rot_segment(code.m2 - 1, code.m2, angles.theta1, "refresh_pair1");
    for (auto it = chain1.rbegin(); it != chain1.rend(); ++it)
        rot_segment(*it, *it + 2, -M_PI, "transfer_inv");

    return seq;
}

// --- run_sequential ---------------------------------------------------------

namespace {

struct Branch {
    double w = 1.0;
    DensityOp rho;
    int dJ_flag = 0;
    int dm_flag = 0;
};

struct PhononSplit {
    double p_flag = 0.0;
    std::optional<DensityOp> no_flag;
    std::optional<DensityOp> flagged;  // mode reset to vacuum
};

PhononSplit measure_phonon(const DensityOp& rho, int mode) {
    const RotorBasis& b = *rho.basis();
    const int d = b.dim();
    std::vector<bool> vac(d);
    for (int i = 0; i < d; ++i) vac[i] = b.label(i).ns[mode] == 0;
    double p0 = 0.0;
    for (int i = 0; i < d; ++i)
        if (vac[i]) p0 += rho.matrix()(i, i).real();
    p0 = std::clamp(p0, 0.0, 1.0);

    PhononSplit out;
    out.p_flag = 1.0 - p0;
    const double eps = 1e-14;
    if (p0 > eps) {
        Eigen::MatrixXcd m0 = Eigen::MatrixXcd::Zero(d, d);
        for (int j = 0; j < d; ++j)
            if (vac[j])
                for (int i = 0; i < d; ++i)
                    if (vac[i]) m0(i, j) = rho.matrix()(i, j);
        m0 /= p0;
        out.no_flag = DensityOp(rho.basis(), std::move(m0));
    }
    if (out.p_flag > eps) {
        Eigen::MatrixXcd m1 = Eigen::MatrixXcd::Zero(d, d);
        for (int j = 0; j < d; ++j)
            if (!vac[j])
                for (int i = 0; i < d; ++i)
                    if (!vac[i]) m1(i, j) = rho.matrix()(i, j);
        m1 /= out.p_flag;
        out.flagged = reset_mode_to_vacuum(DensityOp(rho.basis(), std::move(m1)), mode);
    }
    return out;
}

}  // namespace

SeqResult run_sequential(const SeqParams& params) {
    const BasisPtr basis = make_basis(params.j_max, {params.fock_cutoff});
    SeqResult result;
    result.code = build_code(params.code_kind, params.J_C, params.p1, params.p2, basis);
    const CodeSpec& code = result.code;
    const bool is_cs = code.kind == CodeKind::CS;

    // Noise families.
    const std::vector<LinOp> c_unres = env_family(basis, params.env);
    std::vector<LinOp> c_res;
    for (int J = 1; J <= params.j_max; ++J)
        for (int m = -J; m <= J; ++m)
            for (int dm : {-1, 0, 1})
                for (Process p : {Process::BbrStimulated, Process::BbrAbsorption,
                                  Process::SpontaneousDecay}) {
                    LinOp op = resolved_collapse(basis, J, m, dm, params.env, p);
                    if (op.nnz() > 0) c_res.push_back(std::move(op));
                }

    // Precomputed operations.
    const int mode = 0;
    std::vector<PulseSequence> j_pulses;  // index 0: dJ=+1, 1: dJ=-1
    j_pulses.push_back(bsb_correction_J(basis, code, +1, params.omega_bsb, mode, params.scheme));
    j_pulses.push_back(bsb_correction_J(basis, code, -1, params.omega_bsb, mode, params.scheme));
    LinOp m_check_plus = check_op_m(basis, code, +1);
    LinOp m_check_minus = check_op_m(basis, code, -1);
    LinOp m_corr_plus = correct_m_ideal(basis, code, +1);
    LinOp m_corr_minus = correct_m_ideal(basis, code, -1);
    std::map<std::pair<int, int>, LinOp> refreshers;
    if (is_cs)
        for (int dJ : {-1, 1})
            for (int dm : {-1, 0, 1})
                refreshers.emplace(std::make_pair(dJ, dm),
                                   refresh_unitary(code, refresh_angles(code, dJ, dm)));

    const double t_pi = M_PI / (2.0 * params.omega_bsb);
    const int n_check_pulses = static_cast<int>(code.support().size());
    const double m_window =
        params.correction_enabled ? (2.0 * n_check_pulses + (is_cs ? 14.0 : 0.0)) * t_pi : 0.0;
    double j_window = 0.0;
    if (params.correction_enabled)
        for (const auto& seq : j_pulses)
            for (const auto& seg : seq) j_window += seg.duration;
    result.round_duration = params.spacing + j_window + m_window;

    // Observables on the recombined state.
    auto [lx, lz] = logical_ops(code);
    auto obs_row = [&](const DensityOp& rho) {
        const double ex = rho.expectation(lx);
        const double ez = rho.expectation(lz);
        double band = 0.0, in_code = 0.0;
        for (int J = std::max(0, code.J_C - 1); J <= std::min(params.j_max, code.J_C + 1); ++J)
            for (int m = -J; m <= J; ++m) {
                double pop = 0.0;
                const int r = basis->rotor_index(J, m);
                for (int mi = 0; mi < basis->mode_dim(); ++mi)
                    pop += rho.matrix()(basis->index_parts(r, mi), basis->index_parts(r, mi)).real();
                band += pop;
                if (J == code.J_C) in_code += pop;
            }
        return std::vector<double>{0.5 * (1 + ez), 0.5 * (1 - ez), 0.5 * (1 + ex),
                                   0.5 * (1 - ex), in_code, band, rho.trace()};
    };
    result.series.columns = {"F0", "F1", "Fplus", "Fminus", "p_JC", "p_band", "trace"};

    // Initial state.
    Eigen::VectorXcd psi = params.initial == SeqParams::InitialState::Word0
                               ? code.word0
                               : Eigen::VectorXcd((code.word0 + code.word1) / std::sqrt(2.0));
    DensityOp rho = DensityOp::pure(basis, psi);

    std::mt19937_64 rng(params.seed);
    const bool trajectory = params.measurement == SeqParams::Measurement::Trajectory;
    auto pick = [&](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };

    double t = 0.0;
    result.series.append(t, obs_row(rho));
    auto evolve_noise = [&](DensityOp state, const std::vector<LinOp>& noise, double dt) {
        if (dt <= 0) return state;
        return evolve(std::nullopt, noise, state, 0.0, dt, {dt}, {}, params.solver).final_state;
    };
    const std::vector<LinOp> c_none;
    auto evolve_seg = [&](DensityOp state, const PulseSegment& seg) {
        const auto& noise = params.noise_during_pulses ? c_unres : c_none;
        return evolve(seg.hamiltonian, noise, state, 0.0, seg.duration, {seg.duration}, {},
                      params.solver).final_state;
    };

    const double prune = 1e-12;
    while (t < params.t_final - 1e-12) {
        // Free evolution.
        rho = evolve_noise(std::move(rho), c_unres, params.spacing);

        if (params.correction_enabled) {
            std::vector<Branch> branches{{1.0, rho, 0, 0}};
            // J phase: unconditional BSB pulse + phonon readout, both signs.
            for (int k = 0; k < 2; ++k) {
                const int dJ = (k == 0) ? +1 : -1;
                std::vector<Branch> next;
                for (auto& br : branches) {
                    for (const auto& seg : j_pulses[k]) br.rho = evolve_seg(std::move(br.rho), seg);
                    PhononSplit split = measure_phonon(br.rho, mode);
                    if (trajectory) {
                        const bool flag = pick(split.p_flag);
                        if (flag && split.flagged)
                            next.push_back({br.w, std::move(*split.flagged),
                                            br.dJ_flag == 0 ? dJ : br.dJ_flag, br.dm_flag});
                        else if (split.no_flag)
                            next.push_back({br.w, std::move(*split.no_flag), br.dJ_flag, br.dm_flag});
                    } else {
                        if (split.no_flag && br.w * (1 - split.p_flag) > prune)
                            next.push_back({br.w * (1 - split.p_flag), std::move(*split.no_flag),
                                            br.dJ_flag, br.dm_flag});
                        if (split.flagged && br.w * split.p_flag > prune)
                            next.push_back({br.w * split.p_flag, std::move(*split.flagged),
                                            br.dJ_flag == 0 ? dJ : br.dJ_flag, br.dm_flag});
                    }
                }
                branches = std::move(next);
            }
            // Merge equal flags.
            {
                std::vector<Branch> merged;
                for (auto& br : branches) {
                    bool found = false;
                    for (auto& mg : merged)
                        if (mg.dJ_flag == br.dJ_flag) {
                            mg.rho.matrix() = (mg.w * mg.rho.matrix() + br.w * br.rho.matrix()) /
                                              (mg.w + br.w);
                            mg.w += br.w;
                            found = true;
                            break;
                        }
                    if (!found) merged.push_back(std::move(br));
                }
                branches = std::move(merged);
            }

            // m phase: flagged branches run resolved checks/corrections and
            // refreshment; unflagged branches wait under unresolved noise.
            std::vector<Branch> done;
            for (auto& br : branches) {
                if (br.dJ_flag == 0) {
                    br.rho = evolve_noise(std::move(br.rho), c_unres, m_window);
                    done.push_back(std::move(br));
                    continue;
                }
                std::vector<Branch> subs{std::move(br)};
                for (int dm : {+1, -1}) {
                    const LinOp& chk = dm > 0 ? m_check_plus : m_check_minus;
                    const LinOp& cor = dm > 0 ? m_corr_plus : m_corr_minus;
                    std::vector<Branch> next;
                    for (auto& sb : subs) {
                        sb.rho = evolve_noise(std::move(sb.rho), c_res, n_check_pulses * t_pi);
                        MeasureResult mr = measure(sb.rho, chk);
                        if (trajectory) {
                            const bool fire = pick(mr.prob_minus);
                            if (fire && mr.minus_branch)
                                next.push_back({sb.w, apply_unitary(*mr.minus_branch, cor),
                                                sb.dJ_flag, sb.dm_flag == 0 ? dm : sb.dm_flag});
                            else if (mr.plus_branch)
                                next.push_back({sb.w, std::move(*mr.plus_branch), sb.dJ_flag,
                                                sb.dm_flag});
                        } else {
                            if (mr.plus_branch && sb.w * (1 - mr.prob_minus) > prune)
                                next.push_back({sb.w * (1 - mr.prob_minus),
                                                std::move(*mr.plus_branch), sb.dJ_flag, sb.dm_flag});
                            if (mr.minus_branch && sb.w * mr.prob_minus > prune)
                                next.push_back({sb.w * mr.prob_minus,
                                                apply_unitary(*mr.minus_branch, cor), sb.dJ_flag,
                                                sb.dm_flag == 0 ? dm : sb.dm_flag});
                        }
                    }
                    subs = std::move(next);
                }
                if (is_cs)
                    for (auto& sb : subs) {
                        sb.rho = evolve_noise(std::move(sb.rho), c_res, 14.0 * t_pi);
                        sb.rho = apply_unitary(sb.rho, refreshers.at({sb.dJ_flag, sb.dm_flag}));
                    }
                for (auto& sb : subs) done.push_back(std::move(sb));
            }

            // Recombine.
            double wsum = 0.0;
            for (const auto& b : done) wsum += b.w;
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
            for (const auto& b : done) acc += (b.w / wsum) * b.rho.matrix();
            rho = DensityOp(basis, std::move(acc));
        }

        t += result.round_duration;
        ++result.rounds;
        result.series.append(t, obs_row(rho));
        const double band = result.series.rows.back()[5];
        result.max_leakage = std::max(result.max_leakage, 1.0 - band);
        if (t >= params.t_final - 1e-12) break;
    }

    result.final_state = std::move(rho);
    return result;
}

}  // namespace rotorqec
