#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotorqec/channels.hpp"
#include "rotorqec/codes.hpp"
#include "rotorqec/lindblad.hpp"

namespace rotorqec {

/// Diagonal +-1 check operator flagging population in the J_C + dJ manifold.
LinOp check_op_J(const BasisPtr& basis, int J_C, int dJ);

/// Diagonal +-1 check operator flagging |J_C, m_C + dm> for m_C in the code
/// support; applied after the J-correction.
LinOp check_op_m(const BasisPtr& basis, const CodeSpec& code, int dm);

struct MeasureResult {
    double prob_minus = 0.0;
    std::optional<DensityOp> plus_branch;   // normalized; absent if probability ~ 0
    std::optional<DensityOp> minus_branch;
};

/// Ideal projective measurement of a diagonal +-1 check operator.
MeasureResult measure(const DensityOp& rho, const LinOp& check);

/// Equal-coupling correction sum_m |J_C, m><J_C+dJ, m| + h.c., identity on
/// everything untouched (edge sublevels |m| > J_C excluded). Unitary.
LinOp correct_J_ideal(const BasisPtr& basis, int J_C, int dJ);

/// Equal-coupling Zeeman correction: swaps |J_C, m_C + dm> <-> |J_C, m_C>
/// for every support sublevel m_C; identity elsewhere. The support pairs are
/// disjoint (distance >= 3), so the completed operator is unitary.
LinOp correct_m_ideal(const BasisPtr& basis, const CodeSpec& code, int dm);

struct RefreshAngles {
    int dJ = 0, dm = 0;
    double theta1 = 0.0, theta2 = 0.0;
};

/// Amplitude-refreshment rotation angles for a corrected (dJ, dm) error on a
/// CS code. theta1 acts on the (-m1, m2) pair, theta2 on the (m1, -m2) pair.
RefreshAngles refresh_angles(const CodeSpec& code, int dJ, int dm);

/// The restoring unitary: rotations by theta1/2 and theta2/2 on the two
/// codeword pairs. refresh_unitary(refresh_angles(code, dJ, dm)) applied to
/// the corrected post-error state restores both codewords exactly.
LinOp refresh_unitary(const CodeSpec& code, const RefreshAngles& angles);

struct PulseSegment {
    LinOp hamiltonian;
    double duration = 0.0;
    std::string label;
};
using PulseSequence = std::vector<PulseSegment>;

enum class PulseScheme { SinglePi, Scrofulous };

/// Slater-weighted BSB coupling for the J_C + dJ -> J_C repump line:
/// sqrt(4 pi / 3) c^{J_C+dJ}(J_C, m, 1, 0).
double bsb_weight(int J_C, int dJ, int m);

/// Unresolved blue-sideband transfer pulses bringing J_C + dJ population
/// back to J_C while flagging the shared motional mode. The single-pi pulse
/// time maximizes the flagged-transfer probability of the Slater-distorted
/// code error state; SCROFULOUS wraps the transfer in the three-pulse
/// composite robust to the residual coupling spread.
PulseSequence bsb_correction_J(const BasisPtr& basis, const CodeSpec& code, int dJ,
                               double rabi, int mode, PulseScheme scheme);

/// Resolved sideband pi-pulses mapping |J_C, m_C + dm> -> |J_C, m_C> with a
/// phonon flag, one per support sublevel.
PulseSequence raman_correction_m(const BasisPtr& basis, const CodeSpec& code, int dm,
                                 double rabi, int mode);

/// Carrier rotation exp(-i H t) generator segment between |J_C, m_i> and
/// |J_C, m_i + dm| with rotation angle `angle` (pi transfers use angle pi).
LinOp carrier(const BasisPtr& basis, int J_C, int m_i, int dm, double angle);

/// The 14-operation refreshment decomposition: for each codeword pair, a
/// delta-m = 2 carrier transfer chain, one delta-m = 1 refresh rotation, and
/// the inverse chain. Net action equals refresh_unitary on the full space.
PulseSequence refresh_sequence(const CodeSpec& code, int dJ, int dm, double rabi);

struct SeqParams {
    CodeKind code_kind = CodeKind::CS;
    int J_C = 7;
    int p1 = 2, p2 = 5;
    int j_max = 10;
    int fock_cutoff = 3;  // shared readout mode
    double omega_bsb = 500.0;
    double spacing = 0.05;
    double t_final = 2.0;
    PulseScheme scheme = PulseScheme::SinglePi;
    bool correction_enabled = true;
    bool noise_during_pulses = true;  // BBR stays on while driving
    EnvParams env;
    SolverOptions solver;
    enum class Measurement { Ensemble, Trajectory };
    Measurement measurement = Measurement::Ensemble;
    std::uint64_t seed = 0;
    enum class InitialState { Word0, Plus };
    InitialState initial = InitialState::Word0;
};

struct SeqResult {
    TimeSeries series;
    CodeSpec code;
    DensityOp final_state;
    long rounds = 0;
    double round_duration = 0.0;
    double max_leakage = 0.0;  // max over samples of population outside J_C-1..J_C+1
};

/// Repeated-round quantum-memory simulation: free evolution under unresolved
/// BBR, BSB J-check/correction pulses with noise on, and the conditional
/// m-resolved correction + refreshment window under resolved noise.
SeqResult run_sequential(const SeqParams& params);

}  // namespace rotorqec
