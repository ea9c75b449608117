#pragma once

#include <functional>
#include <map>
#include <utility>

#include "rotorqec/lin_op.hpp"

namespace rotorqec {

/// Engineered nonlinear m-sublevel shifts delta_omega_{J,m}. The paper gives
/// no functional form for an AC-Stark-induced shift; the quadratic kappa*m^2
/// model here is a configurable placeholder, all-zero by default.
struct NonlinearShifts {
    enum class Model { Zero, QuadraticM, Table };
    Model model = Model::Zero;
    double kappa = 0.0;                          // QuadraticM: shift = kappa * m^2
    std::map<std::pair<int, int>, double> table; // Table: explicit (J, m) -> shift

    double value(int J, int m) const;
};

/// Linear-rotor parameters in hbar = 1 units. Rates are expressed in units
/// of the codespace linewidth Gamma_C throughout the simulation layer.
struct RotorParams {
    double rotational_constant = 1.0;  // B_R
    double g_factor = 0.0;
    double b_field = 0.0;
    double nuclear_magneton = 1.0;
    NonlinearShifts shifts;

    double zeeman_rate() const { return g_factor * nuclear_magneton * b_field; }
    /// omega_J = B_R J (J + 1)
    double omega_j(int J) const { return rotational_constant * J * (J + 1.0); }
    double omega_jm(int J, int m) const { return omega_j(J) + m * zeeman_rate(); }
};

/// Action of a rotational transition on the motional state.
struct ModeAction {
    enum class Kind { Carrier, BlueSideband, RedSideband };
    Kind kind = Kind::Carrier;
    int mode = 0;

    static ModeAction carrier() { return {Kind::Carrier, 0}; }
    static ModeAction bsb(int mode) { return {Kind::BlueSideband, mode}; }
    static ModeAction rsb(int mode) { return {Kind::RedSideband, mode}; }
};

/// Rank-1 rotational ladder operator |J+dJ, m+dm><J, m| (x) identity on the
/// motional factors. Throws std::out_of_range if either state leaves the
/// truncation; callers that want clipped sums must opt in explicitly.
LinOp ladder(const BasisPtr& basis, int J, int m, int dJ, int dm);

/// Diagonal rotor Hamiltonian with eigenvalue omega_J + m*omega_Z on |J,m>.
LinOp h_rot(const BasisPtr& basis, const RotorParams& params);

/// Diagonal nonlinear-shift Hamiltonian delta_omega_{J,m} |J,m><J,m|.
LinOp h_nonlinear(const BasisPtr& basis, const RotorParams& params);

/// Minimum |delta omega| difference of dJ = 0 Raman transitions (dm in
/// {+-1, +-2}) inside the code manifold J_C.
double raman_gap_min(const RotorParams& params, int J_C);

/// Min and max |delta omega| difference of |dJ| = 1 direct transitions
/// (dm in {0, +-1}) that couple to the code manifold.
std::pair<double, double> direct_gap_minmax(const RotorParams& params, int J_C);

/// Resolved interaction Hamiltonian rabi * T(J,m,dJ,dm) (x) M + h.c. where
/// M is the carrier/sideband action. Hermitian by construction.
LinOp interaction(const BasisPtr& basis, int J, int m, int dJ, int dm,
                  cxd rabi, const ModeAction& action);

/// Unresolved interaction: sum over m of the resolved Hamiltonians, with an
/// optional m-dependent weight (e.g. Slater couplings). Terms whose target
/// leaves the truncation are skipped, matching the physical edge sublevels.
LinOp unresolved_interaction(const BasisPtr& basis, int J, int dJ, int dm,
                             cxd rabi, const ModeAction& action,
                             const std::function<double(int)>& weight = {});

}  // namespace rotorqec
