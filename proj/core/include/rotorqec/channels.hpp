#pragma once

#include <vector>

#include "rotorqec/lin_op.hpp"

namespace rotorqec {

/// Environment coupling parameters. GenericFlat is the paper's simulation
/// model: gamma_J^BBR = gamma_flat for every J and no spontaneous decay, so
/// gamma_flat = Gamma_C fixes the timescale. Physical mode evaluates the
/// dipole/BBR closed forms in SI units.
struct EnvParams {
    enum class Mode { GenericFlat, Physical };
    Mode mode = Mode::GenericFlat;
    double gamma_flat = 1.0;

    // Physical mode inputs (SI): dipole moment [C m], rotational constant [J],
    // environment temperature [K].
    double dipole = 0.0;
    double rotational_constant = 0.0;
    double temperature = 0.0;
};

namespace si {
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double epsilon0 = 8.8541878128e-12; // F / m
inline constexpr double c_light = 2.99792458e8;      // m / s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
inline constexpr double debye = 3.33564e-30;         // C m
}  // namespace si

/// m-independent spontaneous-decay prefactor gamma_J^SD = 8 d^2 B_R^3 J^3/(3 pi eps0 hbar^4 c^3).
/// Zero for J = 0 (nothing below) and in generic-flat mode.
double gamma_sd(int J, const EnvParams& env);

/// m-independent BBR prefactor: gamma_flat in generic mode, Planck-weighted
/// SD rate gamma_J^SD/(e^{2 B_R J / k_B T} - 1) in physical mode.
double gamma_bbr(int J, const EnvParams& env);

enum class Process { BbrStimulated, BbrAbsorption, SpontaneousDecay };

/// Rate Gamma(J, m, dm) = gamma_J * (4 pi / 3) * |c^J(J-1, m+dm, 1, dm)|^2 for
/// the |J,m> <-> |J-1,m+dm> line. Zero if the Slater selection rules fail.
double transition_rate(int J, int m, int dm, const EnvParams& env, Process process);

/// Single directed collapse operator for one resolved line. Stimulated
/// emission / SD run J -> J-1; absorption runs J-1 -> J. The paper writes the
/// BBR pair as one operator "+ h.c."; the two directions are implemented as
/// separate non-Hermitian collapse operators with identical rates.
LinOp resolved_collapse(const BasisPtr& basis, int J, int m, int dm,
                        const EnvParams& env, Process process);

/// Coherent m-sum of the resolved operators: sqrt(rate)-weighted, preserves
/// superpositions across m.
LinOp unresolved_collapse(const BasisPtr& basis, int J, int dm,
                          const EnvParams& env, Process process);

/// The full environment family C_env for J in [j_lo, j_hi] (defaults
/// [1, j_max]): per J boundary, three stimulated-emission and three
/// absorption operators (dm = -1, 0, +1), plus spontaneous decay when its
/// rate is nonzero. The truncation boundary is an absorbing edge: no
/// absorption out of j_max.
std::vector<LinOp> env_family(const BasisPtr& basis, const EnvParams& env,
                              int j_lo = 1, int j_hi = -1);

/// The recoverable subset C_rec: single absorption or emission events
/// coupling J_C <-> J_C +- 1.
std::vector<LinOp> recoverable_family(const BasisPtr& basis, const EnvParams& env, int J_C);

/// Code-manifold linewidth Gamma_J = [J (gamma_J^SD + gamma_J^BBR) + (J+1) gamma_{J+1}^BBR] / (2J+1).
double code_linewidth(int J_C, const EnvParams& env);

}  // namespace rotorqec
