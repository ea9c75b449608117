#pragma once

#include "rotorqec/half_int.hpp"

namespace rotorqec {

/// Wigner 3-j symbol (j1 j2 j3; m1 m2 m3), Condon-Shortley convention.
/// Returns 0 when a selection rule (m1+m2+m3 != 0, triangle, parity) fails.
/// Throws std::invalid_argument when an (j, m) pair is not a valid ladder
/// member, i.e. |m| > j or j - m not an integer.
double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3,
                HalfInt m1, HalfInt m2, HalfInt m3);

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | j3 m3>.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt j3, HalfInt m3);

/// Slater integral c^{J1}(J3, m3, J2, m2): the overlap of three spherical
/// harmonics Int Y*_{J3 m3} Y_{J2 m2} Y_{J1 m1} dOmega with m1 = m3 - m2.
/// All momenta must be integers (linear-rotor couplings only).
double slater(HalfInt j1, HalfInt j3, HalfInt m3, HalfInt j2, HalfInt m2);

}  // namespace rotorqec
