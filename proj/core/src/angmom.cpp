#include "rotorqec/angmom.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace rotorqec {
namespace {

// Exact-start factorial table in extended precision. Entries above 20! are
// no longer exactly representable but keep ~1e-19 relative error, which
// leaves the Racah sum accurate to better than 1e-12 up to j ~ 20.
constexpr int kMaxFact = 256;

const long double* factorials() {
    static const auto table = [] {
        std::array<long double, kMaxFact> f{};
        f[0] = 1.0L;
        for (int n = 1; n < kMaxFact; ++n) f[n] = f[n - 1] * static_cast<long double>(n);
        return f;
    }();
    return table.data();
}

long double fact(int n) { return factorials()[n]; }

int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

void check_ladder(HalfInt j, HalfInt m, const char* who) {
    if (j.twice() < 0)
        throw std::invalid_argument(std::string(who) + ": negative angular momentum j = " + j.str());
    if (!m_in_ladder(j, m))
        throw std::invalid_argument(std::string(who) + ": m = " + m.str() +
                                    " is not in the ladder of j = " + j.str());
}

}  // namespace

double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3,
                HalfInt m1, HalfInt m2, HalfInt m3) {
    check_ladder(j1, m1, "wigner3j");
    check_ladder(j2, m2, "wigner3j");
    check_ladder(j3, m3, "wigner3j");

    if ((m1 + m2 + m3).twice() != 0) return 0.0;
    // Triangle rule, and j1+j2+j3 must be an integer.
    if ((j1.twice() + j2.twice() + j3.twice()) % 2 != 0) return 0.0;
    const int t1 = (j1.twice() + j2.twice() - j3.twice()) / 2;
    const int t2 = (j1.twice() - j2.twice() + j3.twice()) / 2;
    const int t3 = (-j1.twice() + j2.twice() + j3.twice()) / 2;
    if (t1 < 0 || t2 < 0 || t3 < 0) return 0.0;

    // All of the following are non-negative integers once the checks above pass.
    const int j1m1 = (j1.twice() + m1.twice()) / 2, j1mm1 = (j1.twice() - m1.twice()) / 2;
    const int j2m2 = (j2.twice() + m2.twice()) / 2, j2mm2 = (j2.twice() - m2.twice()) / 2;
    const int j3m3 = (j3.twice() + m3.twice()) / 2, j3mm3 = (j3.twice() - m3.twice()) / 2;
    const int jtot1 = (j1.twice() + j2.twice() + j3.twice()) / 2 + 1;

    const long double delta =
        fact(t1) * fact(t2) * fact(t3) / fact(jtot1);
    const long double pre =
        sqrtl(delta * fact(j1m1) * fact(j1mm1) * fact(j2m2) * fact(j2mm2) *
              fact(j3m3) * fact(j3mm3));

    // Racah sum over k with all six factorial arguments non-negative.
    const int a1 = (j3.twice() - j2.twice() + m1.twice()) / 2;  // j3 - j2 + m1
    const int a2 = (j3.twice() - j1.twice() - m2.twice()) / 2;  // j3 - j1 - m2
    const int kmin = std::max({0, -a1, -a2});
    const int kmax = std::min({t1, j1mm1, j2m2});
    if (kmin > kmax) return 0.0;

    long double sum = 0.0L;
    for (int k = kmin; k <= kmax; ++k) {
        const long double den = fact(k) * fact(t1 - k) * fact(j1mm1 - k) *
                                fact(j2m2 - k) * fact(a1 + k) * fact(a2 + k);
        sum += static_cast<long double>(parity_sign(k)) / den;
    }

    // Phase (-1)^(j1 - j2 - m3); the exponent is an integer whenever the
    // selection rules hold.
    const int phase_exp = (j1.twice() - j2.twice() - m3.twice()) / 2;
    return static_cast<double>(parity_sign(std::abs(phase_exp)) * pre * sum);
}

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt j3, HalfInt m3) {
    const double w = wigner3j(j1, j2, j3, m1, m2, -m3);
    if (w == 0.0) return 0.0;
    const int phase_exp = (j1.twice() - j2.twice() + m3.twice()) / 2;
    return parity_sign(std::abs(phase_exp)) * std::sqrt(j3.twice() + 1.0) * w;
}

double slater(HalfInt j1, HalfInt j3, HalfInt m3, HalfInt j2, HalfInt m2) {
    if (!j1.is_integer() || !j2.is_integer() || !j3.is_integer() ||
        !m3.is_integer() || !m2.is_integer())
        throw std::invalid_argument("slater: all momenta must be integers");
    const HalfInt m1 = m3 - m2;
    if (!m_in_ladder(j1, m1)) return 0.0;

    const double w_m = wigner3j(j3, j2, j1, -m3, m2, m1);
    if (w_m == 0.0) return 0.0;
    const double w_0 = wigner3j(j3, j2, j1, HalfInt(0), HalfInt(0), HalfInt(0));
    const double pre = std::sqrt((j1.twice() + 1.0) * (j2.twice() + 1.0) *
                                 (j3.twice() + 1.0) / (4.0 * M_PI));
    return parity_sign(std::abs(m3.as_int())) * pre * w_m * w_0;
}

}  // namespace rotorqec
