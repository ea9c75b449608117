#include "oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {

double lnfact(double n) { return std::lgamma(n + 1.0); }

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

/// Associated Legendre P_l^m(x) for m >= 0 with the standard recurrence.
double assoc_legendre(int l, int m, double x) {
    double pmm = 1.0;
    if (m > 0) {
        const double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
        double fact = 1.0;
        for (int i = 1; i <= m; ++i) {
            pmm *= -fact * somx2;  // Condon-Shortley (-1)^m inside
            fact += 2.0;
        }
    }
    if (l == m) return pmm;
    double pmmp1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

}  // namespace

double wigner3j_racah(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
    if (tm1 + tm2 + tm3 != 0) return 0.0;
    if ((tj1 + tj2 + tj3) % 2 != 0) return 0.0;
    const int t1 = (tj1 + tj2 - tj3) / 2;
    const int t2 = (tj1 - tj2 + tj3) / 2;
    const int t3 = (-tj1 + tj2 + tj3) / 2;
    if (t1 < 0 || t2 < 0 || t3 < 0) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
    if ((tj1 - tm1) % 2 || (tj2 - tm2) % 2 || (tj3 - tm3) % 2) return 0.0;

    const double j1m1 = (tj1 + tm1) / 2.0, j1mm1 = (tj1 - tm1) / 2.0;
    const double j2m2 = (tj2 + tm2) / 2.0, j2mm2 = (tj2 - tm2) / 2.0;
    const double j3m3 = (tj3 + tm3) / 2.0, j3mm3 = (tj3 - tm3) / 2.0;

    const double lnpre = 0.5 * (lnfact(t1) + lnfact(t2) + lnfact(t3) -
                                lnfact((tj1 + tj2 + tj3) / 2.0 + 1.0) + lnfact(j1m1) +
                                lnfact(j1mm1) + lnfact(j2m2) + lnfact(j2mm2) + lnfact(j3m3) +
                                lnfact(j3mm3));

    const int a1 = (tj3 - tj2 + tm1) / 2;
    const int a2 = (tj3 - tj1 - tm2) / 2;
    const int kmin = std::max({0, -a1, -a2});
    const int kmax = std::min({t1, static_cast<int>(j1mm1), static_cast<int>(j2m2)});

    double sum = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
        const double lnden = lnfact(k) + lnfact(t1 - k) + lnfact(j1mm1 - k) +
                             lnfact(j2m2 - k) + lnfact(a1 + k) + lnfact(a2 + k);
        sum += ((k % 2) ? -1.0 : 1.0) * std::exp(lnpre - lnden);
    }
    const int phase = std::abs((tj1 - tj2 - tm3) / 2);
    return ((phase % 2) ? -1.0 : 1.0) * sum;
}

std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
    const int am = std::abs(m);
    if (am > l) throw std::invalid_argument("spherical_harmonic: |m| > l");
    const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI) *
                                  std::exp(lnfact(l - am) - lnfact(l + am)));
    const double p = assoc_legendre(l, am, std::cos(theta));
    std::complex<double> y = norm * p * std::exp(std::complex<double>(0.0, am * phi));
    if (m < 0) y = ((am % 2) ? -1.0 : 1.0) * std::conj(y);
    return y;
}

double slater_quadrature(int j1, int j3, int m3, int j2, int m2) {
    const int m1 = m3 - m2;
    if (std::abs(m1) > j1) return 0.0;
    const int n_theta = 64;
    const int n_phi = 128;
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = std::acos(x[i]);
        std::complex<double> phi_acc = 0.0;
        for (int k = 0; k < n_phi; ++k) {
            const double phi = 2.0 * M_PI * k / n_phi;
            phi_acc += std::conj(spherical_harmonic(j3, m3, theta, phi)) *
                       spherical_harmonic(j2, m2, theta, phi) *
                       spherical_harmonic(j1, m1, theta, phi);
        }
        acc += w[i] * phi_acc * (2.0 * M_PI / n_phi);
    }
    if (std::abs(acc.imag()) > 1e-10)
        throw std::runtime_error("slater_quadrature: integral unexpectedly complex");
    return acc.real();
}

}  // namespace oracle
