#include "rotorqec/rotor_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rotorqec {

RotorBasis::RotorBasis(int j_max, std::vector<int> fock_cutoffs)
    : j_max_(j_max), fock_cutoffs_(std::move(fock_cutoffs)) {
    if (j_max_ < 0) throw std::invalid_argument("RotorBasis: j_max must be >= 0");
    for (int c : fock_cutoffs_)
        if (c < 0) throw std::invalid_argument("RotorBasis: fock cutoffs must be >= 0");
    rotor_dim_ = (j_max_ + 1) * (j_max_ + 1);
    mode_dim_ = 1;
    strides_.assign(fock_cutoffs_.size(), 1);
    for (int k = static_cast<int>(fock_cutoffs_.size()) - 1; k >= 0; --k) {
        strides_[k] = mode_dim_;
        mode_dim_ *= fock_cutoffs_[k] + 1;
    }
}

int RotorBasis::rotor_index(int J, int m) const {
    if (!contains(J, m))
        throw std::out_of_range("RotorBasis: state |" + std::to_string(J) + "," +
                                std::to_string(m) + "> outside truncation j_max = " +
                                std::to_string(j_max_));
    return J * J + J + m;
}

int RotorBasis::mode_index(const std::vector<int>& ns) const {
    if (static_cast<int>(ns.size()) != n_modes())
        throw std::invalid_argument("RotorBasis: expected " + std::to_string(n_modes()) +
                                    " mode occupations, got " + std::to_string(ns.size()));
    int idx = 0;
    for (int k = 0; k < n_modes(); ++k) {
        if (ns[k] < 0 || ns[k] > fock_cutoffs_[k])
            throw std::out_of_range("RotorBasis: occupation n_" + std::to_string(k) + " = " +
                                    std::to_string(ns[k]) + " outside cutoff");
        idx += ns[k] * strides_[k];
    }
    return idx;
}

int RotorBasis::index(int J, int m, const std::vector<int>& ns) const {
    const int mi = ns.empty() && n_modes() > 0 ? 0 : mode_index(ns.empty() ? std::vector<int>(n_modes(), 0) : ns);
    return index_parts(rotor_index(J, m), mi);
}

RotorBasis::Label RotorBasis::label(int idx) const {
    if (idx < 0 || idx >= dim()) throw std::out_of_range("RotorBasis: index out of range");
    Label out;
    const int r = idx / mode_dim_;
    int mi = idx % mode_dim_;
    out.J = static_cast<int>(std::sqrt(static_cast<double>(r)));
    // Guard against floating point at perfect squares.
    while ((out.J + 1) * (out.J + 1) <= r) ++out.J;
    while (out.J * out.J > r) --out.J;
    out.m = r - out.J * out.J - out.J;
    out.ns.resize(n_modes());
    for (int k = 0; k < n_modes(); ++k) {
        out.ns[k] = mi / strides_[k];
        mi %= strides_[k];
    }
    return out;
}

int RotorBasis::mode_occupation(int mode_idx, int k) const {
    return (mode_idx / strides_[k]) % (fock_cutoffs_[k] + 1);
}

}  // namespace rotorqec
