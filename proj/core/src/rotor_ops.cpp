#include "rotorqec/rotor_ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rotorqec {

double NonlinearShifts::value(int J, int m) const {
    switch (model) {
        case Model::Zero: return 0.0;
        case Model::QuadraticM: return kappa * m * m;
        case Model::Table: {
            auto it = table.find({J, m});
            return it == table.end() ? 0.0 : it->second;
        }
    }
    return 0.0;
}

namespace {

/// Triplets of T(J,m,dJ,dm) (x) M for one mode action. The rotor part is
/// rank-1; the motional part contributes one entry per occupation pattern.
void ladder_mode_triplets(const RotorBasis& basis, int J, int m, int dJ, int dm,
                          cxd amp, const ModeAction& action, std::vector<Triplet>& out) {
    const int src = basis.rotor_index(J, m);
    const int dst = basis.rotor_index(J + dJ, m + dm);
    const int md = basis.mode_dim();

    if (action.kind == ModeAction::Kind::Carrier) {
        for (int mi = 0; mi < md; ++mi)
            out.emplace_back(basis.index_parts(dst, mi), basis.index_parts(src, mi), amp);
        return;
    }
    if (action.mode < 0 || action.mode >= basis.n_modes())
        throw std::invalid_argument("interaction: invalid motional mode index");
    const int cut = basis.fock_cutoffs()[action.mode];
    for (int mi = 0; mi < md; ++mi) {
        const int n = basis.mode_occupation(mi, action.mode);
        if (action.kind == ModeAction::Kind::BlueSideband) {
            if (n >= cut) continue;  // a^dag annihilates the top Fock level
            std::vector<int> ns(basis.n_modes());
            for (int k = 0; k < basis.n_modes(); ++k) ns[k] = basis.mode_occupation(mi, k);
            ns[action.mode] = n + 1;
            out.emplace_back(basis.index_parts(dst, basis.mode_index(ns)),
                             basis.index_parts(src, mi), amp * std::sqrt(n + 1.0));
        } else {  // RedSideband: a
            if (n == 0) continue;
            std::vector<int> ns(basis.n_modes());
            for (int k = 0; k < basis.n_modes(); ++k) ns[k] = basis.mode_occupation(mi, k);
            ns[action.mode] = n - 1;
            out.emplace_back(basis.index_parts(dst, basis.mode_index(ns)),
                             basis.index_parts(src, mi), amp * std::sqrt(static_cast<double>(n)));
        }
    }
}

}  // namespace

LinOp ladder(const BasisPtr& basis, int J, int m, int dJ, int dm) {
    if (!basis->contains(J, m))
        throw std::out_of_range("ladder: source state outside truncation");
    if (!basis->contains(J + dJ, m + dm))
        throw std::out_of_range("ladder: target state outside truncation");
    std::vector<Triplet> entries;
    ladder_mode_triplets(*basis, J, m, dJ, dm, 1.0, ModeAction::carrier(), entries);
    return LinOp::from_triplets(basis, entries);
}

LinOp h_rot(const BasisPtr& basis, const RotorParams& params) {
    std::vector<Triplet> entries;
    for (int J = 0; J <= basis->j_max(); ++J)
        for (int m = -J; m <= J; ++m) {
            const double e = params.omega_jm(J, m);
            if (e == 0.0) continue;
            const int r = basis->rotor_index(J, m);
            for (int mi = 0; mi < basis->mode_dim(); ++mi) {
                const int i = basis->index_parts(r, mi);
                entries.emplace_back(i, i, e);
            }
        }
    return LinOp::from_triplets(basis, entries);
}

LinOp h_nonlinear(const BasisPtr& basis, const RotorParams& params) {
    std::vector<Triplet> entries;
    for (int J = 0; J <= basis->j_max(); ++J)
        for (int m = -J; m <= J; ++m) {
            const double e = params.shifts.value(J, m);
            if (e == 0.0) continue;
            const int r = basis->rotor_index(J, m);
            for (int mi = 0; mi < basis->mode_dim(); ++mi) {
                const int i = basis->index_parts(r, mi);
                entries.emplace_back(i, i, e);
            }
        }
    return LinOp::from_triplets(basis, entries);
}

double raman_gap_min(const RotorParams& params, int J_C) {
    double best = std::numeric_limits<double>::infinity();
    for (int m = -J_C; m <= J_C; ++m)
        for (int dm : {-2, -1, 1, 2}) {
            const int mp = m + dm;
            if (std::abs(mp) > J_C) continue;
            best = std::min(best, std::abs(params.shifts.value(J_C, m) -
                                           params.shifts.value(J_C, mp)));
        }
    return std::isfinite(best) ? best : 0.0;
}

std::pair<double, double> direct_gap_minmax(const RotorParams& params, int J_C) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int dJ : {-1, 1}) {
        const int Jp = J_C + dJ;
        if (Jp < 0) continue;
        for (int m = -J_C; m <= J_C; ++m)
            for (int dm : {-1, 0, 1}) {
                const int mp = m + dm;
                if (std::abs(mp) > Jp) continue;
                const double d = std::abs(params.shifts.value(J_C, m) -
                                          params.shifts.value(Jp, mp));
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
    }
    if (!std::isfinite(lo)) lo = 0.0;
    return {lo, hi};
}

LinOp interaction(const BasisPtr& basis, int J, int m, int dJ, int dm,
                  cxd rabi, const ModeAction& action) {
    if (!basis->contains(J, m) || !basis->contains(J + dJ, m + dm))
        throw std::out_of_range("interaction: transition leaves truncation");
    std::vector<Triplet> entries;
    ladder_mode_triplets(*basis, J, m, dJ, dm, rabi, action, entries);
    // h.c.
    std::vector<Triplet> hc;
    hc.reserve(entries.size());
    for (const auto& t : entries) hc.emplace_back(t.col(), t.row(), std::conj(t.value()));
    entries.insert(entries.end(), hc.begin(), hc.end());
    return LinOp::from_triplets(basis, entries);
}

LinOp unresolved_interaction(const BasisPtr& basis, int J, int dJ, int dm,
                             cxd rabi, const ModeAction& action,
                             const std::function<double(int)>& weight) {
    LinOp sum = LinOp::zero(basis);
    for (int m = -J; m <= J; ++m) {
        if (!basis->contains(J + dJ, m + dm)) continue;
        const double w = weight ? weight(m) : 1.0;
        if (w == 0.0) continue;
        sum += interaction(basis, J, m, dJ, dm, rabi * w, action);
    }
    return sum;
}

}  // namespace rotorqec
